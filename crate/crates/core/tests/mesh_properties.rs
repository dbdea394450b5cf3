use discrete_calabi::mesh::{build_mesh, EdgeId, TriangulatedSurface};
use discrete_calabi::presets;
use proptest::prelude::*;

fn preset(idx: usize) -> TriangulatedSurface {
    presets::by_name(presets::PRESET_NAMES[idx % presets::PRESET_NAMES.len()]).unwrap()
}

/// Applies a sequence of flips, skipping edges that cannot be flipped.
fn scramble(mut m: TriangulatedSurface, picks: &[usize]) -> TriangulatedSurface {
    for &p in picks {
        let e = EdgeId(p % m.num_edges());
        let _ = m.flip_edge(e);
    }
    m
}

#[test]
fn preset_counts() {
    let expect = [("tetra_sphere", 4, 6, 4, 2), ("icosahedron", 12, 30, 20, 2), ("one_vertex_torus", 1, 3, 2, 0), ("genus2_one_vertex", 1, 9, 6, -2), ("flat_torus_16", 16, 48, 32, 0)];
    for (name, v, e, f, chi) in expect {
        let m = presets::by_name(name).unwrap();
        assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces(), m.euler_characteristic()), (v, e, f, chi), "{name}");
        let corners: usize = (0..v).map(|x| m.corners_at_vertex(x).len()).sum();
        assert_eq!(corners, 3 * f);
    }
    assert_eq!(presets::one_vertex_torus().corners_at_vertex(0).len(), 6);
    assert_eq!(presets::genus2_one_vertex().corners_at_vertex(0).len(), 18);
    assert!(presets::by_name("klein_bottle").is_err());
}

proptest! {
    #[test]
    fn handshake_survives_flips(idx in 0usize..5, picks in prop::collection::vec(0usize..1000, 0..40)) {
        let m = scramble(preset(idx), &picks);
        prop_assert_eq!(2 * m.num_edges(), 3 * m.num_faces());
        let chi = preset(idx).euler_characteristic();
        prop_assert_eq!(m.euler_characteristic(), chi);
    }

    #[test]
    fn double_flip_is_identity(idx in 0usize..5, picks in prop::collection::vec(0usize..1000, 0..20), e in 0usize..1000) {
        let m = scramble(preset(idx), &picks);
        let e = EdgeId(e % m.num_edges());
        if let Ok((once, e2)) = m.flipped(e) {
            let (twice, _) = once.flipped(e2).unwrap();
            prop_assert_eq!(twice.canonical_form(), m.canonical_form());
        }
    }

    #[test]
    fn text_round_trip(idx in 0usize..5, picks in prop::collection::vec(0usize..1000, 0..20)) {
        let m = scramble(preset(idx), &picks);
        let back = TriangulatedSurface::from_text(&m.to_text()).unwrap();
        prop_assert_eq!(back.canonical_form(), m.canonical_form());
        prop_assert_eq!(back.to_text(), m.to_text());
    }
}

#[test]
fn faces_round_trip_for_simplicial_presets() {
    for m in [presets::tetra_sphere(), presets::icosahedron(), presets::flat_torus_16()] {
        let rebuilt = build_mesh(m.faces()).unwrap();
        assert_eq!(rebuilt.faces(), m.faces());
        assert_eq!(rebuilt.num_edges(), m.num_edges());
        for e in m.edge_ids() {
            let (a, b) = m.edge_endpoints(e);
            let found = rebuilt.edge_ids().filter(|&x| {
                let (c, d) = rebuilt.edge_endpoints(x);
                (a, b) == (c, d) || (a, b) == (d, c)
            });
            assert_eq!(found.count(), 1);
        }
    }
}

#[test]
fn rejects_bad_input() {
    // a face glued to itself with a reversed orientation cannot close up
    assert!(build_mesh(&[[0, 1, 2], [0, 1, 2]]).is_err());
    assert!(build_mesh(&[[0, 1, 2]]).is_err());
    assert!(TriangulatedSurface::from_text("format=2\n").is_err());
}
