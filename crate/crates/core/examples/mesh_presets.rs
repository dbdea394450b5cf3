//! Built-in triangulations, corner counts, and a few random edge flips.
//!
//! cargo run --example mesh_presets

use discrete_calabi::mesh::{EdgeId, TriangulatedSurface};
use discrete_calabi::presets;

fn main() {
    for (name, mesh) in presets::all() {
        let degrees: Vec<usize> = (0..mesh.num_vertices()).map(|v| mesh.corners_at_vertex(v).len()).collect();
        println!(
            "{name:<18} V={:<3} E={:<3} F={:<3} chi={:<3} corners per vertex {:?}",
            mesh.num_vertices(),
            mesh.num_edges(),
            mesh.num_faces(),
            mesh.euler_characteristic(),
            &degrees[..degrees.len().min(6)]
        );
    }

    // flips change the combinatorics but never the topology
    let mut torus = presets::flat_torus_16();
    let before = torus.canonical_form();
    let mut done = Vec::new();
    for k in [0, 7, 19, 33, 40] {
        if let Ok(e) = torus.flip_edge(EdgeId(k)) {
            done.push(e);
        }
    }
    println!("\nflipped {} edges of flat_torus_16, chi is still {}", done.len(), torus.euler_characteristic());
    for e in done.into_iter().rev() {
        torus.flip_edge(e).unwrap();
    }
    println!("undoing them restores the triangulation: {}", torus.canonical_form() == before);

    let text = presets::one_vertex_torus().to_text();
    println!("\none_vertex_torus as text:\n{text}");
    let back = TriangulatedSurface::from_text(&text).unwrap();
    println!("round trip ok: {}", back.to_text() == text);
}
