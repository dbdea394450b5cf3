//! Edge lengths of circle packings, vertex scalings and mixed structures,
//! and how they respond to the conformal factor.
//!
//! cargo run --example conformal_lengths

use discrete_calabi::conformal::{cp_length_from_radii, r_from_u, u_from_r, Background, DiscreteConformalStructure};
use discrete_calabi::geometry::MetricState;
use discrete_calabi::presets;

fn main() {
    let mesh = presets::tetra_sphere();

    // Euclidean packing with tangent circles: l = r_i + r_j
    let u = vec![0.0, 0.3f64.ln(), 0.0, 2f64.ln()];
    let cp = DiscreteConformalStructure::circle_packing(&mesh, Background::Euclidean, vec![1.0; 6], u).unwrap();
    let radii: Vec<f64> = cp.u().iter().map(|u| u.exp()).collect();
    println!("euclidean tangent packing, radii {radii:?}");
    for e in mesh.edge_ids() {
        let (i, j) = mesh.edge_endpoints(e);
        println!("  edge {i}-{j}: {:.6}", cp.edge_length(&mesh, e).unwrap());
    }

    // hyperbolic packing with overlapping circles (η = 0.5)
    let radii = [0.5, 1.0, 1.5, 2.0];
    let u: Vec<f64> = radii.iter().map(|&r| u_from_r(r).unwrap()).collect();
    let h = DiscreteConformalStructure::circle_packing(&mesh, Background::Hyperbolic, vec![0.5; 6], u).unwrap();
    println!("\nhyperbolic packing, eta = 0.5");
    for e in mesh.edge_ids() {
        let (i, j) = mesh.edge_endpoints(e);
        let direct = cp_length_from_radii(radii[i], radii[j], 0.5).unwrap();
        println!("  edge {i}-{j}: {:.10} (from radii {:.10})", h.edge_length(&mesh, e).unwrap(), direct);
    }
    println!("  r recovered from u: {:.12}", r_from_u(h.u()[2]).unwrap());

    // vertex scaling of a regular genus-2 surface
    let g2 = presets::genus2_one_vertex();
    for u0 in [0.0, 0.2, -0.2] {
        let vs = DiscreteConformalStructure::vertex_scaling(&g2, Background::Hyperbolic, &[1.5; 9], vec![u0]).unwrap();
        let metric = MetricState::new(&g2, vs.lengths(&g2).unwrap(), Background::Hyperbolic).unwrap();
        println!(
            "\ngenus 2, u = {u0:+.1}: length {:.6}, K = {:+.6}, area {:.6}",
            metric.lengths[0],
            metric.curvature[0],
            metric.face_areas.iter().sum::<f64>()
        );
    }
}
