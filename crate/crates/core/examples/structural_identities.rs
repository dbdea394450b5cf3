//! Identities behind the Jacobian of a hyperbolic circle packing: the
//! closed-form angle derivative, the split into area and Laplacian parts,
//! and the squared-area expression.
//!
//! cargo run --example structural_identities

use discrete_calabi::conformal::{u_from_r, Background, DiscreteConformalStructure};
use discrete_calabi::geometry::MetricState;
use discrete_calabi::jacobian::{area_squared_identity_residual, cp_angle_derivative_closed_form, decompose_a_b, jacobian_l};
use discrete_calabi::presets;

fn main() {
    let mesh = presets::icosahedron();
    let u: Vec<f64> = (0..12).map(|i| u_from_r(0.6 + 0.1 * i as f64).unwrap()).collect();
    let eta: Vec<f64> = (0..30).map(|e| 0.4 + 0.02 * e as f64).collect();
    let dcs = DiscreteConformalStructure::circle_packing(&mesh, Background::Hyperbolic, eta, u).unwrap();
    let jac = jacobian_l(&mesh, &dcs).unwrap();
    let ab = decompose_a_b(&mesh, &dcs).unwrap();

    let mut l_minus = jac.matrix.clone();
    for i in 0..12 {
        l_minus[(i, i)] -= ab.a[i];
    }
    println!("|L - (A + B)| = {:.2e}", (l_minus - &ab.b).abs().max());
    println!("A (incident area derivatives) in [{:.4}, {:.4}]", ab.a.iter().cloned().fold(f64::INFINITY, f64::min), ab.a.iter().cloned().fold(0.0, f64::max));
    let rows: f64 = (0..12).map(|i| ab.b.row(i).sum().abs()).fold(0.0, f64::max);
    println!("B has zero row sums: {rows:.2e}");
    let off = (0..12)
        .flat_map(|i| (0..12).filter(move |&j| j != i).map(move |j| (i, j)))
        .filter(|&(i, j)| ab.b[(i, j)] > 0.0)
        .count();
    println!("positive off-diagonal entries of B: {off}");

    let metric = MetricState::new(&mesh, dcs.lengths(&mesh).unwrap(), Background::Hyperbolic).unwrap();
    let radii = dcs.radii().unwrap();
    let (mut closed, mut squared) = (0.0f64, 0.0f64);
    for f in mesh.face_ids() {
        let tri = mesh.face(f);
        let fe = mesh.face_edges(f);
        let l = fe.map(|e| metric.lengths[e.0]);
        let eta = fe.map(|e| dcs.eta()[e.0]);
        for a in 0..3 {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            // side a joins slots a and b; the corner at a faces side b
            let r = [radii[tri[a]], radii[tri[b]], radii[tri[c]]];
            let d = cp_angle_derivative_closed_form(r, eta[a], eta[c], eta[b]).unwrap();
            closed = closed.max((d - jac.face_gradients[f.0][a][b]).abs());
            squared = squared.max(area_squared_identity_residual([l[b], l[a], l[c]], metric.angles[f.0][a]));
        }
    }
    println!("closed-form angle derivative vs chain rule: {closed:.2e}");
    println!("squared-area identity, worst corner: {squared:.2e}");
}
