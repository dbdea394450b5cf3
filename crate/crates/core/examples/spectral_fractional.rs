//! The curvature Jacobian, its spectrum, and fractional powers.
//!
//! cargo run --example spectral_fractional

use discrete_calabi::conformal::{u_from_r, Background, DiscreteConformalStructure};
use discrete_calabi::jacobian::jacobian_l;
use discrete_calabi::presets;
use discrete_calabi::spectral::{off_diagonal_ratio, spectral_decompose_scaled};

fn main() {
    let mesh = presets::icosahedron();
    for bg in [Background::Euclidean, Background::Hyperbolic] {
        let u0 = if bg == Background::Hyperbolic { u_from_r(1.0).unwrap() } else { 0.0 };
        let u: Vec<f64> = (0..12).map(|i| u0 + 0.05 * (i as f64 - 5.5)).collect();
        let dcs = DiscreteConformalStructure::circle_packing(&mesh, bg, vec![1.0; 30], u).unwrap();
        let jac = jacobian_l(&mesh, &dcs).unwrap();
        let sp = spectral_decompose_scaled(&jac.matrix, jac.term_scale()).unwrap();
        println!("{} background", bg.name());
        println!("  symmetry residual {:.2e}", jac.symmetry_residual());
        println!("  zero eigenvalues {}", sp.zero_count());
        let (hi, lo) = sp.nonzero_range().unwrap();
        println!("  nonzero spectrum [{lo:.6}, {hi:.6}]");
        for s in [-1.0, -0.5, 0.5, 1.0, 2.0] {
            let p = sp.fractional_power(s);
            println!(
                "  s = {s:+.1}: condition {:>10.3}, off-diagonal ratio {:.4}",
                sp.condition_diagnostic(s),
                off_diagonal_ratio(&p)
            );
        }
        let half = sp.fractional_power(0.5);
        println!("  |L^0.5 L^0.5 - L| = {:.2e}\n", (&half * &half - &jac.matrix).abs().max());
    }
}
