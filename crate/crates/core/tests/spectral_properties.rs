mod common;

use common::{random_instance, Family};
use discrete_calabi::conformal::{u_from_r, Background, DiscreteConformalStructure};
use discrete_calabi::jacobian::jacobian_l;
use discrete_calabi::presets;
use discrete_calabi::spectral::{dominance_constant, off_diagonal_ratio, spectral_decompose_scaled, SpectralForm};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

const POWERS: [f64; 6] = [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

fn decompose(seed: u64, hyp: bool, vs: bool, index: usize) -> (DMatrix<f64>, SpectralForm) {
    let bg = if hyp { Background::Hyperbolic } else { Background::Euclidean };
    let family = if vs { Family::VertexScaling } else { Family::CirclePacking };
    let (mesh, dcs) = random_instance(bg, family, index, &mut common::rng(seed));
    let j = jacobian_l(&mesh, &dcs).unwrap();
    let sp = spectral_decompose_scaled(&j.matrix, j.term_scale()).unwrap();
    (j.matrix, sp)
}

fn sym_min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), hyp in any::<bool>(), vs in any::<bool>(), index in 0usize..3) {
        let (l, sp) = decompose(seed, hyp, vs, index);
        let top = sp.lambda_max();
        prop_assert!(sp.orthogonality_residual() <= 1e-10);
        prop_assert!((sp.fractional_power(1.0) - &l).abs().max() <= 1e-9 * top);
        prop_assert!(sp.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(sp.eigenvalues.iter().all(|&x| x >= 0.0));
        let zero = sp.fractional_power(0.0);
        let n = l.nrows();
        if hyp {
            prop_assert!((zero - DMatrix::<f64>::identity(n, n)).abs().max() <= 1e-10);
        } else {
            // the zero eigenvector is the constant direction
            let k = sp.eigenvalues.iter().position(|&x| x == 0.0).unwrap();
            let v = sp.eigenvectors.column(k);
            let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
            // sine of the angle between them
            let sin = (v - &ones * v.dot(&ones)).norm();
            prop_assert!(sin <= 1e-8, "{}", sin);
        }
    }

    #[test]
    fn powers_compose(seed in any::<u64>(), hyp in any::<bool>(), vs in any::<bool>(), index in 0usize..3, a in 0usize..6, b in 0usize..6) {
        let (_, sp) = decompose(seed, hyp, vs, index);
        let (a, b) = (POWERS[a], POWERS[b]);
        let (lo, hi) = (sp.lambda_min().max(sp.nonzero_range().unwrap().1), sp.lambda_max());
        let scale = [a, b, a + b].iter().map(|&p| lo.powf(p).max(hi.powf(p))).fold(1.0, f64::max);
        let lhs = sp.fractional_power(a) * sp.fractional_power(b);
        prop_assert!((lhs - sp.fractional_power(a + b)).abs().max() <= 1e-8 * scale);
    }

    #[test]
    fn powers_keep_sign_structure(seed in any::<u64>(), hyp in any::<bool>(), vs in any::<bool>(), index in 0usize..3) {
        let (l, sp) = decompose(seed, hyp, vs, index);
        let n = l.nrows();
        for s in POWERS {
            let p = sp.fractional_power(s);
            prop_assert!((&p - p.transpose()).abs().max() <= 1e-12 * p.abs().max().max(1.0));
            let min = sym_min_eigenvalue(&p);
            let size = p.abs().max().max(1.0);
            if hyp {
                prop_assert!(min > 0.0, "s = {}: {}", s, min);
            } else if s != 0.0 {
                // rank N − 1 with the constants in the kernel
                prop_assert!(min >= -1e-9 * size);
                let ones = DVector::from_element(n, 1.0);
                prop_assert!((&p * ones).amax() <= 1e-9 * size);
                let pos = p.clone().symmetric_eigen().eigenvalues.iter().filter(|&&x| x > 1e-9 * size).count();
                prop_assert_eq!(pos, n - 1);
            }
        }
    }

    #[test]
    fn off_diagonal_ratio_bound(seed in any::<u64>(), index in 0usize..3) {
        let (l, sp) = decompose(seed, true, false, index);
        let (hi, lo) = sp.nonzero_range().unwrap();
        let base = off_diagonal_ratio(&l);
        for s in POWERS {
            let c = dominance_constant(s, lo, hi);
            let got = off_diagonal_ratio(&sp.fractional_power(s));
            prop_assert!(got <= c * base * (1.0 + 1e-9) + 1e-14, "s = {}: {} > {} · {}", s, got, c, base);
        }
    }
}

/// Unit-radius packing of the icosahedron, every vertex alike.
#[test]
fn dominance_at_symmetric_packing() {
    let mesh = presets::icosahedron();
    let u = vec![u_from_r(1.0).unwrap(); 12];
    let dcs = DiscreteConformalStructure::circle_packing(&mesh, Background::Hyperbolic, vec![1.0; 30], u).unwrap();
    let j = jacobian_l(&mesh, &dcs).unwrap();
    let sp = spectral_decompose_scaled(&j.matrix, j.term_scale()).unwrap();
    let (hi, lo) = sp.nonzero_range().unwrap();
    assert!(lo > 0.0 && hi >= lo);
    let base = off_diagonal_ratio(&j.matrix);
    assert!(base > 0.0);
    for s in POWERS {
        let got = off_diagonal_ratio(&sp.fractional_power(s));
        let c = dominance_constant(s, lo, hi);
        assert!(got <= c * base * (1.0 + 1e-9) + 1e-14, "s = {s}: {got} > {c} · {base}");
    }
    // s = 1 gives back the original ratio, and the constant is at least one there
    let again = off_diagonal_ratio(&sp.fractional_power(1.0));
    assert!((again - base).abs() < 1e-9 * base, "{again} vs {base}");
    assert!(dominance_constant(1.0, lo, hi) >= 1.0);
}
