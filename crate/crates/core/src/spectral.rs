//! Symmetric eigendecomposition of `L` and its fractional powers `Lˢ`, with
//! the convention `0ˢ = 0` for every `s`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues with `|λ| ≤ ZERO_REL · max|λ|` are treated as exact zeros.
pub const ZERO_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralForm {
    /// Descending, clamped zeros stored as exactly `0.0`.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector of `eigenvalues[i]`.
    pub eigenvectors: DMatrix<f64>,
    pub scale: f64,
}

pub fn spectral_decompose(l: &DMatrix<f64>) -> Result<SpectralForm> {
    spectral_decompose_scaled(l, 0.0)
}

/// As [`spectral_decompose`], with the zero threshold measured against
/// `max(max|λ|, reference)`. Assembled matrices pass the size of the terms
/// they were summed from, so that a matrix that cancels to rounding noise is
/// recognised as zero.
pub fn spectral_decompose_scaled(l: &DMatrix<f64>, reference: f64) -> Result<SpectralForm> {
    let n = l.nrows();
    if l.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: l.ncols(),
        });
    }
    let scale = l.abs().max();
    let asym = (l - l.transpose()).abs().max();
    if asym > 1e-10 * (1.0 + scale.max(reference)) {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = (l + l.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let lam_scale = eig.eigenvalues.iter().fold(reference, |m, x| m.max(x.abs()));
    let threshold = ZERO_REL * lam_scale;
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (c, &k) in order.iter().enumerate() {
        let lam = eig.eigenvalues[k];
        if lam < -threshold {
            return Err(Error::NotPsd {
                eigenvalue: lam,
                scale: lam_scale,
            });
        }
        eigenvalues.push(if lam.abs() <= threshold { 0.0 } else { lam });
        eigenvectors.set_column(c, &eig.eigenvectors.column(k));
    }
    Ok(SpectralForm {
        eigenvalues,
        eigenvectors,
        scale: lam_scale,
    })
}

impl SpectralForm {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn zero_count(&self) -> usize {
        self.eigenvalues.iter().filter(|&&x| x == 0.0).count()
    }

    /// Largest and smallest nonzero eigenvalue, if any.
    pub fn nonzero_range(&self) -> Option<(f64, f64)> {
        let nz: Vec<f64> = self.eigenvalues.iter().copied().filter(|&x| x > 0.0).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    fn powered(&self, s: f64) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|&l| if l == 0.0 { 0.0 } else { l.powf(s) })
            .collect()
    }

    /// `(λ_max/λ_min)^|s|` over the nonzero spectrum.
    pub fn condition_diagnostic(&self, s: f64) -> f64 {
        self.nonzero_range()
            .map_or(1.0, |(hi, lo)| (hi / lo).powf(s.abs()))
    }

    pub fn fractional_power(&self, s: f64) -> DMatrix<f64> {
        let p = &self.eigenvectors;
        let d = DVector::from_vec(self.powered(s));
        let mut scaled = p.clone();
        for (c, mut col) in scaled.column_iter_mut().enumerate() {
            col *= d[c];
        }
        let m = scaled * p.transpose();
        (&m + m.transpose()) * 0.5
    }

    /// `Lˢ x` without forming the matrix.
    pub fn apply_power(&self, s: f64, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let p = &self.eigenvectors;
        let coeffs = p.transpose() * DVector::from_column_slice(x);
        let d = self.powered(s);
        let weighted = DVector::from_iterator(self.dim(), coeffs.iter().zip(&d).map(|(c, l)| c * l));
        Ok((p * weighted).as_slice().to_vec())
    }

    /// `Δˢx = −Lˢx`.
    pub fn apply_fractional_laplacian(&self, s: f64, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.apply_power(s, x)?.into_iter().map(|v| -v).collect())
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let p = &self.eigenvectors;
        (p.transpose() * p - DMatrix::identity(self.dim(), self.dim())).abs().max()
    }
}

/// Off-diagonal dominance ratio `Σ_{j≠i} M_ij² / M_ii²`, maximised over `i`.
pub fn off_diagonal_ratio(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| {
            let off: f64 = (0..m.ncols()).filter(|&j| j != i).map(|j| m[(i, j)].powi(2)).sum();
            off / m[(i, i)].powi(2)
        })
        .fold(0.0, f64::max)
}

/// Constant bounding the ratio for `Lˢ` in terms of the ratio for `L` when
/// the nonzero spectrum lies in `[lo, hi]`: `C'² hi² / m²` with
/// `C' = max |s ξ^{s−1}|` and `m = min ξˢ` over the interval.
pub fn dominance_constant(s: f64, lo: f64, hi: f64) -> f64 {
    let dpow = |x: f64| (s * x.powf(s - 1.0)).abs();
    let c1 = dpow(lo).max(dpow(hi));
    let m = lo.powf(s).min(hi.powf(s));
    c1 * c1 * hi * hi / (m * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn diagonal_example() {
        let l = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let sp = spectral_decompose(&l).unwrap();
        assert_eq!(sp.eigenvalues, vec![3.0, 2.0]);
        let half = sp.fractional_power(0.5);
        assert_relative_eq!(half[(0, 0)], 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(half[(1, 1)], 3f64.sqrt(), epsilon = 1e-15);
        assert!(half[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn path_laplacian_powers() {
        let l = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let sp = spectral_decompose(&l).unwrap();
        assert_relative_eq!(sp.eigenvalues[0], 2.0, epsilon = 1e-15);
        assert_eq!(sp.eigenvalues[1], 0.0);
        let v = sp.eigenvectors.column(1);
        assert_relative_eq!(v[0].abs(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(v[0], v[1], epsilon = 1e-15);
        for s in [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            let p = sp.fractional_power(s);
            let expect = &l * 2f64.powf(s - 1.0);
            assert!((p - expect).abs().max() < 1e-14);
        }
        let x = sp.apply_fractional_laplacian(0.0, &[0.3, -0.3]).unwrap();
        assert_relative_eq!(x[0], -0.3, epsilon = 1e-15);
        let k = sp.apply_fractional_laplacian(-1.0, &[1.0, 1.0]).unwrap();
        assert!(k.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn zero_and_errors() {
        let sp = spectral_decompose(&DMatrix::zeros(1, 1)).unwrap();
        assert_eq!(sp.eigenvalues, vec![0.0]);
        assert_eq!(sp.fractional_power(-1.0)[(0, 0)], 0.0);
        let neg = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(spectral_decompose(&neg), Err(Error::NotPsd { .. })));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(spectral_decompose(&asym), Err(Error::NotSymmetric(_))));
        assert!(matches!(
            sp.apply_power(1.0, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dominance_constant_at_s_one() {
        // s = 1: C' = 1, m = lo
        assert_relative_eq!(dominance_constant(1.0, 0.5, 2.0), 16.0, epsilon = 1e-14);
    }
}
