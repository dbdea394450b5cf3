//! Discrete conformal structures: vertex weights ε ∈ {0, 1}, edge weights η,
//! and the conformal factor in its `f`, `u` and (for hyperbolic circle
//! packings) radius coordinates, together with the length laws they induce.
//!
//! `u` is the stored coordinate; `f` and `r` are derived views.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mesh::{EdgeId, FaceId, TriangulatedSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Background {
    Euclidean,
    Hyperbolic,
}

impl Background {
    pub fn name(self) -> &'static str {
        match self {
            Background::Euclidean => "euclidean",
            Background::Hyperbolic => "hyperbolic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "euclidean" => Some(Background::Euclidean),
            "hyperbolic" => Some(Background::Hyperbolic),
            _ => None,
        }
    }
}

/// Violations of `ε_s ε_t + η_st > 0` (edges) and
/// `ε_q η_st + η_qs η_qt ≥ 0` (corners, reported as `(face, slot of q)`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StructureConditionReport {
    pub edge_violations: Vec<EdgeId>,
    pub corner_violations: Vec<(FaceId, usize)>,
}

impl StructureConditionReport {
    pub fn holds(&self) -> bool {
        self.edge_violations.is_empty() && self.corner_violations.is_empty()
    }
}

pub fn check_structure_condition(
    mesh: &TriangulatedSurface,
    epsilon: &[f64],
    eta: &[f64],
) -> StructureConditionReport {
    let mut report = StructureConditionReport::default();
    for e in mesh.edge_ids() {
        let (s, t) = mesh.edge_endpoints(e);
        if epsilon[s] * epsilon[t] + eta[e.0] <= 0.0 {
            report.edge_violations.push(e);
        }
    }
    for f in mesh.face_ids() {
        let tri = mesh.face(f);
        let fe = mesh.face_edges(f);
        for q in 0..3 {
            // corner q: opposite side q+1, adjacent sides q and q+2
            let eta_st = eta[fe[(q + 1) % 3].0];
            let eta_qs = eta[fe[q].0];
            let eta_qt = eta[fe[(q + 2) % 3].0];
            if epsilon[tri[q]] * eta_st + eta_qs * eta_qt < 0.0 {
                report.corner_violations.push((f, q));
            }
        }
    }
    report
}

/// Hyperbolic circle-packing radius from `u = log tanh(r/2)`, `u < 0`.
pub fn r_from_u(u: f64) -> Result<f64> {
    if !(u < 0.0) {
        return Err(Error::InvalidU(u));
    }
    // 2 artanh(e^u) = log(1 + e^u) - log(1 - e^u)
    Ok(u.exp().ln_1p() - (-u.exp_m1()).ln())
}

pub fn u_from_r(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidR(r));
    }
    // log tanh(r/2) = log(-expm1(-r)) - log1p(e^-r)
    Ok((-(-r).exp_m1()).ln() - (-r).exp().ln_1p())
}

/// Per-vertex data entering the length laws: `e^f`, `ε e^{2f}` and `df/du`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexFactor {
    pub ef: f64,
    pub a: f64,
    pub df_du: f64,
}

impl VertexFactor {
    pub fn new(background: Background, epsilon: f64, u: f64) -> Result<Self> {
        match background {
            Background::Hyperbolic if epsilon == 1.0 => {
                let r = r_from_u(u)?;
                let (sh, ch) = (r.sinh(), r.cosh());
                Ok(VertexFactor {
                    ef: sh,
                    a: sh * sh,
                    df_du: ch,
                })
            }
            _ => {
                let ef = u.exp();
                Ok(VertexFactor {
                    ef,
                    a: epsilon * ef * ef,
                    df_du: 1.0,
                })
            }
        }
    }
}

/// A length together with its partial derivatives in the two endpoint `u`s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeLength {
    pub length: f64,
    pub d_du: [f64; 2],
}

/// Length law for one edge from its endpoint factors.
///
/// Euclidean: `l² = ε_i e^{2f_i} + ε_j e^{2f_j} + 2 η e^{f_i+f_j}`.
/// Hyperbolic: `cosh l = √((1+ε_i e^{2f_i})(1+ε_j e^{2f_j})) + η e^{f_i+f_j}`,
/// evaluated through `cosh l − 1` so that short edges keep full precision.
pub fn edge_length_from_factors(
    background: Background,
    vi: VertexFactor,
    vj: VertexFactor,
    eta: f64,
) -> Option<EdgeLength> {
    let cross = eta * vi.ef * vj.ef;
    match background {
        Background::Euclidean => {
            let sq = vi.a + vj.a + 2.0 * cross;
            if !(sq > 0.0) || !sq.is_finite() {
                return None;
            }
            let l = sq.sqrt();
            Some(EdgeLength {
                length: l,
                d_du: [(vi.a + cross) / l * vi.df_du, (vj.a + cross) / l * vj.df_du],
            })
        }
        Background::Hyperbolic => {
            let root = ((1.0 + vi.a) * (1.0 + vj.a)).sqrt();
            let y = (vi.a + vj.a + vi.a * vj.a) / (root + 1.0) + cross;
            if !(y > 0.0) || !y.is_finite() {
                return None;
            }
            let l = acosh1p(y);
            let sinh_l = (y * (y + 2.0)).sqrt();
            let dcosh_i = vi.a * ((1.0 + vj.a) / (1.0 + vi.a)).sqrt() + cross;
            let dcosh_j = vj.a * ((1.0 + vi.a) / (1.0 + vj.a)).sqrt() + cross;
            Some(EdgeLength {
                length: l,
                d_du: [dcosh_i / sinh_l * vi.df_du, dcosh_j / sinh_l * vj.df_du],
            })
        }
    }
}

/// `cosh⁻¹(1 + y)` for `y ≥ 0`, accurate for tiny `y` and without overflow
/// for huge `y`.
pub fn acosh1p(y: f64) -> f64 {
    if y > 1e8 {
        // log(x + sqrt(x²-1)) with x = 1 + y ≈ log(2x)
        (1.0 + y).ln() + std::f64::consts::LN_2 - 0.25 / ((1.0 + y) * (1.0 + y))
    } else {
        2.0 * (0.5 * y).sqrt().asinh()
    }
}

/// Hyperbolic circle-packing length `cosh l = cosh r_i cosh r_j + η sinh r_i sinh r_j`.
pub fn cp_length_from_radii(r_i: f64, r_j: f64, eta: f64) -> Result<f64> {
    if !(r_i > 0.0) {
        return Err(Error::InvalidR(r_i));
    }
    if !(r_j > 0.0) {
        return Err(Error::InvalidR(r_j));
    }
    if !(eta > -1.0 && eta <= 1.0) {
        return Err(Error::PreconditionViolated(format!(
            "circle packing needs eta in (-1, 1], got {eta}"
        )));
    }
    // cosh(ri+rj) - 1 - (1 - η) sinh ri sinh rj
    let y = 2.0 * (0.5 * (r_i + r_j)).sinh().powi(2) - (1.0 - eta) * r_i.sinh() * r_j.sinh();
    if !(y > 0.0) {
        return Err(Error::DegenerateLength { edge: None });
    }
    Ok(acosh1p(y))
}

/// Vertex scaling of a given metric on a fixed triangulation:
/// `l̃ = l e^{(u_i+u_j)/2}` (Euclidean), `sinh(l̃/2) = sinh(l/2) e^{(u_i+u_j)/2}`
/// (hyperbolic).
pub fn vertex_scale_lengths(
    mesh: &TriangulatedSurface,
    lengths: &[f64],
    u: &[f64],
    background: Background,
) -> Vec<f64> {
    mesh.edge_ids()
        .map(|e| {
            let (i, j) = mesh.edge_endpoints(e);
            let w = 0.5 * (u[i] + u[j]);
            let l = lengths[e.0];
            match background {
                Background::Euclidean => l * w.exp(),
                Background::Hyperbolic => 2.0 * ((0.5 * l).sinh() * w.exp()).asinh(),
            }
        })
        .collect()
}

/// Faces whose three lengths fail a strict triangle inequality.
pub fn nondegeneracy_check(mesh: &TriangulatedSurface, lengths: &[f64]) -> Vec<FaceId> {
    mesh.face_ids()
        .filter(|&f| {
            let [a, b, c] = mesh.face_edges(f).map(|e| lengths[e.0]);
            !(a < b + c && b < c + a && c < a + b)
        })
        .collect()
}

/// Smallest relative triangle-inequality slack `(b + c − a)/(a + b + c)` over
/// all faces.
pub fn min_triangle_slack(mesh: &TriangulatedSurface, lengths: &[f64]) -> f64 {
    mesh.face_ids()
        .map(|f| {
            let [a, b, c] = mesh.face_edges(f).map(|e| lengths[e.0]);
            let p = a + b + c;
            ((b + c - a).min(c + a - b).min(a + b - c)) / p
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteConformalStructure {
    pub background: Background,
    epsilon: Vec<f64>,
    eta: Vec<f64>,
    u: Vec<f64>,
}

impl DiscreteConformalStructure {
    /// Checks sizes, `ε ∈ {0, 1}` and finiteness; the structure condition is
    /// reported separately by [`check_structure_condition`].
    pub fn new(
        mesh: &TriangulatedSurface,
        background: Background,
        epsilon: Vec<f64>,
        eta: Vec<f64>,
        u: Vec<f64>,
    ) -> Result<Self> {
        let n = mesh.num_vertices();
        if epsilon.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: epsilon.len(),
            });
        }
        if u.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.len(),
            });
        }
        if eta.len() != mesh.num_edges() {
            return Err(Error::DimensionMismatch {
                expected: mesh.num_edges(),
                got: eta.len(),
            });
        }
        for (v, &e) in epsilon.iter().enumerate() {
            if e != 0.0 && e != 1.0 {
                return Err(Error::InvalidEpsilon {
                    vertex: v,
                    value: e,
                });
            }
        }
        if let Some(&bad) = eta.iter().find(|x| !x.is_finite()) {
            return Err(Error::PreconditionViolated(format!("non-finite eta {bad}")));
        }
        let s = DiscreteConformalStructure {
            background,
            epsilon,
            eta,
            u,
        };
        s.check_u(&s.u)?;
        Ok(s)
    }

    /// Thurston circle packing, ε ≡ 1.
    pub fn circle_packing(
        mesh: &TriangulatedSurface,
        background: Background,
        eta: Vec<f64>,
        u: Vec<f64>,
    ) -> Result<Self> {
        if let Some(&bad) = eta.iter().find(|&&x| !(x > -1.0 && x <= 1.0)) {
            return Err(Error::PreconditionViolated(format!(
                "circle packing needs eta in (-1, 1], got {bad}"
            )));
        }
        Self::new(mesh, background, vec![1.0; mesh.num_vertices()], eta, u)
    }

    /// Vertex scaling (ε ≡ 0) of a reference metric: at `u = 0` the lengths
    /// are `reference`; `η` is solved from the length law.
    pub fn vertex_scaling(
        mesh: &TriangulatedSurface,
        background: Background,
        reference: &[f64],
        u: Vec<f64>,
    ) -> Result<Self> {
        if reference.len() != mesh.num_edges() {
            return Err(Error::DimensionMismatch {
                expected: mesh.num_edges(),
                got: reference.len(),
            });
        }
        let eta = reference
            .iter()
            .map(|&l| match background {
                Background::Euclidean => 0.5 * l * l,
                Background::Hyperbolic => 2.0 * (0.5 * l).sinh().powi(2),
            })
            .collect();
        Self::new(mesh, background, vec![0.0; mesh.num_vertices()], eta, u)
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }
    pub fn u(&self) -> &[f64] {
        &self.u
    }
    pub fn num_vertices(&self) -> usize {
        self.u.len()
    }

    pub fn is_circle_packing(&self) -> bool {
        self.epsilon.iter().all(|&e| e == 1.0)
    }
    pub fn is_vertex_scaling(&self) -> bool {
        self.epsilon.iter().all(|&e| e == 0.0)
    }

    fn check_u(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.epsilon.len() {
            return Err(Error::DimensionMismatch {
                expected: self.epsilon.len(),
                got: u.len(),
            });
        }
        for (i, &x) in u.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidU(x));
            }
            if self.background == Background::Hyperbolic && self.epsilon[i] == 1.0 && x >= 0.0 {
                return Err(Error::InvalidU(x));
            }
        }
        Ok(())
    }

    pub fn set_u(&mut self, u: Vec<f64>) -> Result<()> {
        self.check_u(&u)?;
        self.u = u;
        Ok(())
    }

    pub fn with_u(&self, u: &[f64]) -> Result<Self> {
        let mut s = self.clone();
        s.set_u(u.to_vec())?;
        Ok(s)
    }

    pub fn set_eta(&mut self, e: EdgeId, eta: f64) {
        self.eta[e.0] = eta;
    }

    /// `f` from `u`: identity except at hyperbolic ε = 1 vertices where
    /// `e^f = sinh r`.
    pub fn f(&self) -> Vec<f64> {
        self.u
            .iter()
            .zip(&self.epsilon)
            .map(|(&u, &e)| self.f_of(u, e))
            .collect()
    }

    fn f_of(&self, u: f64, epsilon: f64) -> f64 {
        if self.background == Background::Hyperbolic && epsilon == 1.0 {
            let r = r_from_u(u).expect("u validated");
            r.sinh().ln()
        } else {
            u
        }
    }

    /// Inverse of [`Self::f`]; hyperbolic ε = 1 uses
    /// `u = ½ log((√(1+e^{2f}) − 1)/(√(1+e^{2f}) + 1))`.
    pub fn u_from_f(background: Background, epsilon: &[f64], f: &[f64]) -> Vec<f64> {
        f.iter()
            .zip(epsilon)
            .map(|(&f, &e)| {
                if background == Background::Hyperbolic && e == 1.0 {
                    // e^{2f} = sinh² r; numerator rewritten as e^{2f}/(√(1+e^{2f})+1)
                    let e2f = (2.0 * f).exp();
                    let root = (1.0 + e2f).sqrt();
                    0.5 * ((e2f / (root + 1.0)).ln() - (root + 1.0).ln())
                } else {
                    f
                }
            })
            .collect()
    }

    /// Radii of a hyperbolic circle packing.
    pub fn radii(&self) -> Result<Vec<f64>> {
        if self.background != Background::Hyperbolic || !self.is_circle_packing() {
            return Err(Error::PreconditionViolated(
                "radii exist only for hyperbolic circle packings".into(),
            ));
        }
        self.u.iter().map(|&u| r_from_u(u)).collect()
    }

    pub fn vertex_factors(&self) -> Result<Vec<VertexFactor>> {
        self.u
            .iter()
            .zip(&self.epsilon)
            .map(|(&u, &e)| VertexFactor::new(self.background, e, u))
            .collect()
    }

    pub fn edge_length(&self, mesh: &TriangulatedSurface, e: EdgeId) -> Result<f64> {
        let (i, j) = mesh.edge_endpoints(e);
        let vi = VertexFactor::new(self.background, self.epsilon[i], self.u[i])?;
        let vj = VertexFactor::new(self.background, self.epsilon[j], self.u[j])?;
        edge_length_from_factors(self.background, vi, vj, self.eta[e.0])
            .map(|l| l.length)
            .ok_or(Error::DegenerateLength { edge: Some(e) })
    }

    pub fn lengths(&self, mesh: &TriangulatedSurface) -> Result<Vec<f64>> {
        let vf = self.vertex_factors()?;
        mesh.edge_ids()
            .map(|e| {
                let (i, j) = mesh.edge_endpoints(e);
                edge_length_from_factors(self.background, vf[i], vf[j], self.eta[e.0])
                    .map(|l| l.length)
                    .ok_or(Error::DegenerateLength { edge: Some(e) })
            })
            .collect()
    }

    /// The `η` that makes edge `e` (endpoints `k`, `l`) have length `length`
    /// at the current `u`. Used to re-anchor a flipped diagonal.
    pub fn eta_for_length(&self, k: usize, l: usize, length: f64) -> Result<f64> {
        let vk = VertexFactor::new(self.background, self.epsilon[k], self.u[k])?;
        let vl = VertexFactor::new(self.background, self.epsilon[l], self.u[l])?;
        let prod = vk.ef * vl.ef;
        Ok(match self.background {
            Background::Euclidean => (length * length - vk.a - vl.a) / (2.0 * prod),
            Background::Hyperbolic => {
                let y = 2.0 * (0.5 * length).sinh().powi(2);
                let root = ((1.0 + vk.a) * (1.0 + vl.a)).sqrt();
                (y - (vk.a + vl.a + vk.a * vl.a) / (root + 1.0)) / prod
            }
        })
    }

    /// Structure file: `format=1`, `background <name>`, then `v i ε f` and
    /// `e index η` lines, reals written with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::from("format=1\n");
        let _ = writeln!(s, "background {}", self.background.name());
        for (i, (f, e)) in self.f().iter().zip(&self.epsilon).enumerate() {
            let _ = writeln!(s, "v {i} {} {f:.16e}", *e as u8);
        }
        for (i, eta) in self.eta.iter().enumerate() {
            let _ = writeln!(s, "e {i} {eta:.16e}");
        }
        s
    }

    pub fn from_text(mesh: &TriangulatedSurface, text: &str) -> Result<Self> {
        let n = mesh.num_vertices();
        let mut background = None;
        let mut eps = vec![None; n];
        let mut f = vec![0.0; n];
        let mut eta = vec![None; mesh.num_edges()];
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            let col = |k: usize| raw.find(toks[k]).map_or(1, |p| p + 1);
            let perr = |k: usize, m: String| Error::Parse {
                line,
                column: col(k),
                message: m,
            };
            match toks[0] {
                t if t.starts_with("format=") => {
                    if t != "format=1" {
                        return Err(perr(0, format!("unsupported `{t}`")));
                    }
                }
                "background" if toks.len() == 2 => {
                    background = Some(
                        Background::parse(toks[1])
                            .ok_or_else(|| perr(1, format!("unknown background `{}`", toks[1])))?,
                    );
                }
                "v" if toks.len() == 4 => {
                    let i: usize = toks[1].parse().map_err(|_| perr(1, "bad vertex index".into()))?;
                    if i >= n {
                        return Err(perr(1, format!("vertex {i} out of range")));
                    }
                    let e: f64 = toks[2].parse().map_err(|_| perr(2, "bad epsilon".into()))?;
                    eps[i] = Some(e);
                    f[i] = toks[3].parse().map_err(|_| perr(3, "bad f".into()))?;
                }
                "e" if toks.len() == 3 => {
                    let i: usize = toks[1].parse().map_err(|_| perr(1, "bad edge index".into()))?;
                    if i >= eta.len() {
                        return Err(perr(1, format!("edge {i} out of range")));
                    }
                    eta[i] = Some(toks[2].parse().map_err(|_| perr(2, "bad eta".into()))?);
                }
                _ => return Err(perr(0, format!("unrecognised line `{l}`"))),
            }
        }
        let missing = |what: &str| Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: format!("missing {what}"),
        };
        let background = background.ok_or_else(|| missing("background"))?;
        let eps: Vec<f64> = eps
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| missing(&format!("vertex {i}"))))
            .collect::<Result<_>>()?;
        let eta: Vec<f64> = eta
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| missing(&format!("edge {i}"))))
            .collect::<Result<_>>()?;
        let u = Self::u_from_f(background, &eps, &f);
        Self::new(mesh, background, eps, eta, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::assert_relative_eq;

    #[test]
    fn structure_condition_examples() {
        let m = presets::tetra_sphere();
        let ones = vec![1.0; 4];
        let zeros = vec![0.0; 4];
        assert!(check_structure_condition(&m, &ones, &[1.0; 6]).holds());
        assert!(check_structure_condition(&m, &zeros, &[1.0; 6]).holds());
        let mut eta = vec![1.0; 6];
        eta[2] = -1.0;
        let rep = check_structure_condition(&m, &ones, &eta);
        assert_eq!(rep.edge_violations, vec![EdgeId(2)]);
    }

    #[test]
    fn u_f_conversions() {
        let m = presets::tetra_sphere();
        let s = DiscreteConformalStructure::new(
            &m,
            Background::Euclidean,
            vec![1.0; 4],
            vec![1.0; 6],
            vec![0.3, -1.2, 0.0, 0.0],
        )
        .unwrap();
        assert_eq!(&s.f()[..2], &[0.3, -1.2]);

        let f = 1f64.sinh().ln();
        let u = DiscreteConformalStructure::u_from_f(Background::Hyperbolic, &[1.0], &[f])[0];
        assert_relative_eq!(u, -0.771_936_832_905_305, epsilon = 1e-12);
        assert_relative_eq!(u, 0.5f64.tanh().ln(), epsilon = 1e-14);
        assert_relative_eq!(r_from_u(u).unwrap(), 1.0, epsilon = 1e-13);
        assert_eq!(r_from_u(0.0), Err(Error::InvalidU(0.0)));
        assert_eq!(u_from_r(-1.0), Err(Error::InvalidR(-1.0)));
        let err = DiscreteConformalStructure::circle_packing(
            &m,
            Background::Hyperbolic,
            vec![1.0; 6],
            vec![0.0; 4],
        )
        .unwrap_err();
        assert_eq!(err, Error::InvalidU(0.0));
    }

    #[test]
    fn radius_round_trips_and_limits() {
        for r in [0.1, 1.0, 10.0] {
            let back = r_from_u(u_from_r(r).unwrap()).unwrap();
            assert_relative_eq!(back, r, max_relative = 1e-12);
        }
        let r = r_from_u(-1e-9).unwrap();
        assert!(r.is_finite());
        // log(2/1e-9) to leading order
        assert_relative_eq!(r, 21.416_413_017_506_358, max_relative = 1e-9);
        assert!(r_from_u(-50.0).unwrap() < 1e-20);
    }

    #[test]
    fn euclidean_length_examples() {
        let one = VertexFactor::new(Background::Euclidean, 1.0, 0.0).unwrap();
        let l = edge_length_from_factors(Background::Euclidean, one, one, 1.0).unwrap();
        assert_relative_eq!(l.length, 2.0, epsilon = 1e-15);
        let two = VertexFactor::new(Background::Euclidean, 1.0, 2f64.ln()).unwrap();
        let l = edge_length_from_factors(Background::Euclidean, two, one, 0.5).unwrap();
        assert_relative_eq!(l.length, 7f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn cp_length_examples() {
        assert_relative_eq!(cp_length_from_radii(1.0, 2.0, 1.0).unwrap(), 3.0, epsilon = 1e-14);
        let l = cp_length_from_radii(1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(l.cosh(), 1f64.cosh().powi(2), epsilon = 1e-13);
        assert_relative_eq!(l, 1.513_374_006_596_504, epsilon = 1e-12);
        let l = cp_length_from_radii(0.1, 0.1, -0.9).unwrap();
        let c = 0.1f64.cosh().powi(2) - 0.9 * 0.1f64.sinh().powi(2);
        assert!(c > 1.0);
        assert_relative_eq!(l, c.acosh(), max_relative = 1e-9);
        assert!(cp_length_from_radii(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn hyperbolic_cp_agrees_with_dcs_formula() {
        let (ri, rj) = (0.7f64, 2.3f64);
        let vi = VertexFactor::new(Background::Hyperbolic, 1.0, u_from_r(ri).unwrap()).unwrap();
        let vj = VertexFactor::new(Background::Hyperbolic, 1.0, u_from_r(rj).unwrap()).unwrap();
        let l = edge_length_from_factors(Background::Hyperbolic, vi, vj, 1.0).unwrap();
        assert_relative_eq!(l.length, ri + rj, max_relative = 1e-13);
    }

    #[test]
    fn vertex_scaling_examples() {
        let m = presets::one_vertex_torus();
        let l0 = vec![1.0, 1.0, 1.0];
        assert_eq!(vertex_scale_lengths(&m, &l0, &[0.0], Background::Euclidean), l0);
        // one vertex: u_i + u_j = 2u
        let l = vertex_scale_lengths(&m, &l0, &[2f64.ln()], Background::Euclidean);
        assert_relative_eq!(l[0], 2.0, epsilon = 1e-14);
        let t = presets::tetra_sphere();
        let l = vertex_scale_lengths(&t, &[1.0; 6], &[2.0 * 2f64.ln(); 4], Background::Euclidean);
        assert_relative_eq!(l[0], 4.0, epsilon = 1e-14);
        // hyperbolic, u_i + u_j = 2
        let l = vertex_scale_lengths(&m, &l0, &[1.0], Background::Hyperbolic);
        assert_relative_eq!(l[0], 2.295_051_827_323_998, epsilon = 1e-12);
    }

    #[test]
    fn nondegeneracy_examples() {
        let m = build_single_face_pair();
        assert!(nondegeneracy_check(&m, &[1.0, 1.0, 1.0]).is_empty());
        assert_eq!(nondegeneracy_check(&m, &[1.0, 1.0, 2.5]).len(), 2);
    }

    fn build_single_face_pair() -> TriangulatedSurface {
        crate::mesh::build_mesh(&[[0, 1, 2], [1, 0, 2]]).unwrap()
    }

    #[test]
    fn vertex_scaling_structure_reproduces_reference() {
        for bg in [Background::Euclidean, Background::Hyperbolic] {
            let m = presets::flat_torus_16();
            let reference: Vec<f64> = (0..m.num_edges()).map(|e| 0.8 + 0.01 * e as f64).collect();
            let s = DiscreteConformalStructure::vertex_scaling(&m, bg, &reference, vec![0.0; 16])
                .unwrap();
            let l = s.lengths(&m).unwrap();
            for (a, b) in l.iter().zip(&reference) {
                assert_relative_eq!(a, b, max_relative = 1e-13);
            }
            let u: Vec<f64> = (0..16).map(|i| 0.05 * i as f64 - 0.3).collect();
            let scaled = s.with_u(&u).unwrap().lengths(&m).unwrap();
            let direct = vertex_scale_lengths(&m, &reference, &u, bg);
            for (a, b) in scaled.iter().zip(&direct) {
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn eta_for_length_inverts_the_law() {
        let m = presets::tetra_sphere();
        for bg in [Background::Euclidean, Background::Hyperbolic] {
            let s = DiscreteConformalStructure::new(
                &m,
                bg,
                vec![1.0, 0.0, 1.0, 0.0],
                vec![0.7; 6],
                vec![-0.4, 0.2, -1.1, 0.5],
            )
            .unwrap();
            for e in m.edge_ids() {
                let (i, j) = m.edge_endpoints(e);
                let l = s.edge_length(&m, e).unwrap();
                assert_relative_eq!(s.eta_for_length(i, j, l).unwrap(), 0.7, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn structure_file_round_trip() {
        let m = presets::icosahedron();
        let eta: Vec<f64> = (0..30).map(|e| 0.3 + 0.02 * e as f64).collect();
        let eps: Vec<f64> = (0..12).map(|i| (i % 2) as f64).collect();
        let u: Vec<f64> = (0..12).map(|i| -0.1 - 0.05 * i as f64).collect();
        let s = DiscreteConformalStructure::new(&m, Background::Hyperbolic, eps, eta, u).unwrap();
        let text = s.to_text();
        let back = DiscreteConformalStructure::from_text(&m, &text).unwrap();
        assert_eq!(back.eta(), s.eta());
        assert_eq!(back.epsilon(), s.epsilon());
        for (a, b) in back.u().iter().zip(s.u()) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        let err = DiscreteConformalStructure::from_text(&m, "background spherical\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 12, .. }), "{err:?}");
    }
}
