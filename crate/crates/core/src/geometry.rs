//! Angles, curvature and areas of a metric triangulation, and the developed
//! quadrilateral diagonal used by edge flips.
//!
//! Face conventions follow [`crate::mesh`]: side `k` joins slots `k` and
//! `k + 1`, so the corner at slot `a` is opposite side `a + 1`.

use std::f64::consts::{PI, TAU};

use crate::conformal::Background;
use crate::error::{Error, Result};
use crate::mesh::{FaceId, TriangulatedSurface};

/// Interior angles `(θ_a, θ_b, θ_c)` opposite sides of lengths `(a, b, c)`.
///
/// Uses the half-angle tangent form, which stays accurate for needle-like
/// triangles where the cosine law loses all digits.
pub fn inner_angles(a: f64, b: f64, c: f64, background: Background) -> Result<[f64; 3]> {
    let s = 0.5 * (a + b + c);
    let (sa, sb, sc) = (0.5 * (b + c - a), 0.5 * (c + a - b), 0.5 * (a + b - c));
    if !(a > 0.0 && b > 0.0 && c > 0.0 && sa > 0.0 && sb > 0.0 && sc > 0.0) || !s.is_finite() {
        return Err(Error::DegenerateTriangle { face: None });
    }
    let (s, sa, sb, sc) = match background {
        Background::Euclidean => (s, sa, sb, sc),
        Background::Hyperbolic => (s.sinh(), sa.sinh(), sb.sinh(), sc.sinh()),
    };
    let half = |x: f64, y: f64, opp: f64| 2.0 * (x * y).sqrt().atan2((s * opp).sqrt());
    Ok([half(sb, sc, sa), half(sc, sa, sb), half(sa, sb, sc)])
}

/// Angles at slots `0, 1, 2` of a face whose sides have lengths `l`.
pub fn face_angles(l: [f64; 3], background: Background) -> Result<[f64; 3]> {
    inner_angles(l[1], l[2], l[0], background)
}

/// Hyperbolic triangle area by angle defect.
pub fn hyperbolic_area(angles: [f64; 3]) -> Result<f64> {
    let area = PI - angles.iter().sum::<f64>();
    if !(area > 0.0) || angles.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::DegenerateTriangle { face: None });
    }
    Ok(area)
}

/// Euclidean area from side lengths (sorted Heron form).
pub fn euclidean_area(l: [f64; 3]) -> f64 {
    let mut v = l;
    v.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = v;
    0.25 * ((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))).max(0.0).sqrt()
}

/// `∂θ_a/∂l_k` for the face with side lengths `l` and slot angles `theta`,
/// indexed `[slot][side]`.
pub fn angle_length_derivatives(
    l: [f64; 3],
    theta: [f64; 3],
    background: Background,
) -> [[f64; 3]; 3] {
    let g = |x: f64| match background {
        Background::Euclidean => x,
        Background::Hyperbolic => x.sinh(),
    };
    let mut d = [[0.0; 3]; 3];
    for a in 0..3 {
        let opp = (a + 1) % 3;
        let (p, q) = ((a + 2) % 3, a);
        let d_opp = g(l[opp]) / (g(l[p]) * g(l[q]) * theta[a].sin());
        d[a][opp] = d_opp;
        // an adjacent side picks up the cosine of the angle at its far end
        d[a][p] = -d_opp * theta[(a + 2) % 3].cos();
        d[a][q] = -d_opp * theta[(a + 1) % 3].cos();
    }
    d
}

/// Snapshot of a metric on a fixed triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricState {
    pub background: Background,
    pub lengths: Vec<f64>,
    /// Per face, angles at slots 0, 1, 2.
    pub angles: Vec<[f64; 3]>,
    pub curvature: Vec<f64>,
    pub face_areas: Vec<f64>,
}

impl MetricState {
    pub fn new(mesh: &TriangulatedSurface, lengths: Vec<f64>, background: Background) -> Result<Self> {
        if lengths.len() != mesh.num_edges() {
            return Err(Error::DimensionMismatch {
                expected: mesh.num_edges(),
                got: lengths.len(),
            });
        }
        let mut angles = Vec::with_capacity(mesh.num_faces());
        let mut face_areas = Vec::with_capacity(mesh.num_faces());
        for f in mesh.face_ids() {
            let l = mesh.face_edges(f).map(|e| lengths[e.0]);
            let th = face_angles(l, background).map_err(|_| Error::DegenerateTriangle { face: Some(f) })?;
            let area = match background {
                Background::Euclidean => euclidean_area(l),
                Background::Hyperbolic => {
                    hyperbolic_area(th).map_err(|_| Error::DegenerateTriangle { face: Some(f) })?
                }
            };
            angles.push(th);
            face_areas.push(area);
        }
        let curvature = curvature(mesh, &angles);
        Ok(MetricState {
            background,
            lengths,
            angles,
            curvature,
            face_areas,
        })
    }

    pub fn angle(&self, f: FaceId, slot: usize) -> f64 {
        self.angles[f.0][slot]
    }

    pub fn min_angle(&self) -> f64 {
        self.angles.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn total_area(&self) -> f64 {
        self.face_areas.iter().sum()
    }

    /// `ΣK − 2πχ` (Euclidean) or `ΣK − 2πχ − Σ area` (hyperbolic).
    pub fn gauss_bonnet_residual(&self, mesh: &TriangulatedSurface) -> f64 {
        let total: f64 = self.curvature.iter().sum();
        let expected = TAU * mesh.euler_characteristic() as f64;
        match self.background {
            Background::Euclidean => total - expected,
            Background::Hyperbolic => total - expected - self.total_area(),
        }
    }
}

/// `K_i = 2π − Σ` angles at the corners of `i`.
pub fn curvature(mesh: &TriangulatedSurface, angles: &[[f64; 3]]) -> Vec<f64> {
    let mut k = vec![TAU; mesh.num_vertices()];
    for f in mesh.face_ids() {
        for (slot, &v) in mesh.face(f).iter().enumerate() {
            k[v] -= angles[f.0][slot];
        }
    }
    k
}

/// Length of the diagonal `kl` of the quadrilateral formed by triangles
/// `ijk` and `ijl` glued along `ij` and developed into the model plane.
pub fn flip_diagonal_length(
    l_ij: f64,
    l_jk: f64,
    l_ki: f64,
    l_il: f64,
    l_lj: f64,
    background: Background,
) -> Result<f64> {
    // angles of ijk at i, j and of ijl at i, j
    let [ai_k, aj_k, _] = inner_angles(l_jk, l_ki, l_ij, background)?;
    let [ai_l, aj_l, _] = inner_angles(l_lj, l_il, l_ij, background)?;
    let alpha = ai_k + ai_l;
    if alpha >= PI || aj_k + aj_l >= PI {
        return Err(Error::FoldedQuad);
    }
    let (p, q) = (l_ki, l_il);
    let half = (0.5 * alpha).sin();
    Ok(match background {
        Background::Euclidean => ((p - q).powi(2) + 4.0 * p * q * half * half).sqrt(),
        Background::Hyperbolic => {
            // cosh l − 1 = cosh(p − q) − 1 + 2 sinh p sinh q sin²(α/2)
            let y = 2.0 * (0.5 * (p - q)).sinh().powi(2) + 2.0 * p.sinh() * q.sinh() * half * half;
            crate::conformal::acosh1p(y)
        }
    })
}
