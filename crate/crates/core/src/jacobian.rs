//! The curvature Jacobian `L = ∂K/∂u`, assembled face by face through the
//! chain rule `∂θ/∂u = ∂θ/∂l · ∂l/∂u`.

use nalgebra::DMatrix;

use crate::conformal::{edge_length_from_factors, Background, DiscreteConformalStructure, VertexFactor};
use crate::error::{Error, Result};
use crate::geometry::{angle_length_derivatives, MetricState};
use crate::mesh::{EdgeId, FaceId, TriangulatedSurface};

/// `∂θ_a/∂u_b` for one face, indexed by slot, with the three slots treated
/// as independent variables (so loops and repeated vertices are handled by
/// summation during assembly).
pub fn angle_gradients(
    mesh: &TriangulatedSurface,
    dcs: &DiscreteConformalStructure,
    factors: &[VertexFactor],
    metric: &MetricState,
    f: FaceId,
) -> Result<[[f64; 3]; 3]> {
    let tri = mesh.face(f);
    let fe = mesh.face_edges(f);
    let l = fe.map(|e| metric.lengths[e.0]);
    let d = angle_length_derivatives(l, metric.angles[f.0], dcs.background);
    // dl[k][b] = ∂l_k/∂u at slot b; side k joins slots k and k+1
    let mut dl = [[0.0; 3]; 3];
    for k in 0..3 {
        let (a, b) = (k, (k + 1) % 3);
        let el = edge_length_from_factors(
            dcs.background,
            factors[tri[a]],
            factors[tri[b]],
            dcs.eta()[fe[k].0],
        )
        .ok_or(Error::DegenerateLength { edge: Some(fe[k]) })?;
        dl[k][a] = el.d_du[0];
        dl[k][b] = el.d_du[1];
    }
    let mut g = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            g[a][b] = (0..3).map(|k| d[a][k] * dl[k][b]).sum();
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianL {
    pub background: Background,
    pub matrix: DMatrix<f64>,
    /// Per face, the slot-indexed angle gradients summed into `matrix`.
    pub face_gradients: Vec<[[f64; 3]; 3]>,
    /// Per edge, its own contribution to the off-diagonal entry `L_ij`:
    /// `−(∂θ_i^{jk}/∂u_j + ∂θ_i^{jl}/∂u_j)`.
    pub edge_coupling: Vec<f64>,
}

impl JacobianL {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest per-face angle derivative entering the assembly.
    pub fn term_scale(&self) -> f64 {
        self.face_gradients
            .iter()
            .flatten()
            .flatten()
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    pub fn symmetry_residual(&self) -> f64 {
        let m = &self.matrix;
        let mut r: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..i {
                r = r.max((m[(i, j)] - m[(j, i)]).abs() / (1.0 + m[(i, j)].abs()));
            }
        }
        r
    }
}

pub fn jacobian_l(mesh: &TriangulatedSurface, dcs: &DiscreteConformalStructure) -> Result<JacobianL> {
    let metric = MetricState::new(mesh, dcs.lengths(mesh)?, dcs.background)?;
    jacobian_with_metric(mesh, dcs, &metric)
}

/// As [`jacobian_l`] with the metric already at hand.
pub fn jacobian_with_metric(
    mesh: &TriangulatedSurface,
    dcs: &DiscreteConformalStructure,
    metric: &MetricState,
) -> Result<JacobianL> {
    let n = mesh.num_vertices();
    let factors = dcs.vertex_factors()?;
    let mut matrix = DMatrix::zeros(n, n);
    let mut face_gradients = Vec::with_capacity(mesh.num_faces());
    for f in mesh.face_ids() {
        let g = angle_gradients(mesh, dcs, &factors, metric, f)?;
        let tri = mesh.face(f);
        for a in 0..3 {
            for b in 0..3 {
                matrix[(tri[a], tri[b])] -= g[a][b];
            }
        }
        face_gradients.push(g);
    }
    let edge_coupling = mesh
        .edge_ids()
        .map(|e| {
            let sides = mesh.edge(e).sides;
            -sides
                .iter()
                .map(|s| face_gradients[s.face.0][s.side][(s.side + 1) % 3])
                .sum::<f64>()
        })
        .collect();
    Ok(JacobianL {
        background: dcs.background,
        matrix,
        face_gradients,
        edge_coupling,
    })
}

/// Central differences of `K` in `u`.
pub fn jacobian_fd_oracle(
    mesh: &TriangulatedSurface,
    dcs: &DiscreteConformalStructure,
    h: f64,
) -> Result<DMatrix<f64>> {
    let n = mesh.num_vertices();
    let mut m = DMatrix::zeros(n, n);
    let curv = |u: &[f64]| -> Result<Vec<f64>> {
        let s = dcs.with_u(u)?;
        Ok(MetricState::new(mesh, s.lengths(mesh)?, s.background)?.curvature)
    };
    for j in 0..n {
        let mut up = dcs.u().to_vec();
        let mut um = up.clone();
        up[j] += h;
        um[j] -= h;
        let (kp, km) = (curv(&up)?, curv(&um)?);
        for i in 0..n {
            m[(i, j)] = (kp[i] - km[i]) / (2.0 * h);
        }
    }
    Ok(m)
}

/// Edges whose coupling `∂K_i/∂u_j` exceeds `tol`, i.e. that fail the
/// weighted Delaunay condition.
pub fn weighted_delaunay_indicator(jac: &JacobianL, tol: f64) -> Vec<EdgeId> {
    jac.edge_coupling
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > tol)
        .map(|(e, _)| EdgeId(e))
        .collect()
}

/// Split of a hyperbolic circle-packing Jacobian into a diagonal part `A`
/// (derivatives of incident area) and a Laplacian-like part `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbDecomposition {
    pub a: Vec<f64>,
    pub b: DMatrix<f64>,
}

pub fn decompose_a_b(mesh: &TriangulatedSurface, dcs: &DiscreteConformalStructure) -> Result<AbDecomposition> {
    if dcs.background != Background::Hyperbolic || !dcs.is_circle_packing() {
        return Err(Error::PreconditionViolated(
            "A + B split needs a hyperbolic circle packing".into(),
        ));
    }
    if dcs.eta().iter().any(|&x| !(x > -1.0 && x <= 1.0)) {
        return Err(Error::PreconditionViolated("eta outside (-1, 1]".into()));
    }
    let jac = jacobian_l(mesh, dcs)?;
    let n = mesh.num_vertices();
    let mut b = DMatrix::zeros(n, n);
    for e in mesh.edge_ids() {
        let (i, j) = mesh.edge_endpoints(e);
        let c = jac.edge_coupling[e.0];
        b[(i, j)] += c;
        b[(j, i)] += c;
        b[(i, i)] -= c;
        b[(j, j)] -= c;
    }
    let a = (0..n).map(|i| jac.matrix[(i, i)] - b[(i, i)]).collect();
    Ok(AbDecomposition { a, b })
}

/// `∂θ_i^{jk}/∂u_j` of a hyperbolic circle-packing face, in closed form, from
/// radii and the three edge weights.
pub fn cp_angle_derivative_closed_form(
    r: [f64; 3],
    eta_ij: f64,
    eta_ik: f64,
    eta_jk: f64,
) -> Result<f64> {
    let [(si, ci), (sj, cj), (sk, ck)] = r.map(|x| (x.sinh(), x.cosh()));
    let cosh_l = |ca: f64, cb: f64, sa: f64, sb: f64, eta: f64| ca * cb + eta * sa * sb;
    let (ch_ij, ch_ik, ch_jk) = (
        cosh_l(ci, cj, si, sj, eta_ij),
        cosh_l(ci, ck, si, sk, eta_ik),
        cosh_l(cj, ck, sj, sk, eta_jk),
    );
    let a_sq = area_squared_expression(ch_ij, ch_ik, ch_jk);
    if !(a_sq > 0.0) {
        return Err(Error::DegenerateTriangle { face: None });
    }
    let a_ijk = a_sq.sqrt();
    let gamma_ijk = eta_jk + eta_ij * eta_ik;
    let gamma_jik = eta_ik + eta_ij * eta_jk;
    let num = ck * si * si * sj * sj * (1.0 - eta_ij * eta_ij)
        + ci * si * sj * sj * sk * gamma_jik
        + cj * si * si * sj * sk * gamma_ijk;
    Ok(num / (a_ijk * (ch_ij * ch_ij - 1.0)))
}

/// `1 + 2xyz − x² − y² − z²` for `x, y, z` the cosh of the three sides.
pub fn area_squared_expression(x: f64, y: f64, z: f64) -> f64 {
    1.0 + 2.0 * x * y * z - x * x - y * y - z * z
}

/// `|A² − (1 + 2xyz − x² − y² − z²)|` with `A = sinh b sinh c sin θ_a`,
/// relative to the largest term of the expression.
pub fn area_squared_identity_residual(l: [f64; 3], theta_a: f64) -> f64 {
    let [a, b, c] = l;
    let big_a = b.sinh() * c.sinh() * theta_a.sin();
    let (x, y, z) = (a.cosh(), b.cosh(), c.cosh());
    let scale = 1.0f64.max(2.0 * x * y * z);
    (big_a * big_a - area_squared_expression(x, y, z)).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::u_from_r;
    use crate::geometry::inner_angles;
    use crate::presets;
    use approx::assert_relative_eq;

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).abs().max()
    }

    #[test]
    fn euclidean_tetra_cp() {
        let m = presets::tetra_sphere();
        let s = DiscreteConformalStructure::circle_packing(&m, Background::Euclidean, vec![1.0; 6], vec![0.0; 4])
            .unwrap();
        let j = jacobian_l(&m, &s).unwrap();
        for i in 0..4 {
            assert!(j.matrix.row(i).sum().abs() < 1e-12);
        }
        let fd = jacobian_fd_oracle(&m, &s, 1e-6).unwrap();
        assert!(max_abs_diff(&j.matrix, &fd) < 1e-8);
        // every off-diagonal entry equal by symmetry
        let off = j.matrix[(0, 1)];
        for i in 0..4 {
            for k in 0..4 {
                if i != k {
                    assert_relative_eq!(j.matrix[(i, k)], off, epsilon = 1e-13);
                }
            }
        }
        assert!(off < 0.0);
    }

    #[test]
    fn one_vertex_torus_vertex_scaling_is_zero() {
        let m = presets::one_vertex_torus();
        let s = DiscreteConformalStructure::vertex_scaling(&m, Background::Euclidean, &[1.0; 3], vec![0.4])
            .unwrap();
        let j = jacobian_l(&m, &s).unwrap();
        assert!(j.matrix[(0, 0)].abs() < 1e-14);
    }

    #[test]
    fn equilateral_vertex_scaling_gradients() {
        let m = presets::tetra_sphere();
        let s = DiscreteConformalStructure::vertex_scaling(&m, Background::Euclidean, &[1.0; 6], vec![0.0; 4])
            .unwrap();
        let j = jacobian_l(&m, &s).unwrap();
        for g in &j.face_gradients {
            for (a, row) in g.iter().enumerate() {
                // a uniform shift leaves the angles alone
                assert!(row.iter().sum::<f64>().abs() < 1e-14);
                assert_relative_eq!(row[a], -1.0 / 3f64.sqrt(), epsilon = 1e-14);
            }
        }
        // cot(π/3)/2 from each of the two faces
        for c in &j.edge_coupling {
            assert_relative_eq!(*c, -1.0 / 3f64.sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn hyperbolic_cp_matches_closed_form() {
        let m = presets::tetra_sphere();
        let u = vec![u_from_r(1.0).unwrap(); 4];
        let s = DiscreteConformalStructure::circle_packing(&m, Background::Hyperbolic, vec![1.0; 6], u).unwrap();
        let j = jacobian_l(&m, &s).unwrap();
        let closed = cp_angle_derivative_closed_form([1.0; 3], 1.0, 1.0, 1.0).unwrap();
        for g in &j.face_gradients {
            assert_relative_eq!(g[0][1], closed, max_relative = 1e-12);
            assert_relative_eq!(g[1][0], closed, max_relative = 1e-12);
        }
        let ab = decompose_a_b(&m, &s).unwrap();
        let mut rebuilt = ab.b.clone();
        for i in 0..4 {
            rebuilt[(i, i)] += ab.a[i];
            assert!(ab.a[i] > 0.0);
        }
        assert!(max_abs_diff(&rebuilt, &j.matrix) < 1e-12);
        assert!(ab.b[(0, 1)] < 0.0);
        assert_relative_eq!(ab.b[(0, 1)], ab.b[(2, 3)], epsilon = 1e-13);
    }

    #[test]
    fn area_squared_examples() {
        assert_relative_eq!(area_squared_expression(2.0, 2.0, 2.0), 5.0);
        let l = 2f64.acosh();
        let th = inner_angles(l, l, l, Background::Hyperbolic).unwrap();
        assert!(area_squared_identity_residual([l; 3], th[0]) < 1e-14);
        let x = (0.5f64 + 0.7).cosh();
        assert!(area_squared_expression(x, 0.5f64.cosh(), 0.7f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn angle_shrinks_for_large_radius() {
        let mut last = f64::INFINITY;
        let mut first_small = None;
        for ri in 1..=30 {
            let ri = ri as f64;
            let ls = [
                crate::conformal::cp_length_from_radii(1.0, 1.0, 1.0).unwrap(),
                crate::conformal::cp_length_from_radii(ri, 1.0, 1.0).unwrap(),
                crate::conformal::cp_length_from_radii(ri, 1.0, 1.0).unwrap(),
            ];
            let th = inner_angles(ls[0], ls[1], ls[2], Background::Hyperbolic).unwrap()[0];
            assert!(th < last);
            last = th;
            if th < 0.1 && first_small.is_none() {
                first_small = Some(ri);
            }
        }
        assert!(first_small.is_some());
    }
}
