//! Delaunay tests on a metric triangulation and restoration of the Delaunay
//! condition by isometric edge flips.

use std::f64::consts::PI;

use crate::conformal::{Background, DiscreteConformalStructure};
use crate::error::{Error, Result};
use crate::geometry::{flip_diagonal_length, MetricState};
use crate::jacobian::jacobian_with_metric;
use crate::mesh::{EdgeId, TriangulatedSurface};

/// Slack at or above `-DELAUNAY_TOL` counts as Delaunay.
pub const DELAUNAY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelaunayFlavor {
    /// Angle conditions of the background geometry.
    Metric,
    /// `∂K_i/∂u_j ≤ 0` on every edge.
    Weighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelaunayReport {
    pub slack: Vec<f64>,
    /// Worst (most negative slack) first, ties by edge index.
    pub violations: Vec<EdgeId>,
}

impl DelaunayReport {
    fn from_slack(slack: Vec<f64>) -> Self {
        let mut violations: Vec<EdgeId> = slack
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < -DELAUNAY_TOL)
            .map(|(e, _)| EdgeId(e))
            .collect();
        violations.sort_by(|a, b| slack[a.0].total_cmp(&slack[b.0]).then(a.0.cmp(&b.0)));
        DelaunayReport { slack, violations }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn min_slack(&self) -> f64 {
        self.slack.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Euclidean: `π − (θ_k + θ_l)`. Hyperbolic: the four angles at the edge's
/// endpoints minus the two opposite angles.
pub fn edge_slack(mesh: &TriangulatedSurface, metric: &MetricState, e: EdgeId) -> f64 {
    let [s0, s1] = mesh.edge(e).sides;
    let a0 = metric.angles[s0.face.0];
    let a1 = metric.angles[s1.face.0];
    let (k0, k1) = (s0.side, s1.side);
    let opposite = a0[(k0 + 2) % 3] + a1[(k1 + 2) % 3];
    match metric.background {
        Background::Euclidean => PI - opposite,
        Background::Hyperbolic => a0[k0] + a0[(k0 + 1) % 3] + a1[k1] + a1[(k1 + 1) % 3] - opposite,
    }
}

pub fn delaunay_check(mesh: &TriangulatedSurface, metric: &MetricState) -> DelaunayReport {
    DelaunayReport::from_slack(mesh.edge_ids().map(|e| edge_slack(mesh, metric, e)).collect())
}

/// Weighted variant: slack is `−∂K_i/∂u_j` per edge.
pub fn weighted_delaunay_check(
    mesh: &TriangulatedSurface,
    dcs: &DiscreteConformalStructure,
    metric: &MetricState,
) -> Result<DelaunayReport> {
    let jac = jacobian_with_metric(mesh, dcs, metric)?;
    Ok(DelaunayReport::from_slack(jac.edge_coupling.iter().map(|c| -c).collect()))
}

fn report(
    mesh: &TriangulatedSurface,
    dcs: &DiscreteConformalStructure,
    metric: &MetricState,
    flavor: DelaunayFlavor,
) -> Result<DelaunayReport> {
    match flavor {
        DelaunayFlavor::Metric => Ok(delaunay_check(mesh, metric)),
        DelaunayFlavor::Weighted => weighted_delaunay_check(mesh, dcs, metric),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlipEvent {
    pub t: f64,
    pub edge: EdgeId,
    /// `[i, j, k, l]`: old diagonal `ij`, new diagonal `kl`.
    pub vertices: [usize; 4],
    pub old_length: f64,
    pub new_length: f64,
    pub slack_before: f64,
    pub slack_after: f64,
    /// Area of the two faces of the quadrilateral before and after.
    pub area_before: f64,
    pub area_after: f64,
}

/// Flips the worst violating edge until the triangulation is Delaunay for
/// `flavor`. Lengths of flipped edges come from developing the quadrilateral;
/// the new edge's weight `η` is solved so the structure reproduces that
/// length at the current `u`, which is left untouched.
pub fn flip_to_delaunay(
    mesh: &mut TriangulatedSurface,
    dcs: &mut DiscreteConformalStructure,
    t: f64,
    flavor: DelaunayFlavor,
) -> Result<Vec<FlipEvent>> {
    let budget = 50 * mesh.num_edges();
    let mut events = Vec::new();
    loop {
        let metric = MetricState::new(mesh, dcs.lengths(mesh)?, dcs.background)?;
        let rep = report(mesh, dcs, &metric, flavor)?;
        let Some(&e) = rep.violations.first() else {
            return Ok(events);
        };
        if events.len() >= budget {
            return Err(Error::FlipLimitExceeded(events.len()));
        }
        let q = mesh.quad(e)?;
        let [f0, f1] = q.faces;
        let l0 = mesh.face_edges(f0).map(|x| metric.lengths[x.0]);
        let l1 = mesh.face_edges(f1).map(|x| metric.lengths[x.0]);
        let (k0, k1) = (q.k0, q.k1);
        let l_ij = l0[k0];
        let (l_jk, l_ki) = (l0[(k0 + 1) % 3], l0[(k0 + 2) % 3]);
        let (l_il, l_lj) = (l1[(k1 + 1) % 3], l1[(k1 + 2) % 3]);
        let new_length = flip_diagonal_length(l_ij, l_jk, l_ki, l_il, l_lj, dcs.background)?;
        let area_before = metric.face_areas[f0.0] + metric.face_areas[f1.0];
        mesh.flip_edge(e)?;
        let (a, b) = mesh.edge_endpoints(e);
        let eta = dcs.eta_for_length(a, b, new_length)?;
        dcs.set_eta(e, eta);
        let after = MetricState::new(mesh, dcs.lengths(mesh)?, dcs.background)?;
        let slack_after = match flavor {
            DelaunayFlavor::Metric => edge_slack(mesh, &after, e),
            DelaunayFlavor::Weighted => weighted_delaunay_check(mesh, dcs, &after)?.slack[e.0],
        };
        events.push(FlipEvent {
            t,
            edge: e,
            vertices: q.vertices,
            old_length: l_ij,
            new_length,
            slack_before: rep.slack[e.0],
            slack_after,
            area_before,
            area_after: after.face_areas[f0.0] + after.face_areas[f1.0],
        });
    }
}

/// Moves `u` along the segment to `target`, flipping to Delaunay after every
/// step. Steps that would leave the space of nondegenerate metrics on the
/// current triangulation are halved. Each flip is stamped with `t`.
pub fn transport_u(
    mesh: &mut TriangulatedSurface,
    dcs: &mut DiscreteConformalStructure,
    target: &[f64],
    t: f64,
    flavor: DelaunayFlavor,
) -> Result<Vec<FlipEvent>> {
    if target.len() != mesh.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_vertices(),
            got: target.len(),
        });
    }
    let start = dcs.u().to_vec();
    let mut events = flip_to_delaunay(mesh, dcs, t, flavor)?;
    let (mut tau, mut h) = (0.0f64, 0.125f64);
    while tau < 1.0 {
        let next = (tau + h).min(1.0);
        let u: Vec<f64> = start.iter().zip(target).map(|(a, b)| a + next * (b - a)).collect();
        let trial = dcs.with_u(&u);
        let ok = trial
            .as_ref()
            .ok()
            .and_then(|d| MetricState::new(mesh, d.lengths(mesh).ok()?, d.background).ok())
            .is_some();
        if !ok {
            h *= 0.5;
            if h < 1e-12 {
                return Err(Error::DegenerateTriangle { face: None });
            }
            continue;
        }
        *dcs = trial?;
        events.extend(flip_to_delaunay(mesh, dcs, t, flavor)?);
        tau = next;
        h = (2.0 * h).min(0.125);
    }
    Ok(events)
}
