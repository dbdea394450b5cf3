//! Integration of the fractional combinatorial Calabi flow
//! `du/dt = Δˢ(K − K̄)` with fixed-step RK4 or adaptive Dormand–Prince,
//! optional Delaunay surgery after every accepted step, and the diagnostics
//! recorded along the way.

use std::f64::consts::TAU;

use log::{debug, warn};

use crate::conformal::{min_triangle_slack, Background, DiscreteConformalStructure};
use crate::error::{Error, Result};
use crate::geometry::MetricState;
use crate::jacobian::{jacobian_with_metric, JacobianL};
use crate::mesh::TriangulatedSurface;
use crate::spectral::{spectral_decompose_scaled, SpectralForm};
use crate::surgery::{delaunay_check, flip_to_delaunay, DelaunayFlavor, FlipEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Rk4,
    Rk45,
}

impl Integrator {
    pub fn name(self) -> &'static str {
        match self {
            Integrator::Rk4 => "rk4",
            Integrator::Rk45 => "rk45",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rk4" => Some(Integrator::Rk4),
            "rk45" => Some(Integrator::Rk45),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surgery {
    Off,
    Delaunay,
    WeightedDelaunay,
}

impl Surgery {
    pub fn name(self) -> &'static str {
        match self {
            Surgery::Off => "off",
            Surgery::Delaunay => "delaunay",
            Surgery::WeightedDelaunay => "weighted_delaunay",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "off" => Some(Surgery::Off),
            "delaunay" => Some(Surgery::Delaunay),
            "weighted_delaunay" => Some(Surgery::WeightedDelaunay),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub s: f64,
    pub target: Vec<f64>,
    pub integrator: Integrator,
    /// Initial step for RK45, the step for RK4.
    pub dt: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub rtol: f64,
    pub atol: f64,
    pub tol_curvature: f64,
    pub t_max: f64,
    pub max_steps: usize,
    pub surgery: Surgery,
    /// Smallest relative triangle-inequality slack a trial step may reach.
    pub degeneracy_margin: f64,
    /// With surgery off, reject steps that break the Delaunay condition.
    pub delaunay_guard: bool,
    /// Drive with the initial curvature `K₀` in place of `K(t)`.
    pub frozen_initial_curvature: bool,
    /// Cap `dt` at `2/ρ(L^{s+1})`, the linear stability bound.
    pub stability_cap: bool,
}

impl FlowConfig {
    pub fn new(s: f64, target: Vec<f64>) -> Self {
        FlowConfig {
            s,
            target,
            integrator: Integrator::Rk45,
            dt: 0.01,
            dt_min: 1e-10,
            dt_max: 0.1,
            rtol: 1e-8,
            atol: 1e-10,
            tol_curvature: 1e-8,
            t_max: 1e3,
            max_steps: 1_000_000,
            surgery: Surgery::Off,
            degeneracy_margin: 1e-9,
            delaunay_guard: false,
            frozen_initial_curvature: false,
            stability_cap: true,
        }
    }
}

/// `2πχ/N` per vertex in the Euclidean background; `0` for hyperbolic
/// surfaces of negative Euler characteristic.
pub fn uniform_target(mesh: &TriangulatedSurface, background: Background) -> Result<Vec<f64>> {
    let chi = mesh.euler_characteristic() as f64;
    let n = mesh.num_vertices();
    match background {
        Background::Euclidean => Ok(vec![TAU * chi / n as f64; n]),
        Background::Hyperbolic if chi < 0.0 => Ok(vec![0.0; n]),
        Background::Hyperbolic => Err(Error::InvalidTarget(format!(
            "no uniform hyperbolic target on a surface with Euler characteristic {chi}"
        ))),
    }
}

pub fn validate_target(target: &[f64], mesh: &TriangulatedSurface, background: Background) -> Result<()> {
    if target.len() != mesh.num_vertices() {
        return Err(Error::InvalidTarget(format!(
            "target has {} entries for {} vertices",
            target.len(),
            mesh.num_vertices()
        )));
    }
    if target.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidTarget("non-finite target curvature".into()));
    }
    let sum: f64 = target.iter().sum();
    let two_pi_chi = TAU * mesh.euler_characteristic() as f64;
    match background {
        Background::Euclidean => {
            if (sum - two_pi_chi).abs() > 1e-9 {
                return Err(Error::InvalidTarget(format!(
                    "Euclidean target must sum to 2*pi*chi = {two_pi_chi}, got {sum}"
                )));
            }
        }
        Background::Hyperbolic => {
            if !(sum > two_pi_chi) {
                return Err(Error::InvalidTarget(format!(
                    "hyperbolic target must sum to more than 2*pi*chi = {two_pi_chi}, got {sum}"
                )));
            }
            if let Some(k) = target.iter().find(|&&k| k >= TAU) {
                return Err(Error::InvalidTarget(format!(
                    "hyperbolic target entries must be below 2*pi, got {k}"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub mesh: TriangulatedSurface,
    /// Carries the cumulative conformal factor as its `u`.
    pub dcs: DiscreteConformalStructure,
}

impl FlowState {
    pub fn new(mesh: TriangulatedSurface, dcs: DiscreteConformalStructure) -> Self {
        FlowState { t: 0.0, mesh, dcs }
    }

    pub fn u(&self) -> &[f64] {
        self.dcs.u()
    }

    pub fn metric(&self) -> Result<MetricState> {
        MetricState::new(&self.mesh, self.dcs.lengths(&self.mesh)?, self.dcs.background)
    }
}

/// Everything derived from one `(mesh, u)` pair.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub metric: MetricState,
    pub jacobian: JacobianL,
    pub spectrum: SpectralForm,
    pub velocity: Vec<f64>,
}

pub fn evaluate(
    mesh: &TriangulatedSurface,
    dcs: &DiscreteConformalStructure,
    config: &FlowConfig,
    frozen: Option<&[f64]>,
) -> Result<Evaluation> {
    let metric = MetricState::new(mesh, dcs.lengths(mesh)?, dcs.background)?;
    let jacobian = jacobian_with_metric(mesh, dcs, &metric)?;
    let spectrum = spectral_decompose_scaled(&jacobian.matrix, jacobian.term_scale())?;
    let expected = usize::from(dcs.background == Background::Euclidean);
    if spectrum.zero_count() != expected {
        warn!("L has {} zero eigenvalues, expected {expected}", spectrum.zero_count());
    }
    let k = frozen.unwrap_or(&metric.curvature);
    let residual: Vec<f64> = k.iter().zip(&config.target).map(|(k, kb)| k - kb).collect();
    let velocity = spectrum.apply_fractional_laplacian(config.s, &residual)?;
    Ok(Evaluation {
        metric,
        jacobian,
        spectrum,
        velocity,
    })
}

pub fn calabi_energy(curvature: &[f64], target: &[f64]) -> f64 {
    curvature.iter().zip(target).map(|(k, kb)| (k - kb).powi(2)).sum()
}

pub fn curvature_residual(curvature: &[f64], target: &[f64]) -> f64 {
    curvature
        .iter()
        .zip(target)
        .map(|(k, kb)| (k - kb).abs())
        .fold(0.0, f64::max)
}

/// Largest `λ^{s+1}` over the nonzero spectrum.
pub fn stiffness(spectrum: &SpectralForm, s: f64) -> f64 {
    spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l.powf(s + 1.0))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub u: Vec<f64>,
    pub curvature: Vec<f64>,
    pub calabi_energy: f64,
    pub residual: f64,
    pub sum_u: f64,
    pub min_angle: f64,
    /// Smallest nonzero eigenvalue of `L`.
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub gauss_bonnet: f64,
    pub total_area: f64,
    /// Smallest radius, hyperbolic circle packings only.
    pub min_radius: Option<f64>,
    /// Smallest Delaunay slack after surgery, when surgery is on.
    pub min_delaunay_slack: Option<f64>,
    pub dt: f64,
    pub flips: Vec<FlipEvent>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Converged,
    TimeLimit,
    StepLimit,
    Failed(Error),
}

#[derive(Debug, Clone)]
pub struct FlowRun {
    pub records: Vec<TraceRecord>,
    pub outcome: Outcome,
    pub final_state: FlowState,
    pub steps: usize,
    pub rejected_steps: usize,
}

impl FlowRun {
    pub fn converged(&self) -> bool {
        self.outcome == Outcome::Converged
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("at least the initial record")
    }

    pub fn flip_count(&self) -> usize {
        self.records.iter().map(|r| r.flips.len()).sum()
    }

    pub fn decay_rate(&self) -> Option<f64> {
        decay_rate(&self.records)
    }

    /// `max |Σu(t) − Σu(0)|`.
    pub fn conservation_drift(&self) -> f64 {
        conservation_monitor(&self.records)
    }

    /// Whether `C̄` strictly decreases across every accepted step.
    pub fn energy_strictly_decreasing(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].calabi_energy < w[0].calabi_energy)
    }
}

pub fn conservation_monitor(records: &[TraceRecord]) -> f64 {
    let Some(first) = records.first() else {
        return 0.0;
    };
    records
        .iter()
        .map(|r| (r.sum_u - first.sum_u).abs())
        .fold(0.0, f64::max)
}

/// Exponential rate `λ` in `C̄ ~ e^{−λt}`, fitted by least squares to
/// `log C̄` over the tail of the trace where `log C̄` lies in the lowest
/// quarter of the range between its first and last values.
pub fn decay_rate(records: &[TraceRecord]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.calabi_energy > 0.0)
        .map(|r| (r.t, r.calabi_energy.ln()))
        .collect();
    let (first, last) = (pts.first()?.1, pts.last()?.1);
    let cut = last + 0.25 * (first - last);
    let tail: Vec<(f64, f64)> = pts.into_iter().filter(|&(_, y)| y <= cut).collect();
    if tail.len() < 2 {
        return None;
    }
    let n = tail.len() as f64;
    let (mt, my) = tail
        .iter()
        .fold((0.0, 0.0), |(a, b), &(t, y)| (a + t / n, b + y / n));
    let (num, den) = tail.iter().fold((0.0, 0.0), |(num, den), &(t, y)| {
        (num + (t - mt) * (y - my), den + (t - mt).powi(2))
    });
    if den == 0.0 {
        return None;
    }
    Some(-num / den)
}

// Dormand–Prince 5(4) tableau
const DP_A: [&[f64]; 6] = [
    &[],
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
];
const DP_B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(u: &[f64], dt: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = u.to_vec();
    for (c, k) in terms {
        for (o, v) in out.iter_mut().zip(k.iter()) {
            *o += dt * c * v;
        }
    }
    out
}

struct Stepper<'a> {
    mesh: &'a TriangulatedSurface,
    dcs: &'a DiscreteConformalStructure,
    config: &'a FlowConfig,
    frozen: Option<&'a [f64]>,
}

struct Trial {
    u: Vec<f64>,
    dcs: DiscreteConformalStructure,
    eval: Evaluation,
    /// Scaled error norm (RK45 only).
    error: f64,
}

impl Stepper<'_> {
    fn velocity(&self, u: &[f64]) -> Result<Vec<f64>> {
        let dcs = self.dcs.with_u(u)?;
        Ok(evaluate(self.mesh, &dcs, self.config, self.frozen)?.velocity)
    }

    fn finish(&self, u: Vec<f64>, error: f64) -> Result<Trial> {
        let dcs = self.dcs.with_u(&u)?;
        let eval = evaluate(self.mesh, &dcs, self.config, self.frozen)?;
        Ok(Trial { u, dcs, eval, error })
    }

    fn rk4(&self, u: &[f64], k1: &[f64], dt: f64) -> Result<Trial> {
        let k2 = self.velocity(&axpy(u, dt, &[(0.5, k1)]))?;
        let k3 = self.velocity(&axpy(u, dt, &[(0.5, &k2)]))?;
        let k4 = self.velocity(&axpy(u, dt, &[(1.0, &k3)]))?;
        let next = axpy(
            u,
            dt,
            &[(1.0 / 6.0, k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)],
        );
        self.finish(next, 0.0)
    }

    fn rk45(&self, u: &[f64], k1: &[f64], dt: f64) -> Result<Trial> {
        let mut k: Vec<Vec<f64>> = vec![k1.to_vec()];
        for row in DP_A.iter().skip(1) {
            let terms: Vec<(f64, &[f64])> = row.iter().zip(&k).map(|(&a, ki)| (a, ki.as_slice())).collect();
            let ki = self.velocity(&axpy(u, dt, &terms))?;
            k.push(ki);
        }
        let terms: Vec<(f64, &[f64])> = DP_B.iter().zip(&k).map(|(&b, ki)| (b, ki.as_slice())).collect();
        let next = axpy(u, dt, &terms);
        let mut trial = self.finish(next, 0.0)?;
        k.push(trial.eval.velocity.clone());
        let mut err: f64 = 0.0;
        for i in 0..u.len() {
            let e: f64 = (0..7).map(|s| (DP_B[s] - DP_B4[s]) * k[s][i]).sum::<f64>() * dt;
            let sc = self.config.atol + self.config.rtol * u[i].abs().max(trial.u[i].abs());
            err = err.max(e.abs() / sc);
        }
        trial.error = err;
        Ok(trial)
    }
}

fn record(
    state: &FlowState,
    eval: &Evaluation,
    config: &FlowConfig,
    dt: f64,
    flips: Vec<FlipEvent>,
) -> TraceRecord {
    let metric = &eval.metric;
    let min_radius = if state.dcs.background == Background::Hyperbolic && state.dcs.is_circle_packing() {
        state.dcs.radii().ok().map(|r| r.into_iter().fold(f64::INFINITY, f64::min))
    } else {
        None
    };
    let min_delaunay_slack = match config.surgery {
        Surgery::Off => None,
        Surgery::Delaunay => Some(delaunay_check(&state.mesh, metric).min_slack()),
        Surgery::WeightedDelaunay => Some(
            eval.jacobian
                .edge_coupling
                .iter()
                .map(|c| -c)
                .fold(f64::INFINITY, f64::min),
        ),
    };
    TraceRecord {
        t: state.t,
        u: state.u().to_vec(),
        curvature: metric.curvature.clone(),
        calabi_energy: calabi_energy(&metric.curvature, &config.target),
        residual: curvature_residual(&metric.curvature, &config.target),
        sum_u: state.u().iter().sum(),
        min_angle: metric.min_angle(),
        lambda_min: eval.spectrum.nonzero_range().map_or(0.0, |r| r.1),
        lambda_max: eval.spectrum.lambda_max(),
        gauss_bonnet: metric.gauss_bonnet_residual(&state.mesh),
        total_area: metric.total_area(),
        min_radius,
        min_delaunay_slack,
        dt,
        flips,
    }
}

fn surgery_flavor(s: Surgery) -> Option<DelaunayFlavor> {
    match s {
        Surgery::Off => None,
        Surgery::Delaunay => Some(DelaunayFlavor::Metric),
        Surgery::WeightedDelaunay => Some(DelaunayFlavor::Weighted),
    }
}

fn validate_config(config: &FlowConfig) -> Result<()> {
    let bad = |m: &str| Err(Error::PreconditionViolated(m.to_string()));
    if !config.s.is_finite() {
        return bad("s must be finite");
    }
    if !(config.dt > 0.0 && config.dt_min > 0.0 && config.dt_max >= config.dt_min) {
        return bad("step sizes must satisfy 0 < dt_min <= dt_max and dt > 0");
    }
    if !(config.t_max >= 0.0) || !(config.tol_curvature > 0.0) {
        return bad("t_max must be nonnegative and tol positive");
    }
    if !(config.rtol > 0.0 && config.atol > 0.0) {
        return bad("tolerances must be positive");
    }
    Ok(())
}

/// Integrates from `initial` until the curvature residual drops to
/// `tol_curvature`, `t_max` is reached, or a step fails. A failed step ends
/// the run with [`Outcome::Failed`] and the trace up to the last good state.
pub fn run_flow(initial: FlowState, config: &FlowConfig) -> Result<FlowRun> {
    validate_config(config)?;
    let mut state = initial;
    validate_target(&config.target, &state.mesh, state.dcs.background)?;
    if state.dcs.num_vertices() != state.mesh.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: state.mesh.num_vertices(),
            got: state.dcs.num_vertices(),
        });
    }
    let flavor = surgery_flavor(config.surgery);
    let mut initial_flips = Vec::new();
    if let Some(flavor) = flavor {
        initial_flips = flip_to_delaunay(&mut state.mesh, &mut state.dcs, state.t, flavor)?;
    }
    let frozen: Option<Vec<f64>> = if config.frozen_initial_curvature {
        Some(state.metric()?.curvature)
    } else {
        None
    };
    let mut eval = evaluate(&state.mesh, &state.dcs, config, frozen.as_deref())?;
    let guard = config.surgery == Surgery::Off
        && config.delaunay_guard
        && delaunay_check(&state.mesh, &eval.metric).is_clean();
    let mut records = vec![record(&state, &eval, config, 0.0, initial_flips)];
    let mut dt = config.dt.min(config.dt_max);
    let (mut steps, mut rejected) = (0usize, 0usize);

    let outcome = loop {
        let rec = records.last().expect("nonempty");
        if rec.residual <= config.tol_curvature {
            break Outcome::Converged;
        }
        if state.t >= config.t_max {
            break Outcome::TimeLimit;
        }
        if steps >= config.max_steps {
            break Outcome::StepLimit;
        }
        let cap = if config.stability_cap {
            let rho = stiffness(&eval.spectrum, config.s);
            if rho > 0.0 { 2.0 / rho } else { f64::INFINITY }
        } else {
            f64::INFINITY
        };
        let mut h = match config.integrator {
            Integrator::Rk4 => config.dt,
            Integrator::Rk45 => dt,
        }
        .min(config.dt_max)
        .min(cap)
        .min(config.t_max - state.t);
        let stepper = Stepper {
            mesh: &state.mesh,
            dcs: &state.dcs,
            config,
            frozen: frozen.as_deref(),
        };
        let accepted = loop {
            if h < config.dt_min && state.t + h < config.t_max {
                break Err(Error::StepFailure {
                    t: state.t,
                    reason: format!("step size fell below dt_min = {}", config.dt_min),
                });
            }
            let attempt = match config.integrator {
                Integrator::Rk4 => stepper.rk4(state.u(), &eval.velocity, h),
                Integrator::Rk45 => stepper.rk45(state.u(), &eval.velocity, h),
            };
            let trial = match attempt {
                Ok(trial) => trial,
                Err(e) => {
                    debug!("t = {}: trial step {h} failed ({e}); halving", state.t);
                    rejected += 1;
                    h *= 0.5;
                    continue;
                }
            };
            let slack = min_triangle_slack(&state.mesh, &trial.eval.metric.lengths);
            if slack < config.degeneracy_margin {
                debug!("t = {}: trial slack {slack:e} below margin; halving", state.t);
                rejected += 1;
                h *= 0.5;
                continue;
            }
            if guard && !delaunay_check(&state.mesh, &trial.eval.metric).is_clean() {
                rejected += 1;
                h *= 0.5;
                if h < config.dt_min {
                    break Err(Error::StepFailure {
                        t: state.t,
                        reason: "Delaunay condition lost with surgery off".into(),
                    });
                }
                continue;
            }
            if config.integrator == Integrator::Rk45 && trial.error > 1.0 {
                rejected += 1;
                h *= (0.9 * trial.error.powf(-0.2)).clamp(0.1, 0.9);
                continue;
            }
            break Ok((trial, h));
        };
        let (trial, h) = match accepted {
            Ok(x) => x,
            Err(e) => {
                warn!("{e}");
                break Outcome::Failed(e);
            }
        };
        if config.integrator == Integrator::Rk45 {
            let grow = if trial.error > 0.0 {
                (0.9 * trial.error.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            dt = (h * grow).min(config.dt_max);
        }
        debug_assert_eq!(trial.u.as_slice(), trial.dcs.u());
        state.t += h;
        state.dcs = trial.dcs;
        eval = trial.eval;
        steps += 1;
        let mut flips = Vec::new();
        if let Some(flavor) = flavor {
            match flip_to_delaunay(&mut state.mesh, &mut state.dcs, state.t, flavor) {
                Ok(ev) => flips = ev,
                Err(e) => break Outcome::Failed(e),
            }
            if !flips.is_empty() {
                eval = match evaluate(&state.mesh, &state.dcs, config, frozen.as_deref()) {
                    Ok(ev) => ev,
                    Err(e) => break Outcome::Failed(e),
                };
            }
        }
        records.push(record(&state, &eval, config, h, flips));
    };
    Ok(FlowRun {
        records,
        outcome,
        final_state: state,
        steps,
        rejected_steps: rejected,
    })
}

/// `F(u) = ∫_{base}^{u} Σ (K_i − K̄_i) du_i` along the straight segment,
/// by composite 8-point Gauss–Legendre quadrature with panel doubling.
pub fn potential_f(
    mesh: &TriangulatedSurface,
    dcs: &DiscreteConformalStructure,
    target: &[f64],
    base_u: &[f64],
) -> Result<f64> {
    if !dcs.is_circle_packing() {
        return Err(Error::PreconditionViolated(
            "the potential is defined for circle packings".into(),
        ));
    }
    let u = dcs.u();
    let dir: Vec<f64> = u.iter().zip(base_u).map(|(a, b)| a - b).collect();
    let integrand = |tau: f64| -> Result<f64> {
        let p: Vec<f64> = base_u.iter().zip(&dir).map(|(b, d)| b + tau * d).collect();
        let s = dcs.with_u(&p)?;
        let k = MetricState::new(mesh, s.lengths(mesh)?, s.background)?.curvature;
        Ok(k.iter().zip(target).zip(&dir).map(|((k, kb), d)| (k - kb) * d).sum())
    };
    let composite = |panels: usize| -> Result<f64> {
        let w = 1.0 / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * w;
            for (x, wt) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
                total += 0.5 * w * wt * integrand(mid + 0.5 * w * x)?;
            }
        }
        Ok(total)
    };
    let mut prev = composite(1)?;
    let mut panels = 2;
    while panels <= 256 {
        let next = composite(panels)?;
        if (next - prev).abs() <= 1e-13 * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
        panels *= 2;
    }
    Err(Error::QuadratureNonConvergence(prev))
}

const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];
