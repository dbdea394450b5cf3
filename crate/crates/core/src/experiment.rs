//! Experiment descriptions, their `key = value` file format, and the CSV
//! trace and summary writers shared by the CLI and the examples.
//!
//! ```text
//! format = 1
//! mesh = preset:tetra_sphere        # or a path to a mesh file
//! structure = cp-euclidean          # cp-|vs-|mixed- euclidean|hyperbolic, or file:PATH
//! eta = random(7)                   # constant, random(SEED) or random(SEED,LO,HI)
//! lengths = 1                       # vertex-scaling reference length
//! epsilon = random(3)               # mixed structures only
//! u0 = random(11,0.5)               # zero, random(SEED,AMP) or a comma list
//! s = -1,0,1                        # one value for `flow`, several for `sweep`
//! target = uniform                  # uniform, derived or a comma list
//! integrator = rk45
//! surgery = off
//! ```
//!
//! `u0` is an offset from the base point of the structure (`u = 0`, or
//! `r ≡ 1` for hyperbolic circle packings); `target = derived` is the
//! curvature at that base point. Random Euclidean offsets are projected to
//! zero sum. With surgery on, the flow starts from the triangulation reached
//! by moving `u` from the base point to `u(0)` while flipping to Delaunay, so
//! offsets too large for the input triangulation are still admissible.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformal::{check_structure_condition, u_from_r, Background, DiscreteConformalStructure};
use crate::error::{Error, Result};
use crate::flow::{uniform_target, validate_target, FlowConfig, FlowRun, FlowState, Integrator, Outcome, Surgery};
use crate::geometry::MetricState;
use crate::mesh::TriangulatedSurface;
use crate::presets;
use crate::surgery::{transport_u, DelaunayFlavor, FlipEvent};

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    Preset(String),
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    CirclePacking,
    VertexScaling,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StructureSource {
    Family(Family, Background),
    File(PathBuf),
}

impl StructureSource {
    pub fn parse(s: &str) -> Option<Self> {
        if let Some(p) = s.strip_prefix("file:") {
            return Some(StructureSource::File(PathBuf::from(p)));
        }
        let (fam, bg) = s.split_once('-')?;
        let fam = match fam {
            "cp" => Family::CirclePacking,
            "vs" => Family::VertexScaling,
            "mixed" => Family::Mixed,
            _ => return None,
        };
        Some(StructureSource::Family(fam, Background::parse(bg)?))
    }

    fn dump(&self) -> String {
        match self {
            StructureSource::File(p) => format!("file:{}", p.display()),
            StructureSource::Family(f, bg) => {
                let f = match f {
                    Family::CirclePacking => "cp",
                    Family::VertexScaling => "vs",
                    Family::Mixed => "mixed",
                };
                format!("{f}-{}", bg.name())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EtaSpec {
    Constant(f64),
    /// Mostly in `[0, 1]` with occasional values in `[−0.5, 0)`.
    Random(u64),
    Uniform { seed: u64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialU {
    Zero,
    Random { seed: u64, amplitude: f64 },
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    Uniform,
    Derived,
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mesh: MeshSource,
    pub structure: StructureSource,
    pub eta: EtaSpec,
    pub lengths: f64,
    pub epsilon_seed: u64,
    pub u0: InitialU,
    pub s: Vec<f64>,
    pub target: TargetSpec,
    pub integrator: Integrator,
    pub dt: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub tol: f64,
    pub t_max: f64,
    pub surgery: Surgery,
    pub frozen: bool,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(mesh: MeshSource, structure: StructureSource) -> Self {
        let d = FlowConfig::new(1.0, Vec::new());
        ExperimentConfig {
            mesh,
            structure,
            eta: EtaSpec::Constant(1.0),
            lengths: 1.0,
            epsilon_seed: 0,
            u0: InitialU::Zero,
            s: vec![1.0],
            target: TargetSpec::Uniform,
            integrator: d.integrator,
            dt: d.dt,
            dt_min: d.dt_min,
            dt_max: d.dt_max,
            tol: d.tol_curvature,
            t_max: d.t_max,
            surgery: d.surgery,
            frozen: false,
            trace: None,
            summary: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        cfg.resolve_relative_to(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Makes relative mesh and structure paths relative to `dir`.
    pub fn resolve_relative_to(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        if let MeshSource::File(p) = &mut self.mesh {
            fix(p);
        }
        if let StructureSource::File(p) = &mut self.structure {
            fix(p);
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(eq) = content.find('=') else {
                let col = raw.len() - raw.trim_start().len() + 1;
                return Err(Error::Parse {
                    line,
                    column: col,
                    message: "expected `key = value`".into(),
                });
            };
            let key = content[..eq].trim();
            let value = content[eq + 1..].trim();
            let key_col = raw.find(key).map_or(1, |p| p + 1);
            let value_col = if value.is_empty() {
                eq + 2
            } else {
                eq + 1 + content[eq + 1..].find(value).unwrap_or(0) + 1
            };
            pairs.push(Pair {
                line,
                key_col,
                value_col,
                key: key.to_string(),
                value: value.to_string(),
            });
        }
        Self::from_pairs(&pairs)
    }

    /// Builds a config from already-split pairs, e.g. command-line flags.
    pub fn from_key_values(kv: &[(String, String)]) -> Result<Self> {
        let pairs: Vec<Pair> = kv
            .iter()
            .enumerate()
            .map(|(i, (k, v))| Pair {
                line: i + 1,
                key_col: 1,
                value_col: k.len() + 2,
                key: k.clone(),
                value: v.clone(),
            })
            .collect();
        Self::from_pairs(&pairs)
    }

    fn from_pairs(pairs: &[Pair]) -> Result<Self> {
        let find = |k: &str| pairs.iter().rev().find(|p| p.key == k);
        let missing = |k: &str| Error::Parse {
            line: pairs.last().map_or(1, |p| p.line),
            column: 1,
            message: format!("missing required key `{k}`"),
        };
        for p in pairs {
            if !KEYS.contains(&p.key.as_str()) {
                return Err(p.key_err(format!("unknown key `{}`", p.key)));
            }
        }
        if let Some(p) = find("format") {
            if p.value != "1" {
                return Err(p.err(format!("unsupported format `{}`", p.value)));
            }
        }
        let mesh_pair = find("mesh").ok_or_else(|| missing("mesh"))?;
        let mesh = match mesh_pair.value.strip_prefix("preset:") {
            Some(name) => {
                if !presets::PRESET_NAMES.contains(&name) {
                    return Err(mesh_pair.err(format!("unknown preset `{name}`")));
                }
                MeshSource::Preset(name.to_string())
            }
            None => MeshSource::File(PathBuf::from(&mesh_pair.value)),
        };
        let sp = find("structure").ok_or_else(|| missing("structure"))?;
        let structure = StructureSource::parse(&sp.value)
            .ok_or_else(|| sp.err(format!("unknown structure `{}`", sp.value)))?;
        let mut cfg = ExperimentConfig::new(mesh, structure);
        if let Some(p) = find("eta") {
            cfg.eta = match parse_call(&p.value) {
                Some(("random", args)) if args.len() == 1 => EtaSpec::Random(p.int(args[0])?),
                Some(("random", args)) if args.len() == 3 => EtaSpec::Uniform {
                    seed: p.int(args[0])?,
                    lo: p.real(args[1])?,
                    hi: p.real(args[2])?,
                },
                Some(_) => return Err(p.err("expected random(SEED) or random(SEED,LO,HI)".into())),
                None => EtaSpec::Constant(p.real(&p.value)?),
            };
        }
        if let Some(p) = find("lengths") {
            cfg.lengths = p.real(&p.value)?;
            if !(cfg.lengths > 0.0) {
                return Err(p.err("reference length must be positive".into()));
            }
        }
        if let Some(p) = find("epsilon") {
            cfg.epsilon_seed = match parse_call(&p.value) {
                Some(("random", args)) if args.len() == 1 => p.int(args[0])?,
                _ => return Err(p.err("expected random(SEED)".into())),
            };
        }
        if let Some(p) = find("u0") {
            cfg.u0 = match (p.value.as_str(), parse_call(&p.value)) {
                ("zero", _) => InitialU::Zero,
                (_, Some(("random", args))) if args.len() == 2 => InitialU::Random {
                    seed: p.int(args[0])?,
                    amplitude: p.real(args[1])?,
                },
                (_, Some(_)) => return Err(p.err("expected random(SEED,AMPLITUDE)".into())),
                (v, None) => InitialU::Values(p.list(v)?),
            };
        }
        if let Some(p) = find("s") {
            cfg.s = p.list(&p.value)?;
            if cfg.s.is_empty() {
                return Err(p.err("at least one order s is required".into()));
            }
        }
        if let Some(p) = find("target") {
            cfg.target = match p.value.as_str() {
                "uniform" => TargetSpec::Uniform,
                "derived" => TargetSpec::Derived,
                v => TargetSpec::Values(p.list(v)?),
            };
        }
        if let Some(p) = find("integrator") {
            cfg.integrator =
                Integrator::parse(&p.value).ok_or_else(|| p.err(format!("unknown integrator `{}`", p.value)))?;
        }
        if let Some(p) = find("surgery") {
            cfg.surgery = Surgery::parse(&p.value).ok_or_else(|| p.err(format!("unknown surgery `{}`", p.value)))?;
        }
        if let Some(p) = find("frozen") {
            cfg.frozen = match p.value.as_str() {
                "true" => true,
                "false" => false,
                _ => return Err(p.err("expected true or false".into())),
            };
        }
        for (key, slot) in [
            ("dt", &mut cfg.dt),
            ("dt_min", &mut cfg.dt_min),
            ("dt_max", &mut cfg.dt_max),
            ("tol", &mut cfg.tol),
            ("t_max", &mut cfg.t_max),
        ] {
            if let Some(p) = find(key) {
                *slot = p.real(&p.value)?;
                if !(*slot > 0.0) {
                    return Err(p.err(format!("`{key}` must be positive")));
                }
            }
        }
        cfg.trace = find("trace").map(|p| PathBuf::from(&p.value));
        cfg.summary = find("summary").map(|p| PathBuf::from(&p.value));
        Ok(cfg)
    }

    /// Canonical text form; `parse(dump(c)) == c`.
    pub fn dump(&self) -> String {
        let mut s = String::from("format = 1\n");
        let mesh = match &self.mesh {
            MeshSource::Preset(n) => format!("preset:{n}"),
            MeshSource::File(p) => p.display().to_string(),
        };
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "mesh = {mesh}");
        let _ = writeln!(s, "structure = {}", self.structure.dump());
        let eta = match &self.eta {
            EtaSpec::Constant(x) => format!("{x:?}"),
            EtaSpec::Random(seed) => format!("random({seed})"),
            EtaSpec::Uniform { seed, lo, hi } => format!("random({seed},{lo:?},{hi:?})"),
        };
        let _ = writeln!(s, "eta = {eta}");
        let _ = writeln!(s, "lengths = {:?}", self.lengths);
        let _ = writeln!(s, "epsilon = random({})", self.epsilon_seed);
        let u0 = match &self.u0 {
            InitialU::Zero => "zero".to_string(),
            InitialU::Random { seed, amplitude } => format!("random({seed},{amplitude:?})"),
            InitialU::Values(v) => list(v),
        };
        let _ = writeln!(s, "u0 = {u0}");
        let _ = writeln!(s, "s = {}", list(&self.s));
        let target = match &self.target {
            TargetSpec::Uniform => "uniform".to_string(),
            TargetSpec::Derived => "derived".to_string(),
            TargetSpec::Values(v) => list(v),
        };
        let _ = writeln!(s, "target = {target}");
        let _ = writeln!(s, "integrator = {}", self.integrator.name());
        let _ = writeln!(s, "dt = {:?}", self.dt);
        let _ = writeln!(s, "dt_min = {:?}", self.dt_min);
        let _ = writeln!(s, "dt_max = {:?}", self.dt_max);
        let _ = writeln!(s, "tol = {:?}", self.tol);
        let _ = writeln!(s, "t_max = {:?}", self.t_max);
        let _ = writeln!(s, "surgery = {}", self.surgery.name());
        let _ = writeln!(s, "frozen = {}", self.frozen);
        if let Some(p) = &self.trace {
            let _ = writeln!(s, "trace = {}", p.display());
        }
        if let Some(p) = &self.summary {
            let _ = writeln!(s, "summary = {}", p.display());
        }
        s
    }

    pub fn load_mesh(&self) -> Result<TriangulatedSurface> {
        match &self.mesh {
            MeshSource::Preset(name) => presets::by_name(name),
            MeshSource::File(p) => TriangulatedSurface::from_text(&std::fs::read_to_string(p)?),
        }
    }

    /// Mesh, structure at the base point, the starting state, and the target.
    /// Checks the structure condition and the target before returning.
    pub fn build(&self) -> Result<Experiment> {
        let mesh = self.load_mesh()?;
        let base = self.base_structure(&mesh)?;
        let report = check_structure_condition(&mesh, base.epsilon(), base.eta());
        if !report.holds() {
            return Err(Error::PreconditionViolated(format!(
                "structure condition fails on {} edges and {} corners",
                report.edge_violations.len(),
                report.corner_violations.len()
            )));
        }
        let base_metric = MetricState::new(&mesh, base.lengths(&mesh)?, base.background)?;
        let target = match &self.target {
            TargetSpec::Uniform => uniform_target(&mesh, base.background)?,
            TargetSpec::Derived => base_metric.curvature.clone(),
            TargetSpec::Values(v) if v.len() == 1 => vec![v[0]; mesh.num_vertices()],
            TargetSpec::Values(v) => v.clone(),
        };
        validate_target(&target, &mesh, base.background)?;
        let n = mesh.num_vertices();
        let offset = match &self.u0 {
            InitialU::Zero => vec![0.0; n],
            InitialU::Values(v) => {
                if v.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: v.len() });
                }
                v.clone()
            }
            InitialU::Random { seed, amplitude } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0) * amplitude).collect();
                if base.background == Background::Euclidean {
                    let mean = v.iter().sum::<f64>() / n as f64;
                    v.iter_mut().for_each(|x| *x -= mean);
                }
                v
            }
        };
        let u: Vec<f64> = base.u().iter().zip(&offset).map(|(a, b)| a + b).collect();
        let flavor = match self.surgery {
            Surgery::Off => None,
            Surgery::Delaunay => Some(DelaunayFlavor::Metric),
            Surgery::WeightedDelaunay => Some(DelaunayFlavor::Weighted),
        };
        let (mut mesh, mut start) = (mesh, base.clone());
        let setup_flips = match flavor {
            Some(flavor) => transport_u(&mut mesh, &mut start, &u, 0.0, flavor)?,
            None => {
                start.set_u(u)?;
                Vec::new()
            }
        };
        Ok(Experiment {
            base,
            initial: FlowState::new(mesh, start),
            target,
            setup_flips,
        })
    }

    fn base_structure(&self, mesh: &TriangulatedSurface) -> Result<DiscreteConformalStructure> {
        let (family, bg) = match &self.structure {
            StructureSource::File(p) => {
                return DiscreteConformalStructure::from_text(mesh, &std::fs::read_to_string(p)?);
            }
            StructureSource::Family(f, bg) => (*f, *bg),
        };
        let n = mesh.num_vertices();
        match family {
            Family::VertexScaling => {
                DiscreteConformalStructure::vertex_scaling(mesh, bg, &vec![self.lengths; mesh.num_edges()], vec![0.0; n])
            }
            Family::CirclePacking | Family::Mixed => {
                let epsilon = if family == Family::Mixed {
                    let mut rng = ChaCha8Rng::seed_from_u64(self.epsilon_seed);
                    let mut e: Vec<f64> = (0..n).map(|_| f64::from(rng.random_bool(0.5) as u8)).collect();
                    // keep both kinds present when there is room for it
                    if n > 1 && e.iter().all(|&x| x == e[0]) {
                        e[0] = 1.0 - e[0];
                    }
                    e
                } else {
                    vec![1.0; n]
                };
                let eta = match &self.eta {
                    EtaSpec::Constant(x) => vec![*x; mesh.num_edges()],
                    EtaSpec::Random(seed) => random_eta(mesh, &epsilon, &mut ChaCha8Rng::seed_from_u64(*seed), None)?,
                    EtaSpec::Uniform { seed, lo, hi } => {
                        random_eta(mesh, &epsilon, &mut ChaCha8Rng::seed_from_u64(*seed), Some((*lo, *hi)))?
                    }
                };
                let u0 = if bg == Background::Hyperbolic {
                    let u1 = u_from_r(1.0)?;
                    epsilon.iter().map(|&e| if e == 1.0 { u1 } else { 0.0 }).collect()
                } else {
                    vec![0.0; n]
                };
                if family == Family::CirclePacking {
                    DiscreteConformalStructure::circle_packing(mesh, bg, eta, u0)
                } else {
                    DiscreteConformalStructure::new(mesh, bg, epsilon, eta, u0)
                }
            }
        }
    }

    /// Flow settings for order `s` and the given target.
    pub fn flow_config(&self, s: f64, target: Vec<f64>) -> FlowConfig {
        let mut c = FlowConfig::new(s, target);
        c.integrator = self.integrator;
        c.dt = self.dt;
        c.dt_min = self.dt_min;
        c.dt_max = self.dt_max;
        c.tol_curvature = self.tol;
        c.t_max = self.t_max;
        c.surgery = self.surgery;
        c.frozen_initial_curvature = self.frozen;
        c
    }
}

/// Edge weights drawn per edge; edges taking part in a violation of the
/// structure condition are redrawn until it holds. `range = None` draws from
/// `[−0.5, 0)` with probability 0.2 and from `[0, 1]` otherwise.
pub fn random_eta<R: Rng>(
    mesh: &TriangulatedSurface,
    epsilon: &[f64],
    rng: &mut R,
    range: Option<(f64, f64)>,
) -> Result<Vec<f64>> {
    let draw = |rng: &mut R| match range {
        Some((lo, hi)) => rng.random_range(lo..=hi),
        None if rng.random_bool(0.2) => rng.random_range(-0.5..0.0),
        None => rng.random_range(0.0..=1.0),
    };
    let mut eta: Vec<f64> = (0..mesh.num_edges()).map(|_| draw(rng)).collect();
    for _ in 0..10_000 {
        let report = check_structure_condition(mesh, epsilon, &eta);
        if report.holds() {
            return Ok(eta);
        }
        let mut bad: Vec<usize> = report.edge_violations.iter().map(|e| e.0).collect();
        for (f, _) in &report.corner_violations {
            bad.extend(mesh.face_edges(*f).map(|e| e.0));
        }
        bad.sort_unstable();
        bad.dedup();
        for e in bad {
            eta[e] = draw(rng);
        }
    }
    Err(Error::PreconditionViolated(
        "no edge weights satisfying the structure condition found".into(),
    ))
}

#[derive(Debug, Clone)]
pub struct Experiment {
    /// The structure at its base point (`target = derived` is measured here).
    pub base: DiscreteConformalStructure,
    pub initial: FlowState,
    pub target: Vec<f64>,
    /// With surgery on, `u(0)` is reached from the base point along a
    /// straight line with Delaunay flips; these are those flips.
    pub setup_flips: Vec<FlipEvent>,
}

const KEYS: [&str; 19] = [
    "format",
    "mesh",
    "structure",
    "eta",
    "lengths",
    "epsilon",
    "u0",
    "s",
    "target",
    "integrator",
    "dt",
    "dt_min",
    "dt_max",
    "tol",
    "t_max",
    "surgery",
    "frozen",
    "trace",
    "summary",
];

struct Pair {
    line: usize,
    key_col: usize,
    value_col: usize,
    key: String,
    value: String,
}

impl Pair {
    fn err(&self, message: String) -> Error {
        Error::Parse {
            line: self.line,
            column: self.value_col,
            message,
        }
    }

    fn key_err(&self, message: String) -> Error {
        Error::Parse {
            line: self.line,
            column: self.key_col,
            message,
        }
    }

    fn real(&self, s: &str) -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| self.err(format!("expected a number, got `{}`", s.trim())))
    }

    fn int(&self, s: &str) -> Result<u64> {
        s.trim()
            .parse()
            .map_err(|_| self.err(format!("expected an unsigned integer, got `{}`", s.trim())))
    }

    fn list(&self, s: &str) -> Result<Vec<f64>> {
        s.split(',').map(|x| self.real(x)).collect()
    }
}

/// `name(a, b, ...)` split into the name and its arguments.
fn parse_call(s: &str) -> Option<(&str, Vec<&str>)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    Some((s[..open].trim(), inner.split(',').map(str::trim).collect()))
}

/// CSV trace: a `# format=1` line, the header, one row per accepted step
/// (the first row is the initial state) and a `FLIP` row per flip, placed
/// after the row of the step that triggered it.
pub fn write_trace(run: &FlowRun, out: &mut impl std::io::Write) -> Result<()> {
    let n = run.records.first().map_or(0, |r| r.u.len());
    let mut header = String::from("t,calabi_energy,sum_u,min_angle,lambda_min,lambda_max,flips");
    for i in 0..n {
        let _ = write!(header, ",K_{i}");
    }
    for i in 0..n {
        let _ = write!(header, ",u_{i}");
    }
    writeln!(out, "# format=1")?;
    writeln!(out, "{header}")?;
    for r in &run.records {
        let mut row = format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.t,
            r.calabi_energy,
            r.sum_u,
            r.min_angle,
            r.lambda_min,
            r.lambda_max,
            r.flips.len()
        );
        for x in r.curvature.iter().chain(&r.u) {
            let _ = write!(row, ",{x:.16e}");
        }
        writeln!(out, "{row}")?;
        for f in &r.flips {
            let [i, j, k, l] = f.vertices;
            writeln!(
                out,
                "FLIP,{:.16e},{i},{j},{k},{l},{:.16e},{:.16e},{:.16e}",
                f.t, f.new_length, f.slack_before, f.slack_after
            )?;
        }
    }
    Ok(())
}

pub fn outcome_name(o: &Outcome) -> &'static str {
    match o {
        Outcome::Converged => "converged",
        Outcome::TimeLimit => "time_limit",
        Outcome::StepLimit => "step_limit",
        Outcome::Failed(Error::StepFailure { .. }) => "step_failure",
        Outcome::Failed(_) => "error",
    }
}

/// `key=value` summary block.
pub fn summary_block(run: &FlowRun, s: f64, wall_time: f64) -> String {
    let last = run.last();
    let mut out = String::from("format=1\n");
    let rate = run.decay_rate().map_or("nan".to_string(), |r| format!("{r:.10e}"));
    let _ = writeln!(out, "s={s}");
    let _ = writeln!(out, "converged={}", run.converged());
    let _ = writeln!(out, "outcome={}", outcome_name(&run.outcome));
    if let Outcome::Failed(e) = &run.outcome {
        let _ = writeln!(out, "error={e}");
    }
    let _ = writeln!(out, "t_final={:.10e}", last.t);
    let _ = writeln!(out, "final_residual={:.6e}", last.residual);
    let _ = writeln!(out, "fitted_rate={rate}");
    let _ = writeln!(out, "flip_count={}", run.flip_count());
    let _ = writeln!(out, "steps={}", run.steps);
    let _ = writeln!(out, "rejected_steps={}", run.rejected_steps);
    let _ = writeln!(out, "sum_u_drift={:.6e}", run.conservation_drift());
    let _ = writeln!(out, "wall_time_s={wall_time:.3}");
    out
}
