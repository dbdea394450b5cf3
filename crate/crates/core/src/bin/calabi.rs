use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use discrete_calabi::conformal::check_structure_condition;
use discrete_calabi::error::Error;
use discrete_calabi::experiment::{summary_block, write_trace, ExperimentConfig};
use discrete_calabi::flow::{run_flow, stiffness, Outcome};
use discrete_calabi::jacobian::jacobian_with_metric;
use discrete_calabi::spectral::spectral_decompose_scaled;
use discrete_calabi::surgery::delaunay_check;
use discrete_calabi::{presets, Result};

#[derive(Parser)]
#[command(name = "calabi", about = "Fractional combinatorial Calabi flow on triangulated surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one flow and write its trace and summary.
    Flow(Setup),
    /// Report the structure condition, spectrum and Delaunay status.
    Check(Setup),
    /// Run the flow for several orders s and compare decay rates.
    Sweep(Setup),
    /// List the built-in meshes.
    PresetList,
}

#[derive(Args)]
struct Setup {
    /// Experiment file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    mesh: Option<String>,
    /// cp-euclidean, vs-hyperbolic, mixed-euclidean, file:PATH, ...
    #[arg(long)]
    structure: Option<String>,
    /// One order, or a comma list for `sweep`.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<String>,
    #[arg(long)]
    integrator: Option<String>,
    #[arg(long)]
    surgery: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    trace: Option<String>,
    #[arg(long)]
    summary: Option<String>,
}

impl Setup {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut kv: Vec<(String, String)> = Vec::new();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            let mut base = ExperimentConfig::parse(&text)?;
            base.resolve_relative_to(path.parent().unwrap_or(std::path::Path::new(".")));
            for line in base.dump().lines().skip(1) {
                if let Some((k, v)) = line.split_once(" = ") {
                    kv.push((k.to_string(), v.to_string()));
                }
            }
        }
        let flags = [
            ("mesh", self.preset.as_ref().map(|p| format!("preset:{p}")).or(self.mesh.clone())),
            ("structure", self.structure.clone()),
            ("s", self.s.clone()),
            ("target", self.target.clone()),
            ("eta", self.eta.clone()),
            ("u0", self.u0.clone()),
            ("integrator", self.integrator.clone()),
            ("surgery", self.surgery.clone()),
            ("dt", self.dt.clone()),
            ("t_max", self.t_max.clone()),
            ("tol", self.tol.clone()),
            ("trace", self.trace.clone()),
            ("summary", self.summary.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                kv.push((k.to_string(), v));
            }
        }
        ExperimentConfig::from_key_values(&kv)
    }
}

fn flow(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let ex = cfg.build()?;
    let s = cfg.s[0];
    let clock = Instant::now();
    let run = run_flow(ex.initial, &cfg.flow_config(s, ex.target))?;
    let summary = summary_block(&run, s, clock.elapsed().as_secs_f64());
    if let Some(p) = &cfg.trace {
        let mut w = BufWriter::new(File::create(p)?);
        write_trace(&run, &mut w)?;
        w.flush()?;
    }
    match &cfg.summary {
        Some(p) => std::fs::write(p, &summary)?,
        None => print!("{summary}"),
    }
    Ok(match run.outcome {
        Outcome::Converged => ExitCode::SUCCESS,
        Outcome::Failed(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Outcome::TimeLimit | Outcome::StepLimit => {
            eprintln!("flow stopped before converging");
            ExitCode::from(3)
        }
    })
}

fn check(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let ex = cfg.build()?;
    let st = &ex.initial;
    let rep = check_structure_condition(&st.mesh, st.dcs.epsilon(), st.dcs.eta());
    let metric = st.metric()?;
    let jac = jacobian_with_metric(&st.mesh, &st.dcs, &metric)?;
    let spectrum = spectral_decompose_scaled(&jac.matrix, jac.term_scale())?;
    let del = delaunay_check(&st.mesh, &metric);
    println!("vertices={} edges={} faces={} euler={}", st.mesh.num_vertices(), st.mesh.num_edges(), st.mesh.num_faces(), st.mesh.euler_characteristic());
    println!("background={}", st.dcs.background.name());
    println!("structure_condition={}", if rep.holds() { "ok" } else { "violated" });
    println!("gauss_bonnet_residual={:.3e}", metric.gauss_bonnet_residual(&st.mesh));
    println!("jacobian_symmetry_residual={:.3e}", jac.symmetry_residual());
    println!("zero_eigenvalues={}", spectrum.zero_count());
    let list: Vec<String> = spectrum.eigenvalues.iter().map(|l| format!("{l:.6e}")).collect();
    println!("eigenvalues={}", list.join(","));
    for &s in &cfg.s {
        println!("stiffness(s={s})={:.6e}", stiffness(&spectrum, s));
    }
    println!("delaunay_violations={} min_slack={:.6e}", del.violations.len(), del.min_slack());
    Ok(ExitCode::SUCCESS)
}

fn sweep(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let ex = cfg.build()?;
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .s
            .iter()
            .map(|&s| {
                let initial = ex.initial.clone();
                let fc = cfg.flow_config(s, ex.target.clone());
                scope.spawn(move || (s, run_flow(initial, &fc)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("flow thread")).collect()
    });
    println!("{:>6} {:>12} {:>8} {:>14} {:>14} {:>8} {:>6}", "s", "outcome", "t", "residual", "rate", "steps", "flips");
    let mut code = ExitCode::SUCCESS;
    for (s, run) in results {
        let run = run?;
        let rate = run.decay_rate().map_or("-".to_string(), |r| format!("{r:.6e}"));
        let last = run.last();
        println!(
            "{s:>6} {:>12} {:>8.3} {:>14.6e} {:>14} {:>8} {:>6}",
            discrete_calabi::experiment::outcome_name(&run.outcome),
            last.t,
            last.residual,
            rate,
            run.steps,
            run.flip_count()
        );
        if let Outcome::Failed(Error::StepFailure { .. }) = run.outcome {
            code = ExitCode::from(2);
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::PresetList => {
            for (name, m) in presets::all() {
                println!(
                    "{name:<20} V={:<3} E={:<3} F={:<3} chi={}",
                    m.num_vertices(),
                    m.num_edges(),
                    m.num_faces(),
                    m.euler_characteristic()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Flow(setup) => setup.load().and_then(|c| flow(&c)),
        Command::Check(setup) => setup.load().and_then(|c| check(&c)),
        Command::Sweep(setup) => setup.load().and_then(|c| sweep(&c)),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}
