//! Calabi flow of a Euclidean circle packing towards constant curvature,
//! for several orders s.
//!
//! cargo run --release --example euclidean_packing_flow [path/to/trace.csv]

use discrete_calabi::experiment::{write_trace, ExperimentConfig};
use discrete_calabi::flow::run_flow;
use discrete_calabi::spectral::spectral_decompose_scaled;
use discrete_calabi::jacobian::jacobian_l;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../experiments/euclidean_packing_icosahedron.cfg");
    let cfg = ExperimentConfig::load(path.as_ref()).unwrap();
    let trace_out = std::env::args().nth(1);
    println!("{:>5} {:>8} {:>7} {:>12} {:>12} {:>7}", "s", "t", "steps", "rate", "predicted", "drift");
    for &s in &cfg.s {
        let ex = cfg.build().unwrap();
        let run = run_flow(ex.initial, &cfg.flow_config(s, ex.target)).unwrap();
        let fin = &run.final_state;
        let jac = jacobian_l(&fin.mesh, &fin.dcs).unwrap();
        let sp = spectral_decompose_scaled(&jac.matrix, jac.term_scale()).unwrap();
        let predicted = 2.0 * sp.nonzero_range().unwrap().1.powf(s + 1.0);
        println!(
            "{s:>5} {:>8.3} {:>7} {:>12.6} {:>12.6} {:>7.1e}",
            run.last().t,
            run.steps,
            run.decay_rate().unwrap_or(f64::NAN),
            predicted,
            run.conservation_drift()
        );
        if let (Some(p), 1.0) = (&trace_out, s) {
            let mut f = std::fs::File::create(p).unwrap();
            write_trace(&run, &mut f).unwrap();
        }
    }
    if let Some(p) = trace_out {
        println!("trace for s = 1 written to {p}");
    }
}
