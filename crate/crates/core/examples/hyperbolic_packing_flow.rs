//! Hyperbolic circle packing started away from unit radii; the flow
//! recovers them for every order.
//!
//! cargo run --release --example hyperbolic_packing_flow

use discrete_calabi::experiment::ExperimentConfig;
use discrete_calabi::flow::run_flow;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../experiments/hyperbolic_packing.cfg");
    let cfg = ExperimentConfig::load(path.as_ref()).unwrap();
    let ex = cfg.build().unwrap();
    let start = ex.initial.dcs.radii().unwrap();
    println!("initial radii {:.3?}", start);
    for &s in &cfg.s {
        let ex = cfg.build().unwrap();
        let run = run_flow(ex.initial, &cfg.flow_config(s, ex.target)).unwrap();
        let radii = run.final_state.dcs.radii().unwrap();
        let err = radii.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
        let floor = run.records.iter().filter_map(|r| r.min_radius).fold(f64::INFINITY, f64::min);
        println!(
            "s = {s:+.1}: converged {} at t = {:.2}, max |r - 1| = {err:.1e}, smallest radius seen {floor:.4}",
            run.converged(),
            run.last().t
        );
    }
}
