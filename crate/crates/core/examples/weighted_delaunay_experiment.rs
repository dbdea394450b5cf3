//! Weighted Delaunay surgery: never needed for Euclidean packings with
//! η ∈ [0, 1], sometimes used by mixed structures.
//!
//! cargo run --release --example weighted_delaunay_experiment

use discrete_calabi::experiment::ExperimentConfig;
use discrete_calabi::flow::{run_flow, Surgery};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../experiments");
    let mut cp = ExperimentConfig::load(format!("{dir}/euclidean_packing_icosahedron.cfg").as_ref()).unwrap();
    cp.surgery = Surgery::WeightedDelaunay;
    let mixed = ExperimentConfig::load(format!("{dir}/mixed_weighted_surgery.cfg").as_ref()).unwrap();
    for (label, cfg) in [("euclidean packing", &cp), ("mixed hyperbolic", &mixed)] {
        for &s in &cfg.s {
            let ex = cfg.build().unwrap();
            let setup = ex.setup_flips.len();
            let run = run_flow(ex.initial, &cfg.flow_config(s, ex.target)).unwrap();
            let worst_area = run
                .records
                .iter()
                .flat_map(|r| &r.flips)
                .map(|f| (f.area_before - f.area_after).abs())
                .fold(0.0, f64::max);
            println!(
                "{label:<18} s = {s:+.1}: {} setup + {} flow flips, converged {}, area change {worst_area:.1e}",
                setup,
                run.flip_count(),
                run.converged()
            );
        }
    }
}
