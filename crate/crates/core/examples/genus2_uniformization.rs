//! Uniformizing a genus-2 surface: hyperbolic vertex scaling driven to zero
//! curvature, from several random starts. All runs land on the same metric.
//!
//! cargo run --release --example genus2_uniformization

use discrete_calabi::experiment::{ExperimentConfig, InitialU};
use discrete_calabi::flow::run_flow;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../experiments/genus2_uniformization.cfg");
    let mut cfg = ExperimentConfig::load(path.as_ref()).unwrap();
    let s = cfg.s[0];
    let mut sorted_lengths = Vec::new();
    for seed in 0..4 {
        cfg.u0 = InitialU::Random { seed, amplitude: 1.0 };
        let ex = cfg.build().unwrap();
        let run = run_flow(ex.initial, &cfg.flow_config(s, ex.target)).unwrap();
        let metric = run.final_state.metric().unwrap();
        let mut l = metric.lengths.clone();
        l.sort_by(f64::total_cmp);
        println!(
            "seed {seed}: {} flips, K = {:+.1e}, area {:.6} (4π = {:.6})",
            run.flip_count(),
            metric.curvature[0],
            metric.face_areas.iter().sum::<f64>(),
            4.0 * std::f64::consts::PI
        );
        sorted_lengths.push(l);
    }
    let spread = sorted_lengths
        .iter()
        .flat_map(|l| l.iter().zip(&sorted_lengths[0]).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    println!("largest difference between final edge-length lists: {spread:.1e}");
}
