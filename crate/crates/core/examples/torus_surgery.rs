//! Vertex scaling on tori with Delaunay flips: the flat 16-vertex torus
//! from a large random start, and a skewed one-vertex torus.
//!
//! cargo run --release --example torus_surgery

use discrete_calabi::experiment::ExperimentConfig;
use discrete_calabi::flow::run_flow;
use discrete_calabi::surgery::delaunay_check;

fn main() {
    for name in ["torus_surgery_flat16.cfg", "torus_surgery_one_vertex.cfg"] {
        let path = format!("{}/../../experiments/{name}", env!("CARGO_MANIFEST_DIR"));
        let cfg = ExperimentConfig::load(path.as_ref()).unwrap();
        println!("{name}");
        for &s in &cfg.s {
            let ex = cfg.build().unwrap();
            let setup = ex.setup_flips.len();
            let run = run_flow(ex.initial, &cfg.flow_config(s, ex.target)).unwrap();
            let fin = &run.final_state;
            let clean = delaunay_check(&fin.mesh, &fin.metric().unwrap()).is_clean();
            println!(
                "  s = {s:+.1}: {setup} flips to reach u(0), {} during the flow, converged {}, Delaunay at the end {clean}",
                run.flip_count(),
                run.converged()
            );
            for f in run.records.iter().flat_map(|r| &r.flips).take(3) {
                println!(
                    "    t = {:.4}: {:?} {:.4} -> {:.4}, slack {:+.2e} -> {:+.2e}",
                    f.t, f.vertices, f.old_length, f.new_length, f.slack_before, f.slack_after
                );
            }
        }
    }
}
