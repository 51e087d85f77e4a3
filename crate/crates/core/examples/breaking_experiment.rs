//! Radial persistence versus breaking at 48³.
//!
//! With no argument both reference cases are run; otherwise the argument is
//! an experiment config in JSON (see `examples/configs/symmetry_*.json`).
//!
//! `cargo run --release --example breaking_experiment`

use sfns::config::load_json;
use sfns::symmetry::{run_symmetry_experiment, ExperimentConfig};

fn main() -> sfns::Result<()> {
    let paths: Vec<String> = match std::env::args().nth(1) {
        Some(p) => vec![p],
        None => ["symmetry_persist.json", "symmetry_break.json"]
            .iter()
            .map(|f| format!("{}/examples/configs/{f}", env!("CARGO_MANIFEST_DIR")))
            .collect(),
    };
    for path in paths {
        let cfg: ExperimentConfig = load_json(path.as_ref())?;
        let out = run_symmetry_experiment(&cfg)?;
        println!("== {path}");
        println!("predicted {:?}, observed {:?}", out.prediction.predicted, out.verdict);
        println!(
            "baseline {:.3e}, max {:.3e} ({:.2}×), energy imbalance {:.1e}",
            out.baseline(),
            out.max_global(),
            out.max_global() / out.baseline(),
            out.run.energy_report().max_relative_imbalance()
        );
        print!("{}", out.to_csv());
    }
    Ok(())
}
