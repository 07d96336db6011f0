//! The full scenario grid at desk scale, followed by SVG charts.
//!
//! Six core-density targets × {core, periphery} × {error, attack}, several
//! instances and replicas, raw and averaged CSVs, a manifest, and charts.
//!
//!     cargo run --release --example scenario_grid -- [output_dir] [n]

use std::path::PathBuf;

use richclub_sim::charts::emit_charts;
use richclub_sim::{run_experiment, ExperimentConfig};

fn main() -> richclub_sim::Result<()> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "scenario-grid-out".into()).into();
    let n = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(500);
    let mut cfg = ExperimentConfig {
        master_seed: Some(2024),
        instances: 3,
        replicas: 3,
        rich_fraction: 0.02,
        stride: Some((n / 100).max(1)),
        output_dir: out.clone(),
        ..ExperimentConfig::default()
    };
    cfg.gen.n = n;

    let manifest = run_experiment(&cfg)?;
    println!(
        "{} raw traces and {} averaged traces in {:.1}s",
        manifest.traces.len(),
        manifest.averaged_files.len(),
        manifest.wall_clock_seconds
    );
    for ((label, mode), budget) in manifest.mean_budgets() {
        println!("  {label} {mode:<9} mean budget {budget:>8.1}");
    }
    for path in emit_charts(&out, &out.join("charts"))? {
        println!("chart: {}", path.display());
    }
    Ok(())
}
