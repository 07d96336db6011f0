//! Core versus periphery thickening on one network.
//!
//! For each standard density target the same link budget is either spent on
//! pairs of rich nodes (core) or on pairs of ordinary nodes (periphery). The
//! table shows what that does to clustering, degree variance and efficiency.
//!
//!     cargo run --release --example thicken_core -- [n] [seed]

use richclub_sim::experiment::{build_instances, default_scenarios, thicken_seed};
use richclub_sim::metrics;
use richclub_sim::richclub::apply_scenario;
use richclub_sim::{ExperimentConfig, ThickeningMode};

fn main() -> richclub_sim::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(3);
    let mut cfg = ExperimentConfig {
        master_seed: Some(seed),
        instances: 1,
        ..ExperimentConfig::default()
    };
    cfg.gen.n = n;
    let inst = build_instances(&cfg)?.remove(0);
    println!(
        "n={n}, rich set of {} nodes with {} of {} possible links (density {:.3})\n",
        inst.rich.len(),
        inst.rich.internal_links,
        inst.rich.max_links(),
        inst.rich.density()
    );
    println!(
        "{:>8} {:>7} {:>10} | {:>8} {:>8} {:>8} | {:>8}",
        "scenario", "budget", "mode", "density", "C", "var", "E"
    );
    for (si, sc) in default_scenarios().iter().enumerate() {
        for mode in [ThickeningMode::Core, ThickeningMode::Periphery] {
            let mut g = inst.graph.clone();
            let report = apply_scenario(&mut g, &inst.rich, sc, mode, thicken_seed(inst.seed, si, mode))?;
            let m = metrics::measure_all(&g)?;
            println!(
                "{:>8} {:>7} {:>10} | {:>8.3} {:>8.4} {:>8.3} | {:>8.4}",
                sc.label,
                report.budget,
                mode.as_str(),
                report.achieved_density,
                m.clustering.unwrap_or(f64::NAN),
                m.degree_variance.unwrap_or(f64::NAN),
                m.efficiency.unwrap_or(f64::NAN),
            );
        }
    }
    Ok(())
}
