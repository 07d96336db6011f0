//! Random failure versus simultaneous degree-targeted attack.
//!
//! Both strategies remove nodes from the same network; the attack order is
//! fixed up front by initial degree. The table samples both traces every 5%.
//!
//!     cargo run --release --example attack_vs_error -- [n] [seed]

use richclub_sim::experiment::build_instances;
use richclub_sim::metrics::ClusteringConvention;
use richclub_sim::resilience::{removal_order, run_removal};
use richclub_sim::{ExperimentConfig, Strategy, Trace};

fn trace(cfg: &ExperimentConfig, strategy: Strategy, seed: u64) -> richclub_sim::Result<Trace> {
    let inst = build_instances(cfg)?.remove(0);
    let stride = (inst.graph.n() / 100).max(1);
    let plan = removal_order(&inst.graph, strategy, seed)?
        .with_stride(stride)
        .with_stop_fraction(0.5);
    run_removal(&inst.graph, &plan, ClusteringConvention::default())
}

fn main() -> richclub_sim::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(9);
    let mut cfg = ExperimentConfig {
        master_seed: Some(seed),
        instances: 1,
        ..ExperimentConfig::default()
    };
    cfg.gen.n = n;
    let error = trace(&cfg, Strategy::Error, seed)?;
    let attack = trace(&cfg, Strategy::AttackSimultaneous, seed)?;

    println!(
        "{:>7} | {:>5} {:>7} {:>7} {:>7} | {:>5} {:>7} {:>7} {:>7}",
        "removed", "D", "APL", "E", "C", "D", "APL", "E", "C"
    );
    println!("{:>7} | {:^29} | {:^29}", "", "error", "attack");
    let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3}"));
    let mut next = 0.0;
    for (e, a) in error.points.iter().zip(&attack.points) {
        if e.removed_fraction + 1e-12 < next {
            continue;
        }
        next += 0.05;
        println!(
            "{:>7.2} | {:>5} {:>7} {:>7} {:>7} | {:>5} {:>7} {:>7} {:>7}",
            e.removed_fraction,
            f(e.metrics.diameter),
            f(e.metrics.apl),
            f(e.metrics.efficiency),
            f(e.metrics.clustering),
            f(a.metrics.diameter),
            f(a.metrics.apl),
            f(a.metrics.efficiency),
            f(a.metrics.clustering),
        );
    }
    Ok(())
}
