//! Per-instance link budgets for the six standard scenarios.
//!
//! Realizes ten N=5000, <k>=6 networks from one shared degree sequence,
//! takes the top 1% of nodes by degree as the rich set, and prints the number
//! of core links each density target would add (or remove).
//!
//!     cargo run --release --example scenario_budgets -- [master_seed]

use richclub_sim::experiment::{build_instances, default_scenarios};
use richclub_sim::ExperimentConfig;

fn main() -> richclub_sim::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2024);
    let cfg = ExperimentConfig {
        master_seed: Some(seed),
        ..ExperimentConfig::default()
    };
    let instances = build_instances(&cfg)?;
    let scenarios = default_scenarios();

    print!("{:>8} {:>6} {:>8}", "instance", "links", "density");
    for s in &scenarios {
        print!(" {:>6}", s.label);
    }
    println!();
    let mut sums = vec![0i64; scenarios.len()];
    let mut density_sum = 0.0;
    for inst in &instances {
        print!("{:>8} {:>6} {:>8.4}", inst.index, inst.rich.internal_links, inst.rich.density());
        density_sum += inst.rich.density();
        for (k, s) in scenarios.iter().enumerate() {
            let b = s.budget(&inst.rich);
            sums[k] += b;
            print!(" {:>6}", b);
        }
        println!();
    }
    let k = instances.len() as f64;
    print!("{:>8} {:>6} {:>8.4}", "mean", "", density_sum / k);
    for s in &sums {
        print!(" {:>6.1}", *s as f64 / k);
    }
    println!();
    Ok(())
}
