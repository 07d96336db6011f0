//! How long does a scale-free network keep its diameter under random failure?
//!
//! Removes nodes uniformly at random from the default instance and reports the
//! removed fraction at which the replica-averaged diameter first reaches twice
//! its initial value, together with a coarse table of the averaged trace.
//!
//!     cargo run --release --example error_diameter -- [n] [replicas] [stride] [master_seed]
//!
//! Defaults: n=5000, 10 replicas, stride 1 (every removal measured), seed 1.
//! The full default run performs tens of thousands of all-pairs sweeps; pass a
//! larger stride for a quick look.

use richclub_sim::experiment::{build_instances, replica_seed};
use richclub_sim::metrics::ClusteringConvention;
use richclub_sim::resilience::{average_traces, removal_order, run_removal, Strategy};
use richclub_sim::{ExperimentConfig, Trace};

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> richclub_sim::Result<()> {
    let n: usize = arg(1, 5000);
    let replicas: usize = arg(2, 10);
    let stride: usize = arg(3, 1);
    let seed: u64 = arg(4, 1);

    let mut cfg = ExperimentConfig {
        master_seed: Some(seed),
        instances: 1,
        ..ExperimentConfig::default()
    };
    cfg.gen.n = n;
    let inst = build_instances(&cfg)?.remove(0);
    println!("instance: n={n}, links={}, stride={stride}, replicas={replicas}", inst.graph.link_count());

    let traces = (0..replicas)
        .map(|r| {
            let started = std::time::Instant::now();
            let plan = removal_order(&inst.graph, Strategy::Error, replica_seed(inst.seed, r))?
                .with_stride(stride);
            let t = run_removal(&inst.graph, &plan, ClusteringConvention::default())?;
            eprintln!("replica {r} done in {:.1}s", started.elapsed().as_secs_f64());
            Ok(t)
        })
        .collect::<richclub_sim::Result<Vec<Trace>>>()?;
    let avg = average_traces(&traces)?;

    let d0 = avg.points[0].metrics.diameter.unwrap_or(0.0);
    let doubled = avg
        .points
        .iter()
        .find(|p| p.metrics.diameter.is_some_and(|d| d >= 2.0 * d0));
    println!("baseline diameter {d0:.2}");
    match doubled {
        Some(p) => println!("diameter first doubles at removed fraction {:.4}", p.removed_fraction),
        None => println!("diameter never doubles"),
    }

    println!("\n{:>8} {:>8} {:>8} {:>8} {:>10}", "removed", "D", "APL", "E", "reachable");
    let mut next = 0.0;
    for p in &avg.points {
        if p.removed_fraction + 1e-12 >= next {
            let m = &p.metrics;
            let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3}"));
            println!(
                "{:>8.3} {:>8} {:>8} {:>8} {:>10}",
                p.removed_fraction,
                f(m.diameter),
                f(m.apl),
                f(m.efficiency),
                f(m.reachable_pair_fraction)
            );
            next += 0.05;
        }
    }
    Ok(())
}
