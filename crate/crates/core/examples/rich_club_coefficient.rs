//! Rich-club coefficient phi(k) and its null-model normalization rho(k).
//!
//! rho(k) > 1 means nodes of degree > k link to each other more than a
//! degree-preserving random rewiring of the same network would. A freshly
//! generated network sits near 1; a clique core pushes the high-k end up.
//!
//!     cargo run --release --example rich_club_coefficient -- [n] [seed]

use richclub_sim::experiment::build_instances;
use richclub_sim::richclub::{normalized_rich_club, thicken_core, NullModelConfig};
use richclub_sim::{ExperimentConfig, Graph};

fn table(title: &str, g: &Graph, ks: &[usize], seed: u64) {
    let null = NullModelConfig {
        samples: 20,
        ..NullModelConfig::default()
    };
    println!("{title}");
    println!("{:>5} {:>8} {:>8} {:>8}", "k", "phi", "phi_rand", "rho");
    for &k in ks {
        match normalized_rich_club(g, k, &null, seed) {
            Ok(r) => println!("{k:>5} {:>8.4} {:>8.4} {:>8.3}", r.phi, r.random_mean, r.rho),
            Err(e) => println!("{k:>5} {e}"),
        }
    }
    println!();
}

fn main() -> richclub_sim::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(5);
    let mut cfg = ExperimentConfig {
        master_seed: Some(seed),
        instances: 1,
        ..ExperimentConfig::default()
    };
    cfg.gen.n = n;
    let inst = build_instances(&cfg)?.remove(0);
    let ks = [2, 5, 10, 15, 20, 30];
    table("generated network", &inst.graph, &ks, seed);

    let mut clique = inst.graph.clone();
    thicken_core(&mut clique, &inst.rich, 1.0, seed)?;
    table(
        &format!("after turning the top {} nodes into a clique", inst.rich.len()),
        &clique,
        &ks,
        seed,
    );
    Ok(())
}
