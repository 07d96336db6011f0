//! The five global measures on small hand-checkable graphs and on an edge list.
//!
//!     cargo run --release --example measure_metrics -- [graph.edges]

use std::io::BufReader;

use richclub_sim::metrics::{self, ClusteringConvention};
use richclub_sim::Graph;

fn show(name: &str, g: &Graph) {
    let m = metrics::snapshot(g, ClusteringConvention::ZeroForLowDegree);
    let f = |x: Option<f64>| x.map_or("undefined".to_string(), |v| format!("{v:.6}"));
    println!(
        "{name:<22} D={:<10} APL={:<10} E={:<10} C={:<10} var={:<10} reachable={}",
        f(m.diameter),
        f(m.apl),
        f(m.efficiency),
        f(m.clustering),
        f(m.degree_variance),
        f(m.reachable_pair_fraction)
    );
}

fn main() -> richclub_sim::Result<()> {
    show("path on 3 nodes", &Graph::from_edges(3, [(0, 1), (1, 2)])?);
    show("triangle", &Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])?);
    show("star on 5 nodes", &Graph::from_edges(5, (1..5).map(|i| (0, i)))?);
    show("5-cycle", &Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5)))?);
    show("two disjoint edges", &Graph::from_edges(4, [(0, 1), (2, 3)])?);

    // removing a node keeps the node capacity, so efficiency can only drop
    let mut cycle = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5)))?;
    cycle.remove_node(0)?;
    show("5-cycle minus a node", &cycle);

    if let Some(path) = std::env::args().nth(1) {
        let file = std::fs::File::open(&path).expect("open edge list");
        let g = Graph::read_edge_list(BufReader::new(file), &path)?;
        println!();
        show(&path, &g);
        println!("triangles: {}", metrics::triangle_count(&g));
    }
    Ok(())
}
