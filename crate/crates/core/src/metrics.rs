//! Global network measures: diameter, average path length, efficiency,
//! mean local clustering and degree variance.
//!
//! Disconnection conventions:
//! - diameter is the largest *finite* distance (0 when nothing is reachable);
//! - average path length averages reachable ordered pairs only, and the
//!   reachable share of alive ordered pairs is reported alongside;
//! - efficiency counts unreachable pairs as `1/inf = 0` and normalizes by
//!   `n(n-1)` over the graph's full node capacity, so removed nodes count as
//!   unreachable and efficiency can only fall as nodes are removed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// How nodes of degree < 2 enter the mean clustering coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClusteringConvention {
    /// `C_i = 0` and the node counts in the denominator.
    #[default]
    ZeroForLowDegree,
    /// The node is left out of the average.
    ExcludeLowDegree,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricVector {
    pub diameter: Option<f64>,
    pub apl: Option<f64>,
    pub efficiency: Option<f64>,
    pub clustering: Option<f64>,
    pub degree_variance: Option<f64>,
    pub alive_n: usize,
    pub reachable_pair_fraction: Option<f64>,
}

/// Ordered-pair shortest-path histogram over alive nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStats {
    /// `hist[d]` = number of ordered alive pairs at distance `d` (index 0 unused).
    pub hist: Vec<u64>,
    pub alive: usize,
    pub capacity: usize,
}

impl PathStats {
    pub fn reachable_pairs(&self) -> u64 {
        self.hist.iter().skip(1).sum()
    }

    fn alive_pairs(&self) -> u64 {
        let a = self.alive as u64;
        a * a.saturating_sub(1)
    }

    fn require_pairs(&self) -> Result<()> {
        if self.alive < 2 {
            return Err(Error::Precondition(format!(
                "need at least 2 alive nodes, have {}",
                self.alive
            )));
        }
        Ok(())
    }

    pub fn diameter(&self) -> u32 {
        self.hist
            .iter()
            .rposition(|&c| c > 0)
            .filter(|&d| d > 0)
            .unwrap_or(0) as u32
    }

    pub fn average_path_length(&self) -> Option<f64> {
        let reach = self.reachable_pairs();
        if reach == 0 {
            return None;
        }
        let total: u64 = self
            .hist
            .iter()
            .enumerate()
            .map(|(d, &c)| d as u64 * c)
            .sum();
        Some(total as f64 / reach as f64)
    }

    pub fn efficiency(&self) -> f64 {
        let n = self.capacity as f64;
        let inv: f64 = self
            .hist
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, &c)| c as f64 / d as f64)
            .sum();
        inv / (n * (n - 1.0))
    }

    pub fn reachable_pair_fraction(&self) -> Option<f64> {
        match self.alive_pairs() {
            0 => None,
            p => Some(self.reachable_pairs() as f64 / p as f64),
        }
    }
}

/// Compact adjacency over alive nodes only.
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    fn build(g: &Graph) -> Self {
        let mut index = vec![u32::MAX; g.n()];
        for (k, v) in g.alive_nodes().enumerate() {
            index[v] = k as u32;
        }
        let mut offsets = Vec::with_capacity(g.alive_count() + 1);
        let mut targets = Vec::with_capacity(2 * g.link_count());
        offsets.push(0);
        for v in g.alive_nodes() {
            targets.extend(g.neighbors(v).iter().map(|&u| index[u]));
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn bfs_into(&self, source: u32, dist: &mut [u32], queue: &mut Vec<u32>, hist: &mut Vec<u64>) {
        queue.clear();
        queue.push(source);
        dist[source as usize] = 0;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            let next = dist[u] + 1;
            let (lo, hi) = (self.offsets[u] as usize, self.offsets[u + 1] as usize);
            for &v in &self.targets[lo..hi] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = next;
                    queue.push(v);
                    let d = next as usize;
                    if hist.len() <= d {
                        hist.resize(d + 1, 0);
                    }
                    hist[d] += 1;
                }
            }
        }
        for &v in queue.iter() {
            dist[v as usize] = u32::MAX;
        }
    }
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// One BFS per alive source, run in parallel. Counts are integers, so the
/// result does not depend on how the work is split across threads.
pub fn path_stats(g: &Graph) -> PathStats {
    let csr = Csr::build(g);
    let k = csr.len();
    const CHUNK: usize = 16;
    let hist = (0..k.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut dist = vec![u32::MAX; k];
            let mut queue = Vec::with_capacity(k);
            let mut hist = vec![0u64; 1];
            for s in c * CHUNK..((c + 1) * CHUNK).min(k) {
                csr.bfs_into(s as u32, &mut dist, &mut queue, &mut hist);
            }
            hist
        })
        .reduce(|| vec![0u64; 1], merge);
    PathStats {
        hist,
        alive: g.alive_count(),
        capacity: g.n(),
    }
}

pub fn diameter(g: &Graph) -> Result<u32> {
    let s = path_stats(g);
    s.require_pairs()?;
    Ok(s.diameter())
}

/// Mean distance over reachable ordered pairs, with the reachable share of all
/// alive ordered pairs.
pub fn average_path_length(g: &Graph) -> Result<(f64, f64)> {
    let s = path_stats(g);
    s.require_pairs()?;
    let apl = s
        .average_path_length()
        .ok_or_else(|| Error::Undefined("no reachable pair for average path length".into()))?;
    Ok((apl, s.reachable_pair_fraction().unwrap_or(0.0)))
}

pub fn global_efficiency(g: &Graph) -> Result<f64> {
    let s = path_stats(g);
    s.require_pairs()?;
    Ok(s.efficiency())
}

/// Links among the neighbors of each node (0 for removed nodes).
pub fn neighbor_links(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|i| {
            let nb = g.neighbors(i);
            let twice: usize = nb
                .iter()
                .map(|&j| sorted_intersection_len(nb, g.neighbors(j)))
                .sum();
            (twice / 2) as u64
        })
        .collect()
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

pub fn triangle_count(g: &Graph) -> u64 {
    neighbor_links(g).iter().sum::<u64>() / 3
}

pub fn global_clustering(g: &Graph) -> Result<f64> {
    global_clustering_with(g, ClusteringConvention::default())
}

pub fn global_clustering_with(g: &Graph, convention: ClusteringConvention) -> Result<f64> {
    if g.alive_count() == 0 {
        return Err(Error::Precondition("clustering of a graph with no alive nodes".into()));
    }
    let tri = neighbor_links(g);
    let mut total = 0.0;
    let mut counted = 0usize;
    for i in g.alive_nodes() {
        let k = g.degree(i);
        if k >= 2 {
            total += 2.0 * tri[i] as f64 / (k * (k - 1)) as f64;
            counted += 1;
        } else if convention == ClusteringConvention::ZeroForLowDegree {
            counted += 1;
        }
    }
    Ok(if counted == 0 { 0.0 } else { total / counted as f64 })
}

/// Population variance of alive-node degrees.
pub fn degree_variance(g: &Graph) -> Result<f64> {
    let n = g.alive_count() as u128;
    if n == 0 {
        return Err(Error::Precondition("degree variance of a graph with no alive nodes".into()));
    }
    let (s1, s2) = g.alive_nodes().fold((0u128, 0u128), |(a, b), i| {
        let k = g.degree(i) as u128;
        (a + k, b + k * k)
    });
    // exact integer numerator keeps the value independent of summation order
    Ok((n * s2 - s1 * s1) as f64 / (n * n) as f64)
}

/// Every metric at once; undefined values are left as `None` instead of failing.
pub fn snapshot(g: &Graph, convention: ClusteringConvention) -> MetricVector {
    let alive_n = g.alive_count();
    let (diameter, apl, efficiency, reachable_pair_fraction) = if alive_n >= 2 {
        let s = path_stats(g);
        (
            Some(s.diameter() as f64),
            s.average_path_length(),
            Some(s.efficiency()),
            s.reachable_pair_fraction(),
        )
    } else {
        (None, None, None, None)
    };
    MetricVector {
        diameter,
        apl,
        efficiency,
        clustering: global_clustering_with(g, convention).ok(),
        degree_variance: degree_variance(g).ok(),
        alive_n,
        reachable_pair_fraction,
    }
}

pub fn measure_all(g: &Graph) -> Result<MetricVector> {
    measure_all_with(g, ClusteringConvention::default())
}

pub fn measure_all_with(g: &Graph, convention: ClusteringConvention) -> Result<MetricVector> {
    if g.alive_count() < 2 {
        return Err(Error::Precondition(format!(
            "need at least 2 alive nodes, have {}",
            g.alive_count()
        )));
    }
    Ok(snapshot(g, convention))
}
