//! Synthetic scale-free inputs: power-law degree sequences, configuration
//! model realizations and degree-preserving double-edge swaps.

use std::fmt::Write as _;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::seed;

/// Relative tolerance on the realized mean degree.
pub const MEAN_TOLERANCE: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub target_mean_degree: f64,
    pub gamma: f64,
    pub k_min: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 5000,
            target_mean_degree: 6.0,
            gamma: 3.2,
            k_min: 1,
            seed: 1,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.gamma <= 2.0 || !self.gamma.is_finite() {
            return Err(Error::Config(format!("gamma must exceed 2, got {}", self.gamma)));
        }
        if self.k_min < 1 {
            return Err(Error::Config("k_min must be at least 1".into()));
        }
        if self.target_mean_degree <= 0.0 || !self.target_mean_degree.is_finite() {
            return Err(Error::Config(format!(
                "target mean degree must be positive, got {}",
                self.target_mean_degree
            )));
        }
        Ok(())
    }
}

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() as f64 / self.len() as f64
    }

    /// Erdős–Gallai test for realizability as a simple graph.
    pub fn is_graphical(&self) -> bool {
        let n = self.len();
        if self.sum() % 2 == 1 || self.degrees.iter().any(|&d| d >= n) {
            return false;
        }
        let mut d = self.degrees.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = vec![0usize; n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] + d[i];
        }
        for k in 1..=n {
            let lhs = prefix[k];
            // nodes with degree >= k form a prefix of the descending order
            let at_least_k = d.partition_point(|&x| x >= k);
            let capped = k * at_least_k.saturating_sub(k);
            let rest = prefix[n] - prefix[k.max(at_least_k)];
            if lhs > k * (k - 1) + capped + rest {
                return false;
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for d in &self.degrees {
            let _ = writeln!(s, "{d}");
        }
        s
    }

    /// Reads one integer per line; blank lines and `#` comments are skipped.
    pub fn read<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut degrees = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(source_name, e))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            degrees.push(t.parse().map_err(|e| Error::Parse {
                path: source_name.to_string(),
                line: idx + 1,
                reason: format!("bad degree {t:?}: {e}"),
            })?);
        }
        Ok(DegreeSequence { degrees })
    }
}

/// Draws a power-law degree sequence with mean within [`MEAN_TOLERANCE`] of the target.
///
/// Each node gets a uniform `u` once; its degree is `floor(x * u^(-1/(gamma-1)))`
/// capped at `n - 1`, a discretized Pareto tail with scale `x`. The scale starts
/// at `k_min` and is raised by bisection until the mean hits the target. Because
/// the uniforms are fixed the mean is monotone in `x`, and the result is a pure
/// function of the config.
pub fn powerlaw_degree_sequence(cfg: &GenConfig) -> Result<DegreeSequence> {
    cfg.validate()?;
    let n = cfg.n;
    let mut rng = seed::rng(seed::derive(cfg.seed, "degree-sequence", &[]));
    let tails: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = 1.0 - rng.gen::<f64>();
            u.powf(-1.0 / (cfg.gamma - 1.0))
        })
        .collect();
    let cap = (n - 1) as f64;
    let realize = |scale: f64| -> Vec<usize> {
        tails
            .iter()
            .map(|t| (scale * t).floor().min(cap) as usize)
            .collect()
    };
    let mean_of = |d: &[usize]| d.iter().sum::<usize>() as f64 / n as f64;
    let target = cfg.target_mean_degree;
    let within = |m: f64| (m - target).abs() <= MEAN_TOLERANCE * target;

    let mut lo = cfg.k_min as f64;
    let mut degrees = realize(lo);
    let lo_mean = mean_of(&degrees);
    if lo_mean > target * (1.0 + MEAN_TOLERANCE) {
        return Err(Error::Config(format!(
            "mean degree {target} unreachable: k_min = {} already gives {lo_mean:.3}",
            cfg.k_min
        )));
    }
    if !within(lo_mean) {
        let mut hi = cap.max(lo);
        if mean_of(&realize(hi)) < target * (1.0 - MEAN_TOLERANCE) {
            return Err(Error::Config(format!(
                "mean degree {target} unreachable with n = {n}"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mean_of(&realize(mid)) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let below = realize(lo);
        let above = realize(hi);
        degrees = if (mean_of(&above) - target).abs() <= (mean_of(&below) - target).abs() {
            above
        } else {
            below
        };
        if !within(mean_of(&degrees)) {
            return Err(Error::Config(format!(
                "cannot reach mean degree {target} within {}% at n = {n}",
                MEAN_TOLERANCE * 100.0
            )));
        }
    }

    if degrees.iter().sum::<usize>() % 2 == 1 {
        let open: Vec<usize> = (0..n).filter(|&i| degrees[i] < n - 1).collect();
        let &pick = open
            .choose(&mut rng)
            .ok_or_else(|| Error::Config("cannot repair degree parity".into()))?;
        degrees[pick] += 1;
    }
    Ok(DegreeSequence { degrees })
}

/// A configuration-model graph and how far it strays from its input sequence.
#[derive(Clone, Debug)]
pub struct Realization {
    pub graph: Graph,
    /// Stubs that could not be matched into a simple graph and were discarded.
    pub erased_stubs: usize,
}

impl Realization {
    pub fn erased_fraction(&self, seq: &DegreeSequence) -> f64 {
        self.erased_stubs as f64 / seq.sum().max(1) as f64
    }
}

const REMATCH_ROUNDS: usize = 50;
const REPAIR_ATTEMPTS: usize = 200;

/// Erased configuration model.
///
/// Stubs are shuffled and paired. Pairs forming a self-loop or a parallel link
/// go back to a pool that is reshuffled and re-paired for a bounded number of
/// rounds; a pair still stuck after that is resolved by splicing it into a
/// random existing link `(a, b)` as `(u, a), (v, b)` when that keeps the graph
/// simple. Whatever is left is erased.
pub fn configuration_model(seq: &DegreeSequence, seed_value: u64) -> Result<Realization> {
    if !seq.is_graphical() {
        return Err(Error::NotGraphical(format!(
            "{} nodes, degree sum {}",
            seq.len(),
            seq.sum()
        )));
    }
    let n = seq.len();
    let mut rng = seed::rng(seed::derive(seed_value, "configuration-model", &[]));
    let mut g = Graph::new(n);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(seq.sum() / 2);
    let mut pool: Vec<NodeId> = seq
        .degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat_n(i, d))
        .collect();

    for _ in 0..REMATCH_ROUNDS {
        if pool.is_empty() {
            break;
        }
        pool.shuffle(&mut rng);
        let mut rest = Vec::new();
        for pair in pool.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u != v && g.add_edge(u, v)? {
                edges.push((u, v));
            } else {
                rest.extend_from_slice(pair);
            }
        }
        let progressed = rest.len() < pool.len();
        pool = rest;
        if !progressed && pool.len() <= 2 {
            break;
        }
    }

    let mut erased = 0;
    pool.shuffle(&mut rng);
    for pair in pool.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        let mut placed = false;
        if u != v && g.add_edge(u, v)? {
            edges.push((u, v));
            placed = true;
        }
        for _ in 0..REPAIR_ATTEMPTS {
            if placed || edges.is_empty() {
                break;
            }
            let idx = rng.gen_range(0..edges.len());
            let (mut a, mut b) = edges[idx];
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut a, &mut b);
            }
            if a == u || a == v || b == u || b == v || g.has_edge(u, a) || g.has_edge(v, b) {
                continue;
            }
            g.remove_edge(a, b)?;
            g.add_edge(u, a)?;
            g.add_edge(v, b)?;
            edges[idx] = (u, a);
            edges.push((v, b));
            placed = true;
        }
        if !placed {
            erased += 2;
        }
    }
    Ok(Realization {
        graph: g,
        erased_stubs: erased,
    })
}

#[derive(Clone, Debug)]
pub struct RewireOutcome {
    pub graph: Graph,
    pub accepted: usize,
    pub rejected: usize,
}

/// Attempts `swaps` double-edge swaps `(a,b),(c,d) -> (a,d),(c,b)`, rejecting
/// any that would create a self-loop or a parallel link.
pub fn degree_preserving_rewire(g: &Graph, swaps: usize, seed_value: u64) -> RewireOutcome {
    let mut graph = g.clone();
    let mut edges: Vec<(NodeId, NodeId)> = graph.edges().collect();
    let mut rng = seed::rng(seed::derive(seed_value, "rewire", &[]));
    let mut accepted = 0;
    if edges.len() < 2 {
        return RewireOutcome {
            graph,
            accepted,
            rejected: swaps,
        };
    }
    for _ in 0..swaps {
        let e1 = rng.gen_range(0..edges.len());
        let mut e2 = rng.gen_range(0..edges.len() - 1);
        if e2 >= e1 {
            e2 += 1;
        }
        let (a, b) = edges[e1];
        let (mut c, mut d) = edges[e2];
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b || graph.has_edge(a, d) || graph.has_edge(c, b) {
            continue;
        }
        // endpoints are alive and distinct, so none of these can fail
        graph.remove_edge(a, b).expect("live link");
        graph.remove_edge(c, d).expect("live link");
        graph.add_edge(a, d).expect("checked absent");
        graph.add_edge(c, b).expect("checked absent");
        edges[e1] = (a, d);
        edges[e2] = (c, b);
        accepted += 1;
    }
    RewireOutcome {
        graph,
        accepted,
        rejected: swaps - accepted,
    }
}
