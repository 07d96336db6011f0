//! Node-removal experiments: random error and simultaneous degree-targeted
//! attack, measured along the way and averaged across replicas.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::metrics::{self, ClusteringConvention, MetricVector};
use crate::richclub::ThickeningMode;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Uniformly random removal order.
    Error,
    /// Descending initial degree, computed once before any removal.
    AttackSimultaneous,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Error => "error",
            Strategy::AttackSimultaneous => "attack",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "error" | "random" => Ok(Strategy::Error),
            "attack" | "attack_simultaneous" | "attack-simultaneous" => {
                Ok(Strategy::AttackSimultaneous)
            }
            other => Err(Error::Config(format!("unknown removal strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemovalPlan {
    pub strategy: Strategy,
    pub order: Vec<NodeId>,
    /// Measure after every `stride` removals (and always at the last one).
    pub stride: usize,
    pub stop_fraction: f64,
}

/// One measurement per removal up to 2000 nodes, about 500 measurements beyond.
pub fn default_stride(n: usize) -> usize {
    if n <= 2000 {
        1
    } else {
        n.div_ceil(500)
    }
}

/// Builds the removal order for `strategy`.
///
/// Attack ties are broken by a per-node key derived from `(seed, node id)`, so
/// two graphs that differ only in some links order their untouched nodes
/// identically whenever those nodes keep their degrees.
pub fn removal_order(g: &Graph, strategy: Strategy, seed_value: u64) -> Result<RemovalPlan> {
    if g.alive_count() < 2 {
        return Err(Error::Precondition(format!(
            "removal order needs at least 2 alive nodes, have {}",
            g.alive_count()
        )));
    }
    let mut order: Vec<NodeId> = g.alive_nodes().collect();
    match strategy {
        Strategy::Error => {
            let mut rng = seed::rng(seed::derive(seed_value, "error-order", &[]));
            order.shuffle(&mut rng);
        }
        Strategy::AttackSimultaneous => {
            order.sort_by_cached_key(|&v| {
                (
                    Reverse(g.degree(v)),
                    seed::derive(seed_value, "attack-tie", &[v as u64]),
                )
            });
        }
    }
    Ok(RemovalPlan {
        strategy,
        order,
        stride: default_stride(g.alive_count()),
        stop_fraction: 1.0,
    })
}

impl RemovalPlan {
    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_stop_fraction(mut self, stop_fraction: f64) -> Self {
        self.stop_fraction = stop_fraction;
        self
    }

    /// Number of removals the plan performs on a graph with `alive` nodes.
    pub fn removal_count(&self, alive: usize) -> usize {
        ((self.stop_fraction * alive as f64).round() as usize).min(alive)
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        if self.stride == 0 {
            return Err(Error::Precondition("stride must be at least 1".into()));
        }
        if !(self.stop_fraction > 0.0 && self.stop_fraction <= 1.0) {
            return Err(Error::Precondition(format!(
                "stop fraction must lie in (0, 1], got {}",
                self.stop_fraction
            )));
        }
        let mut seen = vec![false; g.n()];
        for &v in &self.order {
            if !g.is_alive(v) || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Precondition(format!(
                    "removal order is not a permutation of alive nodes (node {v})"
                )));
            }
        }
        if self.order.len() != g.alive_count() {
            return Err(Error::Precondition(format!(
                "removal order has {} nodes, graph has {} alive",
                self.order.len(),
                g.alive_count()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub removed_fraction: f64,
    pub metrics: MetricVector,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceMeta {
    pub scenario: String,
    pub mode: Option<ThickeningMode>,
    pub strategy: Option<Strategy>,
    /// One entry for a raw trace; every contributor for an averaged one.
    pub instance_seeds: Vec<u64>,
    pub replica_seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub points: Vec<TracePoint>,
    pub meta: TraceMeta,
}

/// Removes nodes from a copy of `g` in plan order, measuring the baseline,
/// every `stride`-th removal and the final removal. Undefined metrics are
/// recorded as gaps.
pub fn run_removal(g: &Graph, plan: &RemovalPlan, convention: ClusteringConvention) -> Result<Trace> {
    plan.validate(g)?;
    let mut work = g.clone();
    let total = work.alive_count();
    let steps = plan.removal_count(total);
    let mut points = Vec::with_capacity(steps / plan.stride + 2);
    points.push(TracePoint {
        removed_fraction: 0.0,
        metrics: metrics::snapshot(&work, convention),
    });
    for (i, &v) in plan.order[..steps].iter().enumerate() {
        work.remove_node(v)?;
        let removed = i + 1;
        if removed % plan.stride == 0 || removed == steps {
            points.push(TracePoint {
                removed_fraction: removed as f64 / total as f64,
                metrics: metrics::snapshot(&work, convention),
            });
        }
    }
    Ok(Trace {
        points,
        meta: TraceMeta {
            strategy: Some(plan.strategy),
            ..TraceMeta::default()
        },
    })
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, count) = values
        .flatten()
        .fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Pointwise mean of traces sharing one fraction grid. Gaps are skipped; a
/// point stays a gap only if every trace has a gap there.
pub fn average_traces(traces: &[Trace]) -> Result<Trace> {
    let first = traces
        .first()
        .ok_or_else(|| Error::GridMismatch("no traces to average".into()))?;
    for (i, t) in traces.iter().enumerate().skip(1) {
        if t.points.len() != first.points.len()
            || t
                .points
                .iter()
                .zip(&first.points)
                .any(|(a, b)| a.removed_fraction != b.removed_fraction)
        {
            return Err(Error::GridMismatch(format!(
                "trace {i} ({} points) does not match trace 0 ({} points)",
                t.points.len(),
                first.points.len()
            )));
        }
    }
    let points = (0..first.points.len())
        .map(|p| {
            let at = |f: fn(&MetricVector) -> Option<f64>| {
                mean_of(traces.iter().map(|t| f(&t.points[p].metrics)))
            };
            TracePoint {
                removed_fraction: first.points[p].removed_fraction,
                metrics: MetricVector {
                    diameter: at(|m| m.diameter),
                    apl: at(|m| m.apl),
                    efficiency: at(|m| m.efficiency),
                    clustering: at(|m| m.clustering),
                    degree_variance: at(|m| m.degree_variance),
                    alive_n: first.points[p].metrics.alive_n,
                    reachable_pair_fraction: at(|m| m.reachable_pair_fraction),
                },
            }
        })
        .collect();
    let meta = TraceMeta {
        scenario: first.meta.scenario.clone(),
        mode: first.meta.mode,
        strategy: first.meta.strategy,
        instance_seeds: traces.iter().flat_map(|t| t.meta.instance_seeds.clone()).collect(),
        replica_seeds: traces.iter().flat_map(|t| t.meta.replica_seeds.clone()).collect(),
    };
    Ok(Trace { points, meta })
}

/// Column order of trace CSV files.
pub const CSV_HEADER: &str = "scenario,mode,strategy,instance_seed,replica_seed,frac_removed,\
diameter,apl,efficiency,clustering,degree_variance,reachable_pair_fraction";

/// `%.6g`-style formatting: six significant digits, trailing zeros trimmed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig6).unwrap_or_default()
}

fn single_seed(seeds: &[u64]) -> String {
    match seeds {
        [s] => s.to_string(),
        _ => String::new(),
    }
}

impl Trace {
    /// CSV text including the header. Seed columns are filled only when the
    /// trace has exactly one contributing seed.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::with_capacity(64 * (self.points.len() + 1)));
        w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
        let mode = self.meta.mode.map(ThickeningMode::as_str).unwrap_or("");
        let strategy = self.meta.strategy.map(Strategy::as_str).unwrap_or("");
        let inst = single_seed(&self.meta.instance_seeds);
        let rep = single_seed(&self.meta.replica_seeds);
        for p in &self.points {
            let m = &p.metrics;
            let fields = [
                self.meta.scenario.clone(),
                mode.to_string(),
                strategy.to_string(),
                inst.clone(),
                rep.clone(),
                format_sig6(p.removed_fraction),
                opt(m.diameter),
                opt(m.apl),
                opt(m.efficiency),
                opt(m.clustering),
                opt(m.degree_variance),
                opt(m.reachable_pair_fraction),
            ];
            w.write_record(&fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{configuration_model, powerlaw_degree_sequence, GenConfig};
    use crate::richclub::{rich_nodes, thicken_core};

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn instance(n: usize, seed: u64) -> Graph {
        let seq = powerlaw_degree_sequence(&GenConfig {
            n,
            seed,
            ..GenConfig::default()
        })
        .unwrap();
        configuration_model(&seq, seed).unwrap().graph
    }

    #[test]
    fn attack_removes_star_center_first() {
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        for s in 0..10 {
            let plan = removal_order(&star, Strategy::AttackSimultaneous, s).unwrap();
            assert_eq!(plan.order[0], 0);
        }
    }

    #[test]
    fn error_order_is_seeded_permutation() {
        let g = instance(200, 1);
        let a = removal_order(&g, Strategy::Error, 5).unwrap();
        let b = removal_order(&g, Strategy::Error, 5).unwrap();
        let c = removal_order(&g, Strategy::Error, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.order, c.order);
        let mut sorted = a.order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..200).collect::<Vec<_>>());
    }

    #[test]
    fn attack_ties_are_shuffled_but_degree_sorted() {
        // degrees [5, 3, 3, 3, 1] plus filler nodes of degree 1..2
        let g = Graph::from_edges(
            9,
            [
                (0, 1), (0, 2), (0, 3), (0, 5), (0, 6),
                (1, 2), (1, 7),
                (2, 8),
                (3, 4), (3, 7),
            ],
        )
        .unwrap();
        assert_eq!(&g.degrees()[..5], &[5, 3, 3, 3, 1]);
        let mut arrangements = std::collections::BTreeSet::new();
        for s in 0..100 {
            let plan = removal_order(&g, Strategy::AttackSimultaneous, s).unwrap();
            assert_eq!(plan.order[0], 0);
            let mut mid = plan.order[1..4].to_vec();
            arrangements.insert(mid.clone());
            mid.sort_unstable();
            assert_eq!(mid, vec![1, 2, 3]);
            let degs: Vec<usize> = plan.order.iter().map(|&v| g.degree(v)).collect();
            assert!(degs.windows(2).all(|w| w[0] >= w[1]));
        }
        assert_eq!(arrangements.len(), 6);
    }

    #[test]
    fn k4_trace_grid() {
        let g = complete(4);
        let plan = removal_order(&g, Strategy::AttackSimultaneous, 0)
            .unwrap()
            .with_stride(1)
            .with_stop_fraction(0.75);
        let trace = run_removal(&g, &plan, ClusteringConvention::default()).unwrap();
        let fr: Vec<f64> = trace.points.iter().map(|p| p.removed_fraction).collect();
        assert_eq!(fr, vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(trace.points[3].metrics.alive_n, 1);
        assert_eq!(trace.points[3].metrics.diameter, None);
        assert_eq!(g, complete(4));
    }

    #[test]
    fn stride_and_full_length() {
        let g = instance(101, 2);
        let plan = removal_order(&g, Strategy::Error, 1).unwrap().with_stride(1);
        let t = run_removal(&g, &plan, ClusteringConvention::default()).unwrap();
        assert_eq!(t.points.len(), 102);
        let plan = plan.with_stride(10);
        let t = run_removal(&g, &plan, ClusteringConvention::default()).unwrap();
        // baseline, 10..100, and 101
        assert_eq!(t.points.len(), 12);
        assert_eq!(t.points.last().unwrap().removed_fraction, 1.0);
        assert!(t.points.windows(2).all(|w| w[0].removed_fraction < w[1].removed_fraction));
    }

    #[test]
    fn efficiency_never_rises_on_cycle() {
        let cycle = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        for s in 0..20 {
            let plan = removal_order(&cycle, Strategy::Error, s).unwrap().with_stride(1);
            let t = run_removal(&cycle, &plan, ClusteringConvention::default()).unwrap();
            let eff: Vec<f64> = t.points.iter().filter_map(|p| p.metrics.efficiency).collect();
            assert!(eff.windows(2).all(|w| w[1] <= w[0]), "{eff:?}");
        }
    }

    #[test]
    fn bad_plans_are_rejected() {
        let g = complete(4);
        let plan = removal_order(&g, Strategy::Error, 0).unwrap();
        let mut dup = plan.clone();
        dup.order[1] = dup.order[0];
        assert!(run_removal(&g, &dup, ClusteringConvention::default()).is_err());
        assert!(run_removal(&g, &plan.clone().with_stride(0), ClusteringConvention::default()).is_err());
        assert!(run_removal(&g, &plan.with_stop_fraction(0.0), ClusteringConvention::default()).is_err());
        assert!(removal_order(&Graph::new(1), Strategy::Error, 0).is_err());
    }

    #[test]
    fn residual_graphs_coincide_after_core_is_gone() {
        let base = instance(400, 9);
        let rs = rich_nodes(&base, 0.02, 9).unwrap();
        let mut dense = base.clone();
        thicken_core(&mut dense, &rs, 1.0, 9).unwrap();
        let plan_a = removal_order(&base, Strategy::AttackSimultaneous, 3).unwrap().with_stride(1);
        let plan_b = removal_order(&dense, Strategy::AttackSimultaneous, 3).unwrap().with_stride(1);
        let gone = |plan: &RemovalPlan| {
            plan.order.iter().rposition(|v| rs.contains(*v)).unwrap() + 1
        };
        let after = gone(&plan_a).max(gone(&plan_b));
        assert_eq!(plan_a.order[after..], plan_b.order[after..]);
        let ta = run_removal(&base, &plan_a, ClusteringConvention::default()).unwrap();
        let tb = run_removal(&dense, &plan_b, ClusteringConvention::default()).unwrap();
        assert_ne!(ta.points[0], tb.points[0]);
        assert_eq!(ta.points[after..], tb.points[after..]);
    }

    fn trace_with(eff: &[Option<f64>]) -> Trace {
        Trace {
            points: eff
                .iter()
                .enumerate()
                .map(|(i, &e)| TracePoint {
                    removed_fraction: i as f64 / 10.0,
                    metrics: MetricVector {
                        efficiency: e,
                        ..MetricVector::default()
                    },
                })
                .collect(),
            meta: TraceMeta::default(),
        }
    }

    #[test]
    fn averaging_examples() {
        let t = trace_with(&[Some(0.5), Some(0.25)]);
        assert_eq!(average_traces(std::slice::from_ref(&t)).unwrap().points, t.points);

        let avg = average_traces(&[trace_with(&[Some(0.6)]), trace_with(&[Some(0.0)])]).unwrap();
        assert_eq!(avg.points[0].metrics.efficiency, Some(0.3));

        let avg = average_traces(&[trace_with(&[None]), trace_with(&[Some(0.4)])]).unwrap();
        assert_eq!(avg.points[0].metrics.efficiency, Some(0.4));
        let avg = average_traces(&[trace_with(&[None]), trace_with(&[None])]).unwrap();
        assert_eq!(avg.points[0].metrics.efficiency, None);

        assert!(matches!(
            average_traces(&[trace_with(&[Some(1.0)]), trace_with(&[Some(1.0), Some(1.0)])]),
            Err(Error::GridMismatch(_))
        ));
        assert!(average_traces(&[]).is_err());
    }

    #[test]
    fn replica_mean_stays_in_envelope() {
        let g = instance(150, 4);
        let traces: Vec<Trace> = (0..10)
            .map(|r| {
                let plan = removal_order(&g, Strategy::Error, r).unwrap().with_stride(5);
                run_removal(&g, &plan, ClusteringConvention::default()).unwrap()
            })
            .collect();
        let avg = average_traces(&traces).unwrap();
        for (p, point) in avg.points.iter().enumerate() {
            let vals: Vec<f64> = traces.iter().filter_map(|t| t.points[p].metrics.efficiency).collect();
            if let Some(mean) = point.metrics.efficiency {
                let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                assert!(lo - 1e-15 <= mean && mean <= hi + 1e-15);
            }
        }
    }

    #[test]
    fn error_removes_rich_nodes_at_their_share() {
        // by the time half the nodes are gone, about half the rich set is gone
        let g = instance(1000, 8);
        let rs = rich_nodes(&g, 0.01, 8).unwrap();
        let reps = 200;
        let mut total = 0usize;
        for r in 0..reps {
            let plan = removal_order(&g, Strategy::Error, r).unwrap();
            total += plan.order[..500].iter().filter(|v| rs.contains(**v)).count();
        }
        let trials = (reps as usize * rs.len()) as f64;
        let share = total as f64 / trials;
        // 4 standard deviations of a binomial proportion at p = 0.5
        let tol = 4.0 * (0.25 / trials).sqrt();
        assert!((share - 0.5).abs() <= tol, "share {share}");
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(4.0 / 3.0), "1.33333");
        assert_eq!(format_sig6(5.0 / 6.0), "0.833333");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(0.0001234567), "0.000123457");
        assert_eq!(format_sig6(0.00001234567), "1.23457e-05");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(0.01), "0.01");
        assert_eq!(format_sig6(99999.95), "99999.9");
    }

    #[test]
    fn csv_has_schema_and_nulls() {
        let mut t = trace_with(&[Some(0.5), None]);
        t.meta.scenario = "s1".into();
        t.meta.mode = Some(ThickeningMode::Core);
        t.meta.strategy = Some(Strategy::Error);
        t.meta.instance_seeds = vec![7];
        t.meta.replica_seeds = vec![9];
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "s1,core,error,7,9,0,,,0.5,,,");
        assert_eq!(lines[2], "s1,core,error,7,9,0.1,,,,,,");
    }
}
