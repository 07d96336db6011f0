//! Rich set identification, core/periphery thickening and rich-club coefficients.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::netgen::degree_preserving_rewire;
use crate::seed;

pub const DEFAULT_RICH_FRACTION: f64 = 0.01;

/// Below this share of absent pairs, sampling enumerates instead of rejecting.
const REJECTION_MIN_ABSENT_SHARE: f64 = 0.05;

fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// The top-degree nodes of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct RichSet {
    /// Sorted ascending.
    pub members: Vec<NodeId>,
    pub fraction: f64,
    pub internal_links: usize,
}

impl RichSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn max_links(&self) -> usize {
        binom2(self.len())
    }

    pub fn density(&self) -> f64 {
        self.internal_links as f64 / self.max_links() as f64
    }

    /// Re-counts `internal_links` against the current state of `g`.
    pub fn refresh(&mut self, g: &Graph) {
        self.internal_links = g.links_within_sorted(&self.members);
    }
}

/// Picks the `round(fraction * N)` highest-degree alive nodes. Nodes tied at
/// the cutoff degree are chosen uniformly at random from `seed`.
pub fn rich_nodes(g: &Graph, fraction: f64, seed_value: u64) -> Result<RichSet> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Precondition(format!(
            "rich fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let count = (fraction * g.alive_count() as f64).round() as usize;
    if count < 2 {
        return Err(Error::Precondition(format!(
            "rich fraction {fraction} of {} nodes selects {count} < 2 nodes",
            g.alive_count()
        )));
    }
    let mut rng = seed::rng(seed::derive(seed_value, "rich-set", &[]));
    let mut nodes: Vec<NodeId> = g.alive_nodes().collect();
    nodes.shuffle(&mut rng);
    nodes.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    nodes.truncate(count);
    nodes.sort_unstable();
    let internal_links = g.links_within_sorted(&nodes);
    Ok(RichSet {
        members: nodes,
        fraction,
        internal_links,
    })
}

/// Density of the subgraph induced by the rich set, counted on `g` as it is now.
pub fn core_density(g: &Graph, rs: &RichSet) -> f64 {
    g.links_within_sorted(&rs.members) as f64 / rs.max_links() as f64
}

/// Signed number of links to add (positive) or remove (negative) so the core
/// reaches `target_density`.
pub fn links_for_target(rs: &RichSet, target_density: f64) -> i64 {
    let wanted = (target_density * rs.max_links() as f64).round() as i64;
    wanted - rs.internal_links as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThickeningMode {
    Core,
    Periphery,
}

impl ThickeningMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ThickeningMode::Core => "core",
            ThickeningMode::Periphery => "periphery",
        }
    }
}

impl fmt::Display for ThickeningMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ThickeningMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "core" => Ok(ThickeningMode::Core),
            "periphery" => Ok(ThickeningMode::Periphery),
            other => Err(Error::Config(format!("unknown thickening mode {other:?}"))),
        }
    }
}

/// Core density a scenario asks for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DensityTarget {
    /// Leave the network as generated.
    Default,
    Density(f64),
}

/// One row of the scenario table.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub label: String,
    pub target: DensityTarget,
}

impl ScenarioSpec {
    pub fn new(label: impl Into<String>, target: DensityTarget) -> Self {
        ScenarioSpec {
            label: label.into(),
            target,
        }
    }

    /// Link budget on an instance whose rich set is `rs`. The same signed budget
    /// is spent in the core or in the periphery depending on the mode.
    pub fn budget(&self, rs: &RichSet) -> i64 {
        match self.target {
            DensityTarget::Default => 0,
            DensityTarget::Density(d) => links_for_target(rs, d),
        }
    }

    pub fn target_density(&self) -> Option<f64> {
        match self.target {
            DensityTarget::Default => None,
            DensityTarget::Density(d) => Some(d),
        }
    }
}

/// What a thickening step did to a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationReport {
    pub mode: ThickeningMode,
    pub budget: i64,
    pub added: usize,
    pub removed: usize,
    /// Core density after the mutation.
    pub achieved_density: f64,
}

/// Draws `count` distinct absent pairs among `nodes`, uniformly, and adds them to `g`.
fn add_random_pairs(
    g: &mut Graph,
    nodes: &[NodeId],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    if count == 0 {
        return Ok(0);
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let total = binom2(sorted.len());
    let present = g.links_within_sorted(&sorted);
    let absent = total - present;
    if count > absent {
        return Err(Error::Capacity {
            requested: count,
            available: absent,
        });
    }
    let share_left = (absent - count) as f64 / total as f64;
    if share_left >= REJECTION_MIN_ABSENT_SHARE {
        let mut added = 0;
        while added < count {
            let a = rng.gen_range(0..sorted.len());
            let b = rng.gen_range(0..sorted.len());
            if a != b && g.add_edge(sorted[a], sorted[b])? {
                added += 1;
            }
        }
    } else {
        let mut candidates = Vec::with_capacity(absent);
        for (x, &u) in sorted.iter().enumerate() {
            for &v in &sorted[x + 1..] {
                if !g.has_edge(u, v) {
                    candidates.push((u, v));
                }
            }
        }
        let (chosen, _) = candidates.partial_shuffle(rng, count);
        for &(u, v) in chosen.iter() {
            g.add_edge(u, v)?;
        }
    }
    Ok(count)
}

/// Removes `count` links chosen uniformly among those with both ends in `nodes`.
fn remove_random_links(
    g: &mut Graph,
    nodes: &[NodeId],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    if count == 0 {
        return Ok(0);
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let mut present = Vec::new();
    for &u in &sorted {
        for &v in g.neighbors(u) {
            if v > u && sorted.binary_search(&v).is_ok() {
                present.push((u, v));
            }
        }
    }
    if count > present.len() {
        return Err(Error::Capacity {
            requested: count,
            available: present.len(),
        });
    }
    let (chosen, _) = present.partial_shuffle(rng, count);
    for &(u, v) in chosen.iter() {
        g.remove_edge(u, v)?;
    }
    Ok(count)
}

/// Adds or removes links among rich-set members until the core density is
/// `target_density` (to the nearest link). Links with a periphery endpoint
/// are never touched.
pub fn thicken_core(
    g: &mut Graph,
    rs: &RichSet,
    target_density: f64,
    seed_value: u64,
) -> Result<MutationReport> {
    if !(0.0..=1.0).contains(&target_density) {
        return Err(Error::Precondition(format!(
            "target density must lie in [0, 1], got {target_density}"
        )));
    }
    let mut current = rs.clone();
    current.refresh(g);
    let budget = links_for_target(&current, target_density);
    let mut rng = seed::rng(seed::derive(seed_value, "thicken-core", &[]));
    let (added, removed) = if budget >= 0 {
        (add_random_pairs(g, &rs.members, budget as usize, &mut rng)?, 0)
    } else {
        (0, remove_random_links(g, &rs.members, budget.unsigned_abs() as usize, &mut rng)?)
    };
    Ok(MutationReport {
        mode: ThickeningMode::Core,
        budget,
        added,
        removed,
        achieved_density: core_density(g, rs),
    })
}

/// Spends `budget` links on pairs with both endpoints outside the rich set:
/// positive budgets add absent pairs, negative budgets remove existing links.
/// The core's induced subgraph and every rich node's degree are unchanged.
pub fn thicken_periphery(
    g: &mut Graph,
    rs: &RichSet,
    budget: i64,
    seed_value: u64,
) -> Result<MutationReport> {
    let periphery: Vec<NodeId> = g.alive_nodes().filter(|&v| !rs.contains(v)).collect();
    let mut rng = seed::rng(seed::derive(seed_value, "thicken-periphery", &[]));
    let (added, removed) = if budget >= 0 {
        (add_random_pairs(g, &periphery, budget as usize, &mut rng)?, 0)
    } else {
        (0, remove_random_links(g, &periphery, budget.unsigned_abs() as usize, &mut rng)?)
    };
    Ok(MutationReport {
        mode: ThickeningMode::Periphery,
        budget,
        added,
        removed,
        achieved_density: core_density(g, rs),
    })
}

/// Applies a scenario in the given mode. The budget is computed from `rs`
/// on this instance.
pub fn apply_scenario(
    g: &mut Graph,
    rs: &RichSet,
    scenario: &ScenarioSpec,
    mode: ThickeningMode,
    seed_value: u64,
) -> Result<MutationReport> {
    match (scenario.target, mode) {
        (DensityTarget::Default, _) => Ok(MutationReport {
            mode,
            budget: 0,
            added: 0,
            removed: 0,
            achieved_density: core_density(g, rs),
        }),
        (DensityTarget::Density(d), ThickeningMode::Core) => thicken_core(g, rs, d, seed_value),
        (DensityTarget::Density(_), ThickeningMode::Periphery) => {
            thicken_periphery(g, rs, scenario.budget(rs), seed_value)
        }
    }
}

/// `phi(k)`: realized share of possible links among nodes of degree > `k`.
pub fn rich_club_coefficient(g: &Graph, k: usize) -> Result<f64> {
    let rich: Vec<NodeId> = g.alive_nodes().filter(|&v| g.degree(v) > k).collect();
    if rich.len() < 2 {
        return Err(Error::Undefined(format!(
            "rich-club coefficient at k = {k}: only {} node(s) with degree > k",
            rich.len()
        )));
    }
    let e = g.links_within_sorted(&rich);
    Ok(2.0 * e as f64 / (rich.len() * (rich.len() - 1)) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NullModelConfig {
    pub samples: usize,
    /// Attempted swaps per link for each randomized sample.
    pub swaps_per_link: usize,
}

impl Default for NullModelConfig {
    fn default() -> Self {
        NullModelConfig {
            samples: 100,
            swaps_per_link: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedRichClub {
    pub rho: f64,
    pub phi: f64,
    pub random_mean: f64,
    /// Sample standard deviation of the randomized coefficients (0 for one sample).
    pub random_std: f64,
}

/// `rho(k) = phi(k) / mean(phi_rand(k))` over degree-preserving rewirings of `g`.
pub fn normalized_rich_club(
    g: &Graph,
    k: usize,
    null: &NullModelConfig,
    seed_value: u64,
) -> Result<NormalizedRichClub> {
    if null.samples == 0 {
        return Err(Error::Precondition("null model needs at least one sample".into()));
    }
    let phi = rich_club_coefficient(g, k)?;
    let swaps = null.swaps_per_link * g.link_count();
    let randomized: Vec<f64> = (0..null.samples as u64)
        .into_par_iter()
        .map(|i| {
            let sample = degree_preserving_rewire(g, swaps, seed::derive(seed_value, "null-model", &[i]));
            rich_club_coefficient(&sample.graph, k)
        })
        .collect::<Result<_>>()?;
    let count = randomized.len() as f64;
    let mean = randomized.iter().sum::<f64>() / count;
    if mean == 0.0 {
        return Err(Error::Undefined(format!(
            "randomized rich-club coefficient at k = {k} is zero"
        )));
    }
    let random_std = if randomized.len() > 1 {
        (randomized.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(NormalizedRichClub {
        rho: phi / mean,
        phi,
        random_mean: mean,
        random_std,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;
    use crate::netgen::{configuration_model, powerlaw_degree_sequence, GenConfig};
    use proptest::prelude::*;
    use rand::Rng;

    fn instance(n: usize, seed: u64) -> Graph {
        let seq = powerlaw_degree_sequence(&GenConfig {
            n,
            seed,
            ..GenConfig::default()
        })
        .unwrap();
        configuration_model(&seq, seed).unwrap().graph
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn star(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (0, i))).unwrap()
    }

    fn outside_links(g: &Graph, rs: &RichSet) -> Vec<(NodeId, NodeId)> {
        g.edges()
            .filter(|&(a, b)| !(rs.contains(a) && rs.contains(b)))
            .collect()
    }

    #[test]
    fn rich_set_size_on_paper_scale() {
        let g = instance(5000, 1);
        let rs = rich_nodes(&g, 0.01, 0).unwrap();
        assert_eq!(rs.len(), 50);
        let cutoff = rs.members.iter().map(|&v| g.degree(v)).min().unwrap();
        assert!(g
            .alive_nodes()
            .filter(|v| !rs.contains(*v))
            .all(|v| g.degree(v) <= cutoff));
    }

    #[test]
    fn rich_set_needs_two_members() {
        assert!(rich_nodes(&star(10), 0.1, 0).is_err());
        assert!(rich_nodes(&star(10), 0.0, 0).is_err());
        assert!(rich_nodes(&star(10), 1.5, 0).is_err());
    }

    #[test]
    fn rich_set_ties_are_seeded() {
        // degrees: node 0 -> 5, nodes 1 and 2 -> 4, rest lower
        let g = Graph::from_edges(
            10,
            [
                (0, 3), (0, 4), (0, 5), (0, 6), (0, 7),
                (1, 5), (1, 6), (1, 7), (1, 8),
                (2, 6), (2, 7), (2, 8), (2, 9),
            ],
        )
        .unwrap();
        assert_eq!(g.degree(0), 5);
        assert_eq!((g.degree(1), g.degree(2)), (4, 4));
        let mut seen = std::collections::BTreeSet::new();
        for s in 0..64 {
            let rs = rich_nodes(&g, 0.2, s).unwrap();
            assert!(rs.contains(0));
            assert_eq!(rs.len(), 2);
            seen.insert(rs.members.clone());
            assert_eq!(rs, rich_nodes(&g, 0.2, s).unwrap());
        }
        assert_eq!(
            seen.into_iter().collect::<Vec<_>>(),
            vec![vec![0, 1], vec![0, 2]]
        );
    }

    #[test]
    fn density_and_budget_examples() {
        let rs = RichSet {
            members: (0..50).collect(),
            fraction: 0.01,
            internal_links: 111,
        };
        assert!((rs.density() - 111.0 / 1225.0).abs() < 1e-15);
        assert!((rs.density() - 0.0906).abs() < 1e-4);

        let rs = RichSet {
            internal_links: 112,
            ..rs
        };
        assert_eq!(links_for_target(&rs, 0.25), 194);
        assert_eq!(links_for_target(&rs, 0.5), 501);
        assert_eq!(links_for_target(&rs, 0.75), 807);
        assert_eq!(links_for_target(&rs, 1.0), 1113);
        assert_eq!(links_for_target(&rs, 0.0), -112);
        assert_eq!(links_for_target(&rs, 112.0 / 1225.0), 0);

        let k5 = complete(5);
        let full = rich_nodes(&k5, 1.0, 0).unwrap();
        assert_eq!(core_density(&k5, &full), 1.0);
        let empty = Graph::new(5);
        assert_eq!(core_density(&empty, &rich_nodes(&empty, 0.4, 0).unwrap()), 0.0);
    }

    #[test]
    fn core_thickening_extremes() {
        let g0 = instance(5000, 3);
        let rs = rich_nodes(&g0, 0.01, 3).unwrap();

        let mut g = g0.clone();
        let rep = thicken_core(&mut g, &rs, 0.0, 1).unwrap();
        assert_eq!(rep.removed, rs.internal_links);
        assert_eq!(rep.achieved_density, 0.0);
        assert_eq!(outside_links(&g, &rs), outside_links(&g0, &rs));

        let mut g = g0.clone();
        let rep = thicken_core(&mut g, &rs, 1.0, 1).unwrap();
        assert_eq!(rep.added, 1225 - rs.internal_links);
        let core = g.induced_subgraph(&rs.members).unwrap().graph;
        assert_eq!(metrics::triangle_count(&core), 19600);
        assert_eq!(metrics::global_clustering(&core).unwrap(), 1.0);
        assert_eq!(outside_links(&g, &rs), outside_links(&g0, &rs));

        let mut g = g0.clone();
        let rep = thicken_core(&mut g, &rs, rs.density(), 1).unwrap();
        assert_eq!((rep.added, rep.removed, rep.budget), (0, 0, 0));
        assert_eq!(g, g0);
    }

    #[test]
    fn periphery_thickening() {
        let g0 = instance(5000, 4);
        let rs = rich_nodes(&g0, 0.01, 4).unwrap();

        let mut g = g0.clone();
        let rep = thicken_periphery(&mut g, &rs, 0, 2).unwrap();
        assert_eq!(rep.added, 0);
        assert_eq!(g, g0);

        let mut g = g0.clone();
        let rep = thicken_periphery(&mut g, &rs, 500, 2).unwrap();
        assert_eq!(rep.added, 500);
        assert_eq!(g.link_count(), g0.link_count() + 500);
        assert_eq!(core_density(&g, &rs), core_density(&g0, &rs));
        for &v in &rs.members {
            assert_eq!(g.degree(v), g0.degree(v));
        }

        let mut g = g0.clone();
        let rep = thicken_periphery(&mut g, &rs, -100, 2).unwrap();
        assert_eq!(rep.removed, 100);
        assert_eq!(core_density(&g, &rs), core_density(&g0, &rs));
    }

    #[test]
    fn periphery_capacity_error() {
        // rich set {0, 1}; periphery {2, 3, 4, 5} has 6 pairs, 5 present
        let mut g = Graph::from_edges(
            6,
            [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5)],
        )
        .unwrap();
        let rs = RichSet {
            members: vec![0, 1],
            fraction: 2.0 / 6.0,
            internal_links: 1,
        };
        let before = g.clone();
        assert!(matches!(
            thicken_periphery(&mut g, &rs, 2, 0),
            Err(Error::Capacity { requested: 2, available: 1 })
        ));
        assert_eq!(g, before);
        thicken_periphery(&mut g, &rs, 1, 0).unwrap();
        assert!(g.has_edge(4, 5));
    }

    #[test]
    fn enumeration_fallback_samples_dense_cores() {
        // core already at 0.97: the 5% rule forces enumeration
        let mut g = complete(40);
        let rs = rich_nodes(&g, 1.0, 0).unwrap();
        thicken_core(&mut g, &rs, 0.97, 3).unwrap();
        let before = g.link_count();
        let rep = thicken_core(&mut g, &rs, 0.99, 3).unwrap();
        assert_eq!(g.link_count(), before + rep.added);
        assert!((core_density(&g, &rs) - 0.99).abs() <= 1.0 / 780.0);
    }

    #[test]
    fn rich_club_coefficient_examples() {
        assert_eq!(rich_club_coefficient(&complete(5), 3).unwrap(), 1.0);
        assert!(matches!(
            rich_club_coefficient(&star(6), 1),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn rich_club_coefficient_matches_pair_enumeration() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let mut g = Graph::new(12);
            for i in 0..12 {
                for j in i + 1..12 {
                    if rng.gen_bool(0.35) {
                        g.add_edge(i, j).unwrap();
                    }
                }
            }
            for k in 0..12 {
                let mut n_rich = 0;
                let mut links = 0;
                for i in 0..12 {
                    if g.degree(i) > k {
                        n_rich += 1;
                        for j in i + 1..12 {
                            if g.degree(j) > k && g.has_edge(i, j) {
                                links += 1;
                            }
                        }
                    }
                }
                match rich_club_coefficient(&g, k) {
                    Ok(phi) => {
                        let expect = links as f64 / (n_rich * (n_rich - 1) / 2) as f64;
                        assert!((phi - expect).abs() < 1e-12);
                    }
                    Err(_) => assert!(n_rich < 2),
                }
            }
        }
    }

    #[test]
    fn normalized_rich_club_of_random_graph_is_near_one() {
        let g = instance(1000, 5);
        let null = NullModelConfig {
            samples: 40,
            swaps_per_link: 10,
        };
        let r = normalized_rich_club(&g, 5, &null, 7).unwrap();
        assert!((r.rho - 1.0).abs() <= 0.1, "rho {}", r.rho);
    }

    #[test]
    fn normalized_rich_club_detects_clique_core() {
        let mut g = instance(500, 6);
        let rs = rich_nodes(&g, 0.02, 6).unwrap();
        thicken_core(&mut g, &rs, 1.0, 6).unwrap();
        let k = rs.members.iter().map(|&v| g.degree(v)).min().unwrap() - 1;
        let null = NullModelConfig {
            samples: 20,
            swaps_per_link: 10,
        };
        let r = normalized_rich_club(&g, k, &null, 1).unwrap();
        // recorded on this instance: rho ≈ 1.7
        assert!(r.rho > 1.0, "rho {}", r.rho);
        assert!(r.random_std >= 0.0);
    }

    #[test]
    fn normalized_rich_club_single_sample_is_deterministic() {
        let g = instance(200, 2);
        let null = NullModelConfig {
            samples: 1,
            swaps_per_link: 10,
        };
        let a = normalized_rich_club(&g, 4, &null, 9).unwrap();
        let b = normalized_rich_club(&g, 4, &null, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.random_std, 0.0);
        assert!(normalized_rich_club(&g, 4, &NullModelConfig { samples: 0, swaps_per_link: 1 }, 9).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn core_thickening_hits_target_and_stays_inside(seed in 0u64..1000, target in 0.0f64..=1.0) {
            let g0 = instance(400, seed);
            let rs = rich_nodes(&g0, 0.05, seed).unwrap();
            let mut g = g0.clone();
            let rep = thicken_core(&mut g, &rs, target, seed).unwrap();
            prop_assert!((rep.achieved_density - target).abs() <= 1.0 / rs.max_links() as f64);
            prop_assert_eq!(outside_links(&g, &rs), outside_links(&g0, &rs));
            g.check_invariants();
        }

        #[test]
        fn periphery_thickening_leaves_core_alone(seed in 0u64..1000, budget in -50i64..300) {
            let g0 = instance(400, seed);
            let rs = rich_nodes(&g0, 0.05, seed).unwrap();
            let mut g = g0.clone();
            thicken_periphery(&mut g, &rs, budget, seed).unwrap();
            let core = |h: &Graph| h.edges().filter(|&(a, b)| rs.contains(a) || rs.contains(b)).collect::<Vec<_>>();
            prop_assert_eq!(core(&g), core(&g0));
            prop_assert_eq!(g.link_count() as i64, g0.link_count() as i64 + budget);
        }

        #[test]
        fn phi_grows_with_links_among_rich_nodes(seed in 0u64..1000) {
            let mut g = instance(300, seed);
            let k = 6;
            let rich: Vec<NodeId> = g.alive_nodes().filter(|&v| g.degree(v) > k).collect();
            prop_assume!(rich.len() >= 3);
            let mut last = rich_club_coefficient(&g, k).unwrap();
            for (x, &u) in rich.iter().enumerate() {
                for &v in &rich[x + 1..] {
                    // degrees only grow, and every endpoint is already above k
                    g.add_edge(u, v).unwrap();
                    let phi = rich_club_coefficient(&g, k).unwrap();
                    prop_assert!(phi >= last);
                    last = phi;
                }
            }
            prop_assert_eq!(last, 1.0);
        }
    }
}
