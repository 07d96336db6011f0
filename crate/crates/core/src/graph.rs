//! Undirected simple graph with stable node ids.
//!
//! Nodes are `0..n` and never reindexed. Removing a node marks it dead and
//! strips its links, so ids recorded in a removal trace keep referring to the
//! original network.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Marker for "no path" in a [`DistanceRow`].
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    // Sorted neighbor lists; membership is a binary search.
    adj: Vec<Vec<NodeId>>,
    alive: Vec<bool>,
    m: usize,
    alive_count: usize,
}

/// Hop distances from one source. Dead and disconnected nodes hold [`UNREACHABLE`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceRow {
    pub source: NodeId,
    pub dist: Vec<u32>,
}

impl DistanceRow {
    pub fn get(&self, node: NodeId) -> Option<u32> {
        match self.dist[node] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }
}

/// An induced subgraph together with the original id of each relabeled node.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    /// `mapping[new_id] = original_id`, sorted ascending.
    pub mapping: Vec<NodeId>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            m: 0,
            alive_count: n,
        }
    }

    /// Builds a graph from a link list. Duplicate links and self-loops are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Graph::new(n);
        for (i, j) in edges {
            if !g.add_edge(i, j)? {
                return Err(Error::Precondition(format!("duplicate link ({i}, {j})")));
            }
        }
        Ok(g)
    }

    /// Node capacity, including removed nodes.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn link_count(&self) -> usize {
        self.m
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn is_alive(&self, i: NodeId) -> bool {
        self.alive.get(i).copied().unwrap_or(false)
    }

    pub fn alive_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n()).filter(move |&i| self.alive[i])
    }

    pub fn degree(&self, i: NodeId) -> usize {
        self.adj[i].len()
    }

    /// Degree of every node id; removed nodes report 0.
    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        i < self.n() && j < self.n() && self.adj[i].binary_search(&j).is_ok()
    }

    /// Links as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    fn check_endpoint(&self, i: NodeId) -> Result<()> {
        if i >= self.n() {
            return Err(Error::Precondition(format!(
                "node {i} out of range (n = {})",
                self.n()
            )));
        }
        if !self.alive[i] {
            return Err(Error::Precondition(format!("node {i} has been removed")));
        }
        Ok(())
    }

    /// Inserts the link `{i, j}`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, i: NodeId, j: NodeId) -> Result<bool> {
        if i == j {
            return Err(Error::Precondition(format!("self-loop on node {i}")));
        }
        self.check_endpoint(i)?;
        self.check_endpoint(j)?;
        match self.adj[i].binary_search(&j) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[i].insert(pos, j);
                let pos = self.adj[j].binary_search(&i).unwrap_err();
                self.adj[j].insert(pos, i);
                self.m += 1;
                Ok(true)
            }
        }
    }

    /// Deletes the link `{i, j}`. Returns `false` if it was absent.
    pub fn remove_edge(&mut self, i: NodeId, j: NodeId) -> Result<bool> {
        if i == j {
            return Err(Error::Precondition(format!("self-loop on node {i}")));
        }
        self.check_endpoint(i)?;
        self.check_endpoint(j)?;
        match self.adj[i].binary_search(&j) {
            Err(_) => Ok(false),
            Ok(pos) => {
                self.adj[i].remove(pos);
                let pos = self.adj[j].binary_search(&i).unwrap();
                self.adj[j].remove(pos);
                self.m -= 1;
                Ok(true)
            }
        }
    }

    /// Marks `i` dead and deletes its links. Returns the number of links deleted.
    pub fn remove_node(&mut self, i: NodeId) -> Result<usize> {
        self.check_endpoint(i)?;
        let nb = std::mem::take(&mut self.adj[i]);
        for &j in &nb {
            let pos = self.adj[j].binary_search(&i).unwrap();
            self.adj[j].remove(pos);
        }
        self.alive[i] = false;
        self.alive_count -= 1;
        self.m -= nb.len();
        Ok(nb.len())
    }

    pub fn bfs_distances(&self, source: NodeId) -> Result<DistanceRow> {
        self.check_endpoint(source)?;
        let mut dist = vec![UNREACHABLE; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adj[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        Ok(DistanceRow { source, dist })
    }

    /// Subgraph induced by `nodes`, relabeled `0..k` in ascending original-id order.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<Subgraph> {
        let mut mapping = nodes.to_vec();
        mapping.sort_unstable();
        mapping.dedup();
        for &v in &mapping {
            self.check_endpoint(v)?;
        }
        let mut graph = Graph::new(mapping.len());
        for (a, &u) in mapping.iter().enumerate() {
            for &v in &self.adj[u] {
                if v > u {
                    if let Ok(b) = mapping.binary_search(&v) {
                        graph.add_edge(a, b)?;
                    }
                }
            }
        }
        Ok(Subgraph { graph, mapping })
    }

    /// Number of links with both endpoints in `members` (which must be sorted).
    pub(crate) fn links_within_sorted(&self, members: &[NodeId]) -> usize {
        members
            .iter()
            .map(|&u| {
                self.adj[u]
                    .iter()
                    .filter(|&&v| v > u && members.binary_search(&v).is_ok())
                    .count()
            })
            .sum()
    }

    /// Connected components over alive nodes, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in self.alive_nodes() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Serializes to the edge-list text format. A leading `# nodes: n` comment
    /// records the capacity so isolated trailing nodes survive a round trip.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# nodes: {}", self.n());
        for (i, j) in self.edges() {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }

    /// Parses the edge-list text format. Node count is taken from a
    /// `# nodes: n` comment when present, else from the largest id seen.
    pub fn read_edge_list<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let parse_err = |line: usize, reason: String| Error::Parse {
            path: source_name.to_string(),
            line,
            reason,
        };
        let mut declared: Option<usize> = None;
        let mut edges = Vec::new();
        let mut max_id: Option<usize> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::io(source_name, e))?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("nodes:") {
                    let n = v
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| parse_err(lineno, format!("bad node count: {e}")))?;
                    declared = Some(n);
                }
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let (a, b) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(parse_err(lineno, "expected two node ids".into())),
            };
            let a: usize = a
                .parse()
                .map_err(|e| parse_err(lineno, format!("bad node id {a:?}: {e}")))?;
            let b: usize = b
                .parse()
                .map_err(|e| parse_err(lineno, format!("bad node id {b:?}: {e}")))?;
            max_id = Some(max_id.map_or(a.max(b), |m| m.max(a).max(b)));
            edges.push((lineno, a, b));
        }
        let n = match (declared, max_id) {
            (Some(n), Some(m)) if m >= n => {
                return Err(parse_err(0, format!("node id {m} exceeds declared count {n}")))
            }
            (Some(n), _) => n,
            (None, Some(m)) => m + 1,
            (None, None) => 0,
        };
        let mut g = Graph::new(n);
        for (lineno, a, b) in edges {
            match g.add_edge(a, b) {
                Ok(true) => {}
                Ok(false) => return Err(parse_err(lineno, format!("duplicate link ({a}, {b})"))),
                Err(e) => return Err(parse_err(lineno, e.to_string())),
            }
        }
        Ok(g)
    }

    #[cfg(test)]
    pub(crate) fn check_invariants(&self) {
        let mut half = 0;
        for i in 0..self.n() {
            let nb = &self.adj[i];
            assert!(nb.windows(2).all(|w| w[0] < w[1]), "unsorted adjacency at {i}");
            assert!(!nb.contains(&i), "self-loop at {i}");
            if !self.alive[i] {
                assert!(nb.is_empty());
            }
            for &j in nb {
                assert!(self.alive[j]);
                assert!(self.adj[j].binary_search(&i).is_ok(), "asymmetric {i}-{j}");
            }
            half += nb.len();
        }
        assert_eq!(half, 2 * self.m);
        assert_eq!(self.alive.iter().filter(|&&a| a).count(), self.alive_count);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    /// All-pairs distances by repeated min-plus relaxation of the adjacency matrix.
    fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
        let n = g.n();
        let inf = u32::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for i in 0..n {
            if g.is_alive(i) {
                d[i][i] = 0;
            }
            for j in 0..n {
                if g.has_edge(i, j) {
                    d[i][j] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        for row in &mut d {
            for x in row.iter_mut() {
                if *x >= inf {
                    *x = UNREACHABLE;
                }
            }
        }
        d
    }

    #[test]
    fn add_edge_examples() {
        let mut g = Graph::new(3);
        assert!(g.add_edge(0, 1).unwrap());
        assert_eq!(g.link_count(), 1);
        assert!(!g.add_edge(1, 0).unwrap());
        assert_eq!(g.link_count(), 1);
        assert!(matches!(g.add_edge(2, 2), Err(Error::Precondition(_))));
        assert!(g.add_edge(0, 3).is_err());
        g.remove_node(2).unwrap();
        assert!(g.add_edge(0, 2).is_err());
        g.check_invariants();
    }

    #[test]
    fn remove_node_examples() {
        let mut star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(star.remove_node(0).unwrap(), 4);
        assert_eq!(star.link_count(), 0);
        assert!(star.remove_node(0).is_err());
        star.check_invariants();

        let mut tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.remove_node(2).unwrap(), 2);
        assert!(tri.has_edge(0, 1));
        assert_eq!(tri.link_count(), 1);

        let mut p = path(3);
        assert_eq!(p.remove_node(1).unwrap(), 2);
        assert_eq!(p.bfs_distances(0).unwrap().get(2), None);
        assert_eq!(p.bfs_distances(2).unwrap().get(0), None);
        p.check_invariants();
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(path(4).bfs_distances(0).unwrap().dist, vec![0, 1, 2, 3]);
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            g.bfs_distances(0).unwrap().dist,
            vec![0, 1, UNREACHABLE, UNREACHABLE]
        );
        let mut g = path(3);
        g.remove_node(0).unwrap();
        assert!(g.bfs_distances(0).is_err());
    }

    #[test]
    fn bfs_matches_floyd_warshall() {
        for seed in 0..30 {
            let mut g = random_graph(10, 0.25, seed);
            if seed % 3 == 0 {
                g.remove_node((seed as usize) % 10).unwrap();
            }
            let fw = floyd_warshall(&g);
            for s in g.alive_nodes() {
                assert_eq!(g.bfs_distances(s).unwrap().dist, fw[s], "seed {seed} source {s}");
            }
        }
    }

    #[test]
    fn induced_subgraph_examples() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let sub = k4.induced_subgraph(&[3, 0, 2]).unwrap();
        assert_eq!(sub.graph.link_count(), 3);
        assert_eq!(sub.mapping, vec![0, 2, 3]);

        let sparse = Graph::from_edges(4, [(0, 1)]).unwrap();
        assert_eq!(sparse.induced_subgraph(&[2, 3]).unwrap().graph.link_count(), 0);

        let mut g = path(4);
        g.remove_node(3).unwrap();
        assert!(g.induced_subgraph(&[0, 3]).is_err());
    }

    #[test]
    fn induced_subgraph_matches_pair_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..20 {
            let g = random_graph(12, 0.3, seed);
            let mut set: Vec<usize> = (0..12).collect();
            rand::seq::SliceRandom::shuffle(&mut set[..], &mut rng);
            set.truncate(5);
            let sub = g.induced_subgraph(&set).unwrap();
            let mut expected = Vec::new();
            for &a in &set {
                for &b in &set {
                    if a < b && g.has_edge(a, b) {
                        expected.push((a, b));
                    }
                }
            }
            expected.sort_unstable();
            let mut got: Vec<_> = sub
                .graph
                .edges()
                .map(|(a, b)| (sub.mapping[a], sub.mapping[b]))
                .collect();
            got.sort_unstable();
            assert_eq!(got, expected);
            let mut sorted = set.clone();
            sorted.sort_unstable();
            assert_eq!(g.links_within_sorted(&sorted), expected.len());
        }
    }

    #[test]
    fn components_examples() {
        let cycle = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(cycle.connected_components(), vec![vec![0, 1, 2, 3, 4]]);
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let sizes: Vec<_> = two.connected_components().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 3]);
    }

    #[test]
    fn components_after_cut_match_reachability() {
        for seed in 0..20 {
            let mut g = random_graph(12, 0.2, seed);
            // remove the highest-degree node, often a cut vertex
            let hub = (0..12).max_by_key(|&i| g.degree(i)).unwrap();
            g.remove_node(hub).unwrap();
            let comps = g.connected_components();
            let mut label = vec![usize::MAX; 12];
            for (c, comp) in comps.iter().enumerate() {
                for &v in comp {
                    label[v] = c;
                }
            }
            for s in g.alive_nodes() {
                let row = g.bfs_distances(s).unwrap();
                for t in g.alive_nodes() {
                    assert_eq!(row.get(t).is_some(), label[s] == label[t]);
                }
            }
            let covered: usize = comps.iter().map(Vec::len).sum();
            assert_eq!(covered, g.alive_count());
        }
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let mut g = random_graph(9, 0.3, 4);
        g.remove_node(8).unwrap();
        let text = g.to_edge_list();
        let back = Graph::read_edge_list(text.as_bytes(), "mem").unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        assert_eq!(back.n(), 9);

        let g = Graph::read_edge_list("# comment\n0 1\n\n1 2\n".as_bytes(), "mem").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.link_count(), 2);

        for bad in ["0 1\n1 0\n", "2 2\n", "0 x\n", "0 1 2\n", "# nodes: 2\n0 5\n"] {
            assert!(Graph::read_edge_list(bad.as_bytes(), "mem").is_err(), "{bad:?}");
        }
    }

    #[test]
    fn removal_leaves_other_components_alone() {
        let mut g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6)]).unwrap();
        let before: Vec<_> = (0..4).map(|s| g.bfs_distances(s).unwrap()).collect();
        g.remove_node(5).unwrap();
        for s in 0..4 {
            assert_eq!(g.bfs_distances(s).unwrap(), before[s]);
        }
    }

    proptest! {
        #[test]
        fn add_then_remove_edge_restores(seed in 0u64..500, i in 0usize..10, j in 0usize..10) {
            prop_assume!(i != j);
            let mut g = random_graph(10, 0.3, seed);
            let before = g.clone();
            if g.add_edge(i, j).unwrap() {
                prop_assert!(g.remove_edge(i, j).unwrap());
            }
            prop_assert_eq!(g, before);
        }

        #[test]
        fn distances_are_symmetric(seed in 0u64..500, kill in 0usize..10) {
            let mut g = random_graph(10, 0.2, seed);
            g.remove_node(kill).unwrap();
            g.check_invariants();
            let rows: Vec<_> = (0..10)
                .map(|s| g.bfs_distances(s).ok())
                .collect();
            for a in g.alive_nodes() {
                for b in g.alive_nodes() {
                    let ab = rows[a].as_ref().unwrap().dist[b];
                    let ba = rows[b].as_ref().unwrap().dist[a];
                    prop_assert_eq!(ab, ba);
                }
            }
        }
    }
}
