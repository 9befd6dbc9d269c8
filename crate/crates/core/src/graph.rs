//! Network structures agents communicate over.
//!
//! Four generators are provided: random regular ("egalitarian"), extended
//! Barabási–Albert preferential attachment, Watts–Strogatz small-world, and
//! star. All of them are pure functions of `(kind, n, seed)` and always
//! return a connected simple graph, so neighbor means are defined for every
//! agent.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::seed;

/// Bounded retry count for generators that reject and retry (regular
/// pairing, Watts–Strogatz connectivity).
const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid network parameters: {0}")]
    InvalidParameters(String),
    #[error("failed to generate a valid connected graph after {attempts} attempts")]
    GenerationFailure { attempts: usize },
}

/// Which network family to generate, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NetworkKind {
    /// Random d-regular graph; every agent sees the same number of peers.
    Egalitarian { degree: usize },
    /// Growing preferential-attachment graph. Each new node attaches
    /// `m` edges; each edge picks its target by degree with probability
    /// `p` and uniformly otherwise (`p = 1` is classic preferential
    /// attachment).
    BarabasiAlbert { m: usize, p: f64 },
    /// Ring lattice of degree `k` with each edge rewired with
    /// probability `p`.
    WattsStrogatz { k: usize, p: f64 },
    /// One hub connected to every other node.
    Star,
}

impl NetworkKind {
    fn check(&self, n: usize) -> Result<(), GraphError> {
        let fail = |msg: String| Err(GraphError::InvalidParameters(msg));
        if n < 2 {
            return fail(format!("need at least 2 nodes, got {n}"));
        }
        match *self {
            NetworkKind::Egalitarian { degree } => {
                if degree < 1 || degree >= n {
                    return fail(format!("egalitarian degree {degree} must satisfy 1 <= d < n = {n}"));
                }
            }
            NetworkKind::BarabasiAlbert { m, p } => {
                if m < 1 || m >= n {
                    return fail(format!("barabasi-albert m {m} must satisfy 1 <= m < n = {n}"));
                }
                if !(0.0..=1.0).contains(&p) {
                    return fail(format!("barabasi-albert p {p} must lie in [0,1]"));
                }
            }
            NetworkKind::WattsStrogatz { k, p } => {
                if k % 2 != 0 || k < 2 || k >= n {
                    return fail(format!("watts-strogatz k {k} must be even and satisfy 2 <= k < n = {n}"));
                }
                if !(0.0..=1.0).contains(&p) {
                    return fail(format!("watts-strogatz p {p} must lie in [0,1]"));
                }
            }
            NetworkKind::Star => {}
        }
        Ok(())
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkKind::Egalitarian { degree } => write!(f, "egalitarian-d{degree}"),
            NetworkKind::BarabasiAlbert { m, p } => write!(f, "ba-m{m}-p{p}"),
            NetworkKind::WattsStrogatz { k, p } => write!(f, "ws-k{k}-p{p}"),
            NetworkKind::Star => write!(f, "star"),
        }
    }
}

/// Undirected simple graph with adjacency lists.
///
/// Immutable after construction; invariants (no self-loops, no duplicate
/// edges, minimum degree 1, single connected component) are established by
/// the generators.
#[derive(Debug, Clone)]
pub struct Network {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    kind: NetworkKind,
}

impl Network {
    fn from_edges(kind: NetworkKind, n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in neighbors.iter_mut() {
            list.sort_unstable();
        }
        Network { node_count: n, edges, neighbors, kind }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    /// Canonical edge list, pairs ordered `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn is_connected(&self) -> bool {
        connected(self.node_count, &self.neighbors)
    }

    /// Plain-text edge list, one `u v` pair per line, 0-based indices.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for &(u, v) in &self.edges {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}

fn connected(n: usize, neighbors: &[Vec<usize>]) -> bool {
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &neighbors[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// Generate a connected network of `n` nodes. Identical `(kind, n, seed)`
/// always yields an identical edge set.
pub fn generate_network(kind: NetworkKind, n: usize, seed: u64) -> Result<Network, GraphError> {
    kind.check(n)?;
    match kind {
        NetworkKind::Star => Ok(star(n)),
        NetworkKind::Egalitarian { degree } => regular(n, degree, seed),
        NetworkKind::WattsStrogatz { k, p } => watts_strogatz(n, k, p, seed),
        NetworkKind::BarabasiAlbert { m, p } => Ok(barabasi_albert(n, m, p, seed)),
    }
}

fn star(n: usize) -> Network {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
    Network::from_edges(NetworkKind::Star, n, edges)
}

/// Random d-regular graph via the pairing (configuration) model.
///
/// Stubs are matched one at a time against a uniformly chosen suitable
/// partner (no self-loop, no duplicate edge); if the matching gets stuck or
/// the result is disconnected the whole attempt is rejected and retried
/// from a derived seed. When `n * d` is odd, one node (the last) carries
/// degree `d - 1` so the agent count never has to change.
fn regular(n: usize, d: usize, seed: u64) -> Result<Network, GraphError> {
    let mut degrees = vec![d; n];
    if n * d % 2 == 1 {
        degrees[n - 1] = d - 1;
    }

    'attempt: for attempt in 0..MAX_ATTEMPTS {
        let mut rng = seed::rng(seed::derive(seed, attempt as u64));
        let mut stubs: Vec<usize> = Vec::with_capacity(n * d);
        for (node, &deg) in degrees.iter().enumerate() {
            stubs.extend(std::iter::repeat_n(node, deg));
        }
        stubs.shuffle(&mut rng);

        let mut adjacency: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(stubs.len() / 2);
        while !stubs.is_empty() {
            let u = *stubs.last().unwrap();
            // Pick the partner among remaining stubs, skipping unsuitable ones.
            let candidates: Vec<usize> = (0..stubs.len() - 1)
                .filter(|&i| {
                    let v = stubs[i];
                    v != u && !adjacency[u].contains(&v)
                })
                .collect();
            let Some(&pick) = candidates.as_slice().choose(&mut rng) else {
                continue 'attempt; // stuck: only self-loops/duplicates left
            };
            let v = stubs[pick];
            stubs.pop();
            stubs.swap_remove(pick);
            adjacency[u].insert(v);
            adjacency[v].insert(u);
            edges.push((u, v));
        }

        let net = Network::from_edges(NetworkKind::Egalitarian { degree: d }, n, edges);
        if net.is_connected() {
            return Ok(net);
        }
    }
    Err(GraphError::GenerationFailure { attempts: MAX_ATTEMPTS })
}

/// Watts–Strogatz ring lattice with probabilistic rewiring. Disconnected
/// outcomes are regenerated from an incremented derived seed.
fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<Network, GraphError> {
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = seed::rng(seed::derive(seed, attempt as u64));
        let mut adjacency: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for i in 0..n {
            for j in 1..=k / 2 {
                let v = (i + j) % n;
                adjacency[i].insert(v);
                adjacency[v].insert(i);
            }
        }
        // Rewire the clockwise edges of each node with probability p.
        for i in 0..n {
            for j in 1..=k / 2 {
                let v = (i + j) % n;
                if rng.random::<f64>() >= p {
                    continue;
                }
                if !adjacency[i].contains(&v) {
                    continue; // already rewired away from the other side
                }
                if adjacency[i].len() >= n - 1 {
                    continue; // node saturated, nothing to rewire to
                }
                let w = loop {
                    let cand = rng.random_range(0..n);
                    if cand != i && !adjacency[i].contains(&cand) {
                        break cand;
                    }
                };
                adjacency[i].remove(&v);
                adjacency[v].remove(&i);
                adjacency[i].insert(w);
                adjacency[w].insert(i);
            }
        }
        let edges: Vec<(usize, usize)> = adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        let net = Network::from_edges(NetworkKind::WattsStrogatz { k, p }, n, edges);
        if net.node_count() >= 2 && net.is_connected() && net.neighbors.iter().all(|l| !l.is_empty()) {
            return Ok(net);
        }
    }
    Err(GraphError::GenerationFailure { attempts: MAX_ATTEMPTS })
}

/// Extended Barabási–Albert growth: seed clique of `m + 1` nodes, then each
/// new node draws `m` distinct targets, each preferentially with
/// probability `p` and uniformly with probability `1 - p`. Connected by
/// construction.
fn barabasi_albert(n: usize, m: usize, p: f64, seed: u64) -> Network {
    let mut rng = seed::rng(seed);
    let core = m + 1;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut degrees = vec![0usize; n];
    // Degree-weighted ballot box: node index repeated once per unit degree.
    let mut ballot: Vec<usize> = Vec::new();
    for i in 0..core {
        for j in i + 1..core {
            edges.push((i, j));
            degrees[i] += 1;
            degrees[j] += 1;
            ballot.push(i);
            ballot.push(j);
        }
    }
    let mut adjacency: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for &(u, v) in &edges {
        adjacency[u].insert(v);
        adjacency[v].insert(u);
    }
    for new_node in core..n {
        let mut targets: HashSet<usize> = HashSet::with_capacity(m);
        while targets.len() < m.min(new_node) {
            let target = if rng.random::<f64>() < p {
                ballot[rng.random_range(0..ballot.len())]
            } else {
                rng.random_range(0..new_node)
            };
            targets.insert(target);
        }
        // Sorted so the ballot box fills in a deterministic order.
        let mut targets: Vec<usize> = targets.into_iter().collect();
        targets.sort_unstable();
        for &t in &targets {
            edges.push((t, new_node));
            adjacency[t].insert(new_node);
            adjacency[new_node].insert(t);
            degrees[t] += 1;
            degrees[new_node] += 1;
            ballot.push(t);
            ballot.push(new_node);
        }
    }
    Network::from_edges(NetworkKind::BarabasiAlbert { m, p }, n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(net: &Network) -> Vec<usize> {
        (0..net.node_count()).map(|i| net.degree(i)).collect()
    }

    #[test]
    fn star_has_one_hub() {
        let net = generate_network(NetworkKind::Star, 5, 1).unwrap();
        let mut d = degrees(&net);
        d.sort_unstable();
        assert_eq!(d, vec![1, 1, 1, 1, 4]);
        assert_eq!(net.edge_count(), 4);
        assert!(net.is_connected());
    }

    #[test]
    fn egalitarian_is_regular() {
        let net = generate_network(NetworkKind::Egalitarian { degree: 4 }, 10, 7).unwrap();
        assert!(degrees(&net).iter().all(|&d| d == 4));
        assert_eq!(net.edge_count(), 20);
        assert!(net.is_connected());
    }

    #[test]
    fn egalitarian_odd_total_uses_near_regular_fallback() {
        // n * d = 15 is odd: exactly one node carries degree d - 1.
        let net = generate_network(NetworkKind::Egalitarian { degree: 3 }, 5, 11).unwrap();
        let mut d = degrees(&net);
        d.sort_unstable();
        assert_eq!(d, vec![2, 3, 3, 3, 3]);
        assert!(net.is_connected());
    }

    #[test]
    fn ws_without_rewiring_is_ring_lattice() {
        let net = generate_network(NetworkKind::WattsStrogatz { k: 4, p: 0.0 }, 8, 3).unwrap();
        for i in 0..8usize {
            let expected: Vec<usize> = {
                let mut v = vec![(i + 1) % 8, (i + 7) % 8, (i + 2) % 8, (i + 6) % 8];
                v.sort_unstable();
                v
            };
            assert_eq!(net.neighbors(i), expected.as_slice(), "node {i}");
        }
        assert_eq!(net.edge_count(), 16);
    }

    #[test]
    fn ba_degree_distribution_has_heavy_tail() {
        let net =
            generate_network(NetworkKind::BarabasiAlbert { m: 2, p: 0.5 }, 50, 11).unwrap();
        assert_eq!(net.node_count(), 50);
        assert!(net.is_connected());
        let mut d = degrees(&net);
        d.sort_unstable();
        let median = d[d.len() / 2];
        let max = *d.last().unwrap();
        assert!(max > median, "max {max} should exceed median {median}");
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in [
            NetworkKind::Egalitarian { degree: 4 },
            NetworkKind::BarabasiAlbert { m: 2, p: 0.5 },
            NetworkKind::WattsStrogatz { k: 4, p: 0.5 },
            NetworkKind::Star,
        ] {
            let a = generate_network(kind, 40, 99).unwrap();
            let b = generate_network(kind, 40, 99).unwrap();
            assert_eq!(a.edges(), b.edges(), "{kind}");
        }
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_network(NetworkKind::Egalitarian { degree: 4 }, 30, 1).unwrap();
        let b = generate_network(NetworkKind::Egalitarian { degree: 4 }, 30, 2).unwrap();
        assert_ne!(a.edges(), b.edges());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(matches!(
            generate_network(NetworkKind::Egalitarian { degree: 10 }, 10, 0),
            Err(GraphError::InvalidParameters(_))
        ));
        assert!(matches!(
            generate_network(NetworkKind::Egalitarian { degree: 0 }, 10, 0),
            Err(GraphError::InvalidParameters(_))
        ));
        assert!(matches!(
            generate_network(NetworkKind::BarabasiAlbert { m: 0, p: 0.5 }, 10, 0),
            Err(GraphError::InvalidParameters(_))
        ));
        assert!(matches!(
            generate_network(NetworkKind::BarabasiAlbert { m: 2, p: 1.5 }, 10, 0),
            Err(GraphError::InvalidParameters(_))
        ));
        assert!(matches!(
            generate_network(NetworkKind::WattsStrogatz { k: 3, p: 0.5 }, 10, 0),
            Err(GraphError::InvalidParameters(_))
        ));
        assert!(matches!(
            generate_network(NetworkKind::Star, 1, 0),
            Err(GraphError::InvalidParameters(_))
        ));
    }

    #[test]
    fn unachievable_connectivity_fails_cleanly() {
        // Degree-1 pairing on 4 nodes is always two disjoint edges.
        assert!(matches!(
            generate_network(NetworkKind::Egalitarian { degree: 1 }, 4, 5),
            Err(GraphError::GenerationFailure { .. })
        ));
    }

    #[test]
    fn adjacency_is_symmetric_and_duplicate_free() {
        for seed in 0..20u64 {
            for kind in [
                NetworkKind::Egalitarian { degree: 4 },
                NetworkKind::BarabasiAlbert { m: 2, p: 0.5 },
                NetworkKind::WattsStrogatz { k: 4, p: 0.5 },
            ] {
                let net = generate_network(kind, 25, seed).unwrap();
                assert!(net.is_connected(), "{kind} seed {seed}");
                for u in 0..net.node_count() {
                    assert!(net.degree(u) >= 1);
                    let mut seen = HashSet::new();
                    for &v in net.neighbors(u) {
                        assert_ne!(u, v, "self-loop at {u}");
                        assert!(seen.insert(v), "duplicate neighbor {v} of {u}");
                        assert!(net.neighbors(v).contains(&u), "asymmetric edge {u}-{v}");
                    }
                }
            }
        }
    }

    #[test]
    fn edge_list_export_format() {
        let net = generate_network(NetworkKind::Star, 4, 0).unwrap();
        let mut buf = Vec::new();
        net.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1\n0 2\n0 3\n");
    }
}
