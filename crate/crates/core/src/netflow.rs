//! Single-source shortest paths from node 1 on a complete digraph with
//! possibly negative arc lengths.
//!
//! The production engine is the shortest-path specialization of the network
//! simplex method: a spanning tree rooted at the source is kept together with
//! the tree distances, and any arc with negative reduced cost is pivoted in.
//! When the entering arc closes a cycle with its own subtree, that cycle is
//! negative and is returned as an infeasibility certificate.
//!
//! [`bellman_ford`] is an independent label-correcting implementation of the
//! same contract, used for cross-checking.

use crate::arclen::{Cycle, ParametricLengths};
use crate::pcm::Pcm;

/// Reduced costs and cycle lengths above `-NEG_TOL` count as nonnegative.
pub const NEG_TOL: f64 = 1e-12;

/// The complete digraph with arc lengths frozen at one level `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n: usize,
    z: f64,
    lengths: Vec<f64>,
}

impl Network {
    pub fn from_lengths<P: ParametricLengths + ?Sized>(p: &P, z: f64) -> Self {
        let n = p.node_count();
        let mut lengths = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    lengths[i * n + j] = p.arc_length(i, j, z);
                }
            }
        }
        Network { n, z, lengths }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.n * (self.n - 1)
    }

    pub fn level(&self) -> f64 {
        self.z
    }

    #[inline]
    pub fn length(&self, i: usize, j: usize) -> f64 {
        self.lengths[i * self.n + j]
    }

    pub fn cycle_length(&self, cycle: &Cycle) -> f64 {
        cycle.arcs().map(|(i, j)| self.length(i, j)).sum()
    }
}

/// The network `N(z)` of a matrix.
pub fn build_network(a: &Pcm, z: f64) -> Network {
    Network::from_lengths(a, z)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpOutcome {
    /// Shortest distances from node 1; `distances[0] == 0`.
    Distances(Vec<f64>),
    /// A cycle of total length below `-NEG_TOL`.
    NegativeCycle { cycle: Cycle, length: f64 },
}

impl SpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SpOutcome::Distances(_))
    }
}

/// Shortest-path network simplex. Owns its working arrays so repeated solves
/// do not reallocate.
#[derive(Debug, Default, Clone)]
pub struct NetworkSimplex {
    pred: Vec<usize>,
    dist: Vec<f64>,
    children: Vec<Vec<usize>>,
    stack: Vec<usize>,
    pivots: usize,
}

const ROOT: usize = 0;

impl NetworkSimplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pivots performed by the last solve.
    pub fn pivots(&self) -> usize {
        self.pivots
    }

    pub fn solve(&mut self, net: &Network) -> SpOutcome {
        let n = net.node_count();
        self.init_star(net);
        loop {
            let Some((k, l, reduced)) = self.entering_arc(net) else {
                return SpOutcome::Distances(self.dist.clone());
            };
            self.pivots += 1;
            if self.is_ancestor(l, k) {
                // Tree path l -> ... -> k has length dist[k] - dist[l]; closing
                // it with (k, l) gives a cycle of length `reduced`.
                let mut nodes = vec![k];
                let mut v = k;
                while v != l {
                    v = self.pred[v];
                    nodes.push(v);
                }
                nodes.reverse();
                debug_assert!(nodes.len() <= n);
                return SpOutcome::NegativeCycle {
                    cycle: Cycle::new(nodes),
                    length: reduced,
                };
            }
            self.reattach(l, k, reduced);
        }
    }

    fn init_star(&mut self, net: &Network) {
        let n = net.node_count();
        self.pivots = 0;
        self.pred.clear();
        self.pred.resize(n, ROOT);
        self.dist.clear();
        self.dist.extend((0..n).map(|j| if j == ROOT { 0.0 } else { net.length(ROOT, j) }));
        self.children.iter_mut().for_each(Vec::clear);
        self.children.resize_with(n, Vec::new);
        self.children[ROOT].extend(1..n);
    }

    /// First arc in row-major order whose reduced cost is below `-NEG_TOL`.
    fn entering_arc(&self, net: &Network) -> Option<(usize, usize, f64)> {
        let n = net.node_count();
        for i in 0..n {
            let di = self.dist[i];
            for j in 0..n {
                if i == j {
                    continue;
                }
                let reduced = di + net.length(i, j) - self.dist[j];
                if reduced < -NEG_TOL {
                    return Some((i, j, reduced));
                }
            }
        }
        None
    }

    /// True if `anc` lies on the tree path from the root to `v` (inclusive).
    fn is_ancestor(&self, anc: usize, mut v: usize) -> bool {
        loop {
            if v == anc {
                return true;
            }
            if v == ROOT {
                return false;
            }
            v = self.pred[v];
        }
    }

    /// Moves the subtree of `l` under `k` and shifts its distances.
    fn reattach(&mut self, l: usize, k: usize, delta: f64) {
        let old = self.pred[l];
        let siblings = &mut self.children[old];
        let pos = siblings.iter().position(|&c| c == l).expect("tree child");
        siblings.swap_remove(pos);
        self.children[k].push(l);
        self.pred[l] = k;

        self.stack.clear();
        self.stack.push(l);
        while let Some(v) = self.stack.pop() {
            self.dist[v] += delta;
            self.stack.extend_from_slice(&self.children[v]);
        }
    }
}

/// Convenience wrapper around a fresh [`NetworkSimplex`].
pub fn shortest_paths_or_cycle(net: &Network) -> SpOutcome {
    NetworkSimplex::new().solve(net)
}

/// Bellman-Ford label correction from node 1 with predecessor-graph cycle
/// extraction. Independent of the simplex engine.
pub fn bellman_ford(net: &Network) -> SpOutcome {
    let n = net.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    dist[0] = 0.0;
    for _pass in 0..n {
        let mut changed = false;
        for i in 0..n {
            if !dist[i].is_finite() {
                continue;
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let cand = dist[i] + net.length(i, j);
                if cand < dist[j] - NEG_TOL {
                    dist[j] = cand;
                    pred[j] = i;
                    changed = true;
                }
            }
        }
        if !changed {
            return SpOutcome::Distances(dist);
        }
        if let Some(cycle) = predecessor_cycle(&pred) {
            let length = net.cycle_length(&cycle);
            if length < -NEG_TOL {
                return SpOutcome::NegativeCycle { cycle, length };
            }
        }
    }
    let cycle = predecessor_cycle(&pred).expect("n passes without convergence leave a cycle");
    let length = net.cycle_length(&cycle);
    SpOutcome::NegativeCycle { cycle, length }
}

/// Any cycle in the functional graph `v -> pred[v]`, reported in forward
/// (arc) direction.
fn predecessor_cycle(pred: &[usize]) -> Option<Cycle> {
    let n = pred.len();
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on current walk, 2 done
    for start in 0..n {
        let mut walk = Vec::new();
        let mut v = start;
        while v != usize::MAX && state[v] == 0 {
            state[v] = 1;
            walk.push(v);
            v = pred[v];
        }
        if v != usize::MAX && state[v] == 1 {
            let pos = walk.iter().position(|&x| x == v).unwrap();
            let mut nodes = walk[pos..].to_vec();
            // walk follows pred pointers, i.e. arcs backwards
            nodes.reverse();
            return Some(Cycle::new(nodes));
        }
        for &x in &walk {
            state[x] = 2;
        }
    }
    None
}
