//! Contracting frozen components into single nodes.

use serde::Serialize;

use super::binding::{component_offsets, BindingDigraph};
use super::RefineError;
use crate::arclen::{ArcLength, ParametricLengths};
use crate::pcm::Pcm;

/// A group of original alternatives whose log-ratios are fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    /// Smallest member, with offset 0.
    pub reference: usize,
    /// `(vertex, c_k)` with `w_k = w_reference + c_k`, sorted by vertex.
    pub members: Vec<(usize, f64)>,
}

/// Partition of the original alternatives into components, ordered by
/// reference vertex. Node `I` of a reduced problem is component `I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRegistry {
    components: Vec<Component>,
}

impl ComponentRegistry {
    pub fn singletons(n: usize) -> Self {
        ComponentRegistry {
            components: (0..n)
                .map(|k| Component {
                    reference: k,
                    members: vec![(k, 0.0)],
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Merges the current nodes group by group. `groups[g]` lists current
    /// nodes with their offsets relative to the group's first node, which
    /// must be its smallest.
    pub fn merge(&self, groups: &[Vec<(usize, f64)>]) -> Self {
        let mut components: Vec<Component> = groups
            .iter()
            .map(|g| {
                let mut members = Vec::new();
                for &(node, shift) in g {
                    for &(k, c) in &self.components[node].members {
                        members.push((k, c + shift));
                    }
                }
                members.sort_unstable_by_key(|m| m.0);
                Component {
                    reference: self.components[g[0].0].reference,
                    members,
                }
            })
            .collect();
        components.sort_unstable_by_key(|c| c.reference);
        ComponentRegistry { components }
    }

    /// Original-space log-weights from per-component log-weights.
    pub fn expand(&self, node_logs: &[f64]) -> Vec<f64> {
        assert_eq!(node_logs.len(), self.len());
        let n = self.components.iter().map(|c| c.members.len()).sum();
        let mut w = vec![0.0; n];
        for (comp, &base) in self.components.iter().zip(node_logs) {
            for &(k, c) in &comp.members {
                w[k] = base + c;
            }
        }
        w
    }

    /// Per-component log-weights read off an original-space vector at the
    /// reference vertices.
    pub fn contract(&self, w: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| w[c.reference]).collect()
    }
}

/// The network on components: arc `I -> J` has length
/// `min over p in C_I, q in C_J of l_pq(z) + c_p - c_q`.
#[derive(Debug, Clone)]
pub struct ReducedProblem<'a> {
    base: &'a Pcm,
    registry: ComponentRegistry,
    // arcs[I * m + J]: (l_pq, c_p - c_q) for every member pair
    arcs: Vec<Vec<(ArcLength, f64)>>,
}

impl<'a> ReducedProblem<'a> {
    pub fn new(base: &'a Pcm, registry: ComponentRegistry) -> Self {
        let m = registry.len();
        let comps = registry.components();
        let mut arcs = Vec::with_capacity(m * m);
        for ci in comps {
            for cj in comps {
                let mut list = Vec::new();
                if ci.reference != cj.reference {
                    for &(p, cp) in &ci.members {
                        for &(q, cq) in &cj.members {
                            list.push((base.arc(p, q), cp - cq));
                        }
                    }
                }
                arcs.push(list);
            }
        }
        ReducedProblem {
            base,
            registry,
            arcs,
        }
    }

    pub fn base(&self) -> &Pcm {
        self.base
    }

    pub fn registry(&self) -> &ComponentRegistry {
        &self.registry
    }
}

impl ParametricLengths for ReducedProblem<'_> {
    fn node_count(&self) -> usize {
        self.registry.len()
    }

    fn arc_length(&self, from: usize, to: usize, z: f64) -> f64 {
        let m = self.registry.len();
        self.arcs[from * m + to]
            .iter()
            .map(|(l, shift)| l.eval(z) + shift)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Freezes every strongly connected component of `d` and returns the
/// network on the merged components.
///
/// `current` is the problem `d` was built from, whose nodes are the
/// components of `registry`, and `node_logs` its solution.
pub fn reduce_network<'a, P: ParametricLengths + ?Sized>(
    base: &'a Pcm,
    registry: &ComponentRegistry,
    current: &P,
    d: &BindingDigraph,
    node_logs: &[f64],
    tau: f64,
) -> Result<ReducedProblem<'a>, RefineError> {
    if d.is_strongly_connected() {
        return Err(RefineError::AlreadyConnected);
    }
    let groups = d
        .sccs()
        .iter()
        .map(|scc| component_offsets(current, d, node_logs, scc, scc[0], tau))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ReducedProblem::new(base, registry.merge(&groups)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::fixtures::segment4;
    use crate::refine::binding::binding_digraph;

    #[test]
    fn singleton_reduction_matches_matrix() {
        let a = segment4();
        let r = ReducedProblem::new(&a, ComponentRegistry::singletons(4));
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    for z in [0.0, 0.3, 1.7] {
                        assert_eq!(r.arc_length(i, j, z), a.arc_length(i, j, z));
                    }
                }
            }
        }
    }

    #[test]
    fn segment_reduces_to_two_nodes() {
        let a = segment4();
        let w: Vec<f64> = [1.0f64, 0.4, 3.0, 0.625].iter().map(|x| x.ln()).collect();
        let d = binding_digraph(&a, &w, 0.5, 1e-9).unwrap();
        let reg = ComponentRegistry::singletons(4);
        let r = reduce_network(&a, &reg, &a, &d, &w, 1e-9).unwrap();
        assert_eq!(r.node_count(), 2);
        let comps = r.registry().components();
        assert_eq!(comps[0].reference, 0);
        assert_eq!(comps[1].members, vec![(3, 0.0)]);
        let back = r.registry().expand(&r.registry().contract(&w));
        for (x, y) in back.iter().zip(&w) {
            assert!((x - y).abs() < 1e-12);
        }
        // Brute-force minimum over member pairs.
        let c = [0.0, 0.4f64.ln(), 3f64.ln()];
        for z in [0.1, 0.45, 0.5] {
            let out = (0..3)
                .map(|p| a.arc_length(p, 3, z) + c[p])
                .fold(f64::INFINITY, f64::min);
            let inn = (0..3)
                .map(|q| a.arc_length(3, q, z) - c[q])
                .fold(f64::INFINITY, f64::min);
            assert!((r.arc_length(0, 1, z) - out).abs() < 1e-12);
            assert!((r.arc_length(1, 0, z) - inn).abs() < 1e-12);
        }
        // At the reduced optimum both arcs between the two nodes are tight.
        let r2 = crate::lwae::Solver::new().cycle_cancel(&r, 0.0, 0.5, 1e-13).unwrap();
        let d2 = binding_digraph(&r, r2.weights.logs(), r2.z_opt, 1e-9).unwrap();
        assert!(r2.z_opt > 0.4 && d2.has_two_cycle() && d2.is_strongly_connected());
        for z in [0.0, 0.2, 0.4] {
            assert!(r.arc_length(0, 1, z) < r.arc_length(0, 1, z + 1e-3));
        }

        let connected = BindingDigraph::from_arcs(4, 0.5, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(matches!(
            reduce_network(&a, &reg, &a, &connected, &w, 1e-9),
            Err(RefineError::AlreadyConnected)
        ));
    }
}
