//! The digraph of binding constraints at a feasible point.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::RefineError;
use crate::arclen::ParametricLengths;

/// Arcs `(i, j)` whose constraint `w_j - w_i <= l_ij(z)` holds with equality
/// (within `tau` in log space), and their strongly connected components.
#[derive(Debug, Clone, PartialEq)]
pub struct BindingDigraph {
    n: usize,
    z: f64,
    arcs: Vec<(usize, usize)>,
    sccs: Vec<Vec<usize>>,
    component: Vec<usize>,
}

/// Builds `D(v, z)` from log-weights `w`. Fails if some constraint is
/// violated by more than `tau`.
pub fn binding_digraph<P: ParametricLengths + ?Sized>(
    p: &P,
    w: &[f64],
    z: f64,
    tau: f64,
) -> Result<BindingDigraph, RefineError> {
    let n = p.node_count();
    assert_eq!(w.len(), n, "log-weight length must match the node count");
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let slack = p.arc_length(i, j, z) - (w[j] - w[i]);
            if slack < -tau {
                return Err(RefineError::NotFeasible {
                    i: i + 1,
                    j: j + 1,
                    violation: -slack,
                });
            }
            if slack <= tau {
                arcs.push((i, j));
            }
        }
    }
    Ok(BindingDigraph::from_arcs(n, z, arcs))
}

impl BindingDigraph {
    pub fn from_arcs(n: usize, z: f64, arcs: Vec<(usize, usize)>) -> Self {
        let mut g = DiGraph::<(), ()>::with_capacity(n, arcs.len());
        for _ in 0..n {
            g.add_node(());
        }
        for &(i, j) in &arcs {
            g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
        }
        let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
                c.sort_unstable();
                c
            })
            .collect();
        sccs.sort_unstable_by_key(|c| c[0]);
        let mut component = vec![0; n];
        for (k, c) in sccs.iter().enumerate() {
            for &v in c {
                component[v] = k;
            }
        }
        BindingDigraph {
            n,
            z,
            arcs,
            sccs,
            component,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> f64 {
        self.z
    }

    /// Binding arcs in row-major order, 0-based.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.arcs.binary_search(&(i, j)).is_ok()
    }

    /// Strongly connected components, each sorted, ordered by smallest
    /// vertex. Trivial components are included.
    pub fn sccs(&self) -> &[Vec<usize>] {
        &self.sccs
    }

    pub fn scc_count(&self) -> usize {
        self.sccs.len()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component[v]
    }

    /// Arcs lying on some directed cycle: those inside one component.
    pub fn cycle_core(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .copied()
            .filter(|&(i, j)| self.component[i] == self.component[j])
            .collect()
    }

    pub fn has_cycle(&self) -> bool {
        self.sccs.iter().any(|c| c.len() > 1)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.sccs.len() == 1
    }

    /// Whether both `(i, j)` and `(j, i)` are binding for some pair.
    pub fn has_two_cycle(&self) -> bool {
        self.arcs.iter().any(|&(i, j)| self.contains(j, i))
    }

    /// Dimension of the optimal set: components minus one.
    pub fn solution_dimension(&self) -> Result<usize, RefineError> {
        if !self.has_cycle() {
            return Err(RefineError::NoCycleCore);
        }
        Ok(self.sccs.len() - 1)
    }

    /// The optimum is unique iff the binding digraph is strongly connected.
    pub fn is_unique(&self) -> Result<bool, RefineError> {
        Ok(self.solution_dimension()? == 0)
    }
}

/// Offsets `c_k = w_k - w_ref` for the vertices of one strongly connected
/// component, obtained by walking binding arcs from the reference vertex
/// (`c_q = c_p + l_pq(z)` along arc `(p, q)`). The walk is cross-checked
/// against the given log-weights.
///
/// Returns `(vertex, offset)` pairs sorted by vertex.
pub fn component_offsets<P: ParametricLengths + ?Sized>(
    p: &P,
    d: &BindingDigraph,
    w: &[f64],
    component: &[usize],
    reference: usize,
    tau: f64,
) -> Result<Vec<(usize, f64)>, RefineError> {
    if !component.contains(&reference) {
        return Err(RefineError::NotInComponent(reference + 1));
    }
    let z = d.level();
    let mut offset = vec![f64::NAN; d.node_count()];
    offset[reference] = 0.0;
    let mut queue = std::collections::VecDeque::from([reference]);
    while let Some(u) = queue.pop_front() {
        for &(i, j) in d.arcs() {
            if i == u && offset[j].is_nan() && component.contains(&j) {
                offset[j] = offset[u] + p.arc_length(u, j, z);
                queue.push_back(j);
            }
        }
    }
    let mut out = Vec::with_capacity(component.len());
    for &k in component {
        let walked = offset[k];
        if walked.is_nan() {
            return Err(RefineError::Unreachable {
                vertex: k + 1,
                reference: reference + 1,
            });
        }
        let direct = w[k] - w[reference];
        if (walked - direct).abs() > 2.0 * tau {
            return Err(RefineError::OffsetMismatch {
                vertex: k + 1,
                walked,
                direct,
            });
        }
        out.push((k, walked));
    }
    out.sort_unstable_by_key(|e| e.0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::fixtures::{a3, segment4};
    use crate::pcm::Pcm;

    fn z_star() -> f64 {
        (33f64.sqrt() - 5.0) / 2.0
    }

    fn a3_optimum() -> Vec<f64> {
        let z = z_star();
        vec![0.0, -(2.0 + z).ln(), -(6.0 - z).ln()]
    }

    #[test]
    fn a3_binding_cycle() {
        let d = binding_digraph(&a3(), &a3_optimum(), z_star(), 1e-9).unwrap();
        assert_eq!(d.arcs(), &[(0, 2), (1, 0), (2, 1)]);
        assert!(d.is_strongly_connected());
        assert_eq!(d.solution_dimension().unwrap(), 0);
        assert!(d.is_unique().unwrap());
        assert!(!d.has_two_cycle());
    }

    #[test]
    fn segment_endpoint_structure() {
        let a = segment4();
        let w: Vec<f64> = [1.0f64, 0.4, 3.0, 0.625].iter().map(|x| x.ln()).collect();
        let d = binding_digraph(&a, &w, 0.5, 1e-9).unwrap();
        assert_eq!(d.cycle_core(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(d.sccs(), &[vec![0, 1, 2], vec![3]]);
        assert_eq!(d.solution_dimension().unwrap(), 1);
        assert!(!d.is_unique().unwrap());
    }

    #[test]
    fn consistent_matrix_is_fully_binding() {
        let a = Pcm::from_weights(&[1.0, 2.0, 4.0]).unwrap();
        let w: Vec<f64> = [1.0f64, 2.0, 4.0].iter().map(|x| x.ln()).collect();
        let d = binding_digraph(&a, &w, 0.0, 1e-9).unwrap();
        assert_eq!(d.arcs().len(), 6);
        assert!(d.is_strongly_connected());
        assert_eq!(d.solution_dimension().unwrap(), 0);
    }

    #[test]
    fn rejects_infeasible_point() {
        let w = vec![0.0, 0.0, 0.0];
        assert!(matches!(
            binding_digraph(&a3(), &w, 0.3, 1e-9),
            Err(RefineError::NotFeasible { .. })
        ));
    }

    #[test]
    fn acyclic_digraph_has_no_dimension() {
        let d = BindingDigraph::from_arcs(3, 0.5, vec![(0, 1), (1, 2)]);
        assert_eq!(d.solution_dimension(), Err(RefineError::NoCycleCore));
    }

    #[test]
    fn offsets_follow_binding_arcs() {
        let a = a3();
        let w = a3_optimum();
        let d = binding_digraph(&a, &w, z_star(), 1e-9).unwrap();
        let c = component_offsets(&a, &d, &w, &[0, 1, 2], 0, 1e-9).unwrap();
        assert_eq!(c[0], (0, 0.0));
        assert!((c[1].1 + (2.0 + z_star()).ln()).abs() < 1e-12);
        assert!((c[2].1 + (6.0 - z_star()).ln()).abs() < 1e-12);

        let seg = segment4();
        let w: Vec<f64> = [1.0f64, 0.4, 3.0, 0.625].iter().map(|x| x.ln()).collect();
        let d = binding_digraph(&seg, &w, 0.5, 1e-9).unwrap();
        let c = component_offsets(&seg, &d, &w, &[0, 1, 2], 0, 1e-9).unwrap();
        assert!((c[1].1 - 0.4f64.ln()).abs() < 1e-12);
        assert!((c[2].1 - 3f64.ln()).abs() < 1e-12);
        assert_eq!(
            component_offsets(&seg, &d, &w, &[3], 3, 1e-9).unwrap(),
            vec![(3, 0.0)]
        );
    }
}
