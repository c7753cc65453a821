//! Refining a worst-deviation optimum into a unique Pareto-optimal vector.
//!
//! At an optimum `(w, z)` the binding constraints form a digraph `D`. Its
//! strongly connected components are rigid: every optimal vector keeps their
//! internal ratios. The optimal set has dimension `#components - 1`, so the
//! optimum is unique exactly when `D` is strongly connected. Otherwise the
//! components are contracted into single nodes and the worst deviation over
//! the remaining pairs is minimized again, until one component is left.

mod binding;
mod pareto;
mod reduce;

pub use binding::{binding_digraph, component_offsets, BindingDigraph};
pub use pareto::{
    exact_pareto_check, verify_pareto, ExactCheck, ParetoAudit, DOMINANCE_SLACK,
    EXACT_CHECK_MAX_N, IMPROVEMENT_MIN,
};
pub use reduce::{reduce_network, Component, ComponentRegistry, ReducedProblem};

use serde::Serialize;
use thiserror::Error;

use crate::arclen::ParametricLengths;
use crate::lwae::{initial_upper_bound, Method, SolveError, SolveReport, Solver};
use crate::pcm::Pcm;
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError {
    #[error("point is not feasible: arc ({i},{j}) violated by {violation:e}")]
    NotFeasible { i: usize, j: usize, violation: f64 },
    #[error("binding digraph has no directed cycle")]
    NoCycleCore,
    #[error("binding digraph is already strongly connected")]
    AlreadyConnected,
    #[error("vertex {0} is not in the component")]
    NotInComponent(usize),
    #[error("vertex {vertex} is not reachable from {reference} along binding arcs")]
    Unreachable { vertex: usize, reference: usize },
    #[error("offset of vertex {vertex} is {walked} along binding arcs but {direct} in the solution")]
    OffsetMismatch { vertex: usize, walked: f64, direct: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Binding tolerance used when none is given: `max(1e-7, 10 * epsilon)`.
pub fn default_tau(epsilon: f64) -> f64 {
    (10.0 * epsilon).max(1e-7)
}

/// Tolerance for re-solving each level before reading off binding arcs.
fn polish_epsilon(epsilon: f64, z: f64) -> f64 {
    epsilon.min(1e-12 * (1.0 + z))
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinementReport {
    /// Optimal worst deviation of each level, non-increasing.
    pub levels: Vec<f64>,
    pub final_weights: WeightVector,
    /// The plain worst-deviation solve at the requested tolerance.
    pub first_solve: SolveReport,
    pub dimension_at_first_level: usize,
    pub unique_at_first_level: bool,
    /// Binding arcs on directed cycles at the first level, 1-based.
    pub first_level_core: Vec<(usize, usize)>,
    /// Worst-deviation problems solved, one per level.
    pub iterations: usize,
    /// Feasibility checks over all levels, polishing included.
    pub subproblems_solved: usize,
    /// Components frozen at each level, 1-based.
    pub frozen: Vec<Vec<Vec<usize>>>,
}

/// Solves the worst-deviation problem, then repeatedly freezes the rigid
/// components and re-optimizes the rest until the solution is unique.
pub fn refine_to_unique(
    a: &Pcm,
    method: Method,
    epsilon: f64,
    tau: f64,
) -> Result<RefinementReport, RefineError> {
    let n = a.n();
    let mut solver = Solver::new();
    let (upper, gm) = initial_upper_bound(a);
    let first = match method {
        Method::Bisection => solver.bisection(a, upper, gm.logs(), epsilon),
        Method::CycleCancel => solver.cycle_cancel(a, 0.0, upper, epsilon)?,
    };
    let mut subproblems = first.subproblems_solved;
    let level = polish(&mut solver, a, &first, epsilon)?;
    subproblems += level.subproblems_solved;

    let mut z = level.z_opt;
    let mut node_logs = level.weights.logs().to_vec();
    let mut levels = vec![z];
    let mut d = binding_digraph(a, &node_logs, z, tau)?;
    let dimension_at_first_level = d.solution_dimension()?;
    let unique_at_first_level = dimension_at_first_level == 0;
    let first_level_core = d.cycle_core().iter().map(|&(i, j)| (i + 1, j + 1)).collect();
    let mut registry = ComponentRegistry::singletons(n);
    let mut frozen = Vec::new();
    let mut reduced: Option<ReducedProblem> = None;

    while !d.is_strongly_connected() {
        if !d.has_cycle() {
            return Err(RefineError::NoCycleCore);
        }
        frozen.push(
            d.sccs()
                .iter()
                .filter(|c| c.len() > 1)
                .map(|c| {
                    let mut v: Vec<usize> = c
                        .iter()
                        .flat_map(|&node| registry.components()[node].members.iter())
                        .map(|m| m.0 + 1)
                        .collect();
                    v.sort_unstable();
                    v
                })
                .collect(),
        );
        let next = match &reduced {
            None => reduce_network(a, &registry, a, &d, &node_logs, tau)?,
            Some(r) => reduce_network(a, &registry, r, &d, &node_logs, tau)?,
        };
        let prev_w = registry.expand(&node_logs);
        registry = next.registry().clone();
        node_logs = registry.contract(&prev_w);
        if next.node_count() == 1 {
            break;
        }
        let report = match method {
            Method::Bisection => solver.bisection(&next, z, &node_logs, epsilon),
            Method::CycleCancel => solver.cycle_cancel(&next, 0.0, z, epsilon)?,
        };
        subproblems += report.subproblems_solved;
        let polished = polish(&mut solver, &next, &report, epsilon)?;
        subproblems += polished.subproblems_solved;
        z = polished.z_opt;
        node_logs = polished.weights.logs().to_vec();
        levels.push(z);
        d = binding_digraph(&next, &node_logs, z, tau)?;
        reduced = Some(next);
    }

    let final_w = registry.expand(&node_logs);
    Ok(RefinementReport {
        iterations: levels.len(),
        levels,
        final_weights: WeightVector::from_log(&final_w),
        first_solve: first,
        dimension_at_first_level,
        unique_at_first_level,
        first_level_core,
        subproblems_solved: subproblems,
        frozen,
    })
}

/// Narrows a level found at tolerance `epsilon` to near machine precision,
/// so that binding arcs can be told apart from nearly binding ones.
fn polish<P: ParametricLengths + ?Sized>(
    solver: &mut Solver,
    p: &P,
    report: &SolveReport,
    epsilon: f64,
) -> Result<SolveReport, SolveError> {
    let tight = polish_epsilon(epsilon, report.z_opt);
    solver.cycle_cancel(p, report.z_lower, report.z_opt, tight)
}
