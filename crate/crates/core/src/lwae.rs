//! Minimizing the worst absolute deviation `max |a_ij - v_i/v_j|`.
//!
//! For a fixed level `z` the deviation constraints form a system of
//! difference constraints `w_j - w_i <= l_ij(z)` on the log-weights, which is
//! feasible exactly when the network `N(z)` has no negative cycle. Two outer
//! loops search for the smallest feasible `z`:
//!
//! * [`solve_bisection`] halves `[0, z_max]`, starting from the deviation of
//!   the geometric-mean vector;
//! * [`solve_cycle_cancel`] starts at `z = 0` and, whenever a negative cycle
//!   `C` is found, jumps to the root of `l_C(z)`. Because every `l_C` is
//!   strictly increasing, a canceled cycle never returns.
//!
//! Both are generic over [`ParametricLengths`] so they also run on the
//! reduced networks built during refinement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arclen::{cycle_length, Cycle, ParametricLengths};
use crate::baseline::geometric_mean_vector;
use crate::metrics::g_infinity;
use crate::netflow::{Network, NetworkSimplex, SpOutcome};
use crate::pcm::Pcm;
use crate::rootfind::{anderson_bjorck, Bracket, RootError};
use crate::weights::WeightVector;

pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Upper-bound doublings tried before giving up on a bracket.
const MAX_EXPANSIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Bisection,
    #[default]
    CycleCancel,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bisection => "bisection",
            Method::CycleCancel => "cycle-cancel",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bisection" => Ok(Method::Bisection),
            "cycle-cancel" => Ok(Method::CycleCancel),
            other => Err(format!(
                "unknown method {other:?}; expected bisection or cycle-cancel"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("root finding failed: {0}")]
    Root(#[from] RootError),
    #[error("cycle {0} was canceled twice")]
    RepeatedCycle(Cycle),
    #[error("no feasible level found above {0}")]
    NoFeasibleLevel(f64),
}

/// Outcome of one feasibility check at a fixed level.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// Weights from the shortest distances, `v_j = exp(d_j)`.
    Feasible(WeightVector),
    Infeasible { cycle: Cycle, length: f64 },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    /// Smallest level found feasible.
    pub z_opt: f64,
    /// Largest level known to be infeasible (0 if none was certified).
    pub z_lower: f64,
    pub weights: WeightVector,
    pub method: Method,
    /// Bisection halvings, or canceled cycles.
    pub iterations: usize,
    /// Feasibility checks, i.e. shortest-path problems solved.
    pub subproblems_solved: usize,
    /// Root-finder evaluations (cycle canceling only).
    pub root_evaluations: usize,
    /// Canceled cycles in order.
    pub cycle_trace: Vec<Cycle>,
    /// Level of every feasibility check in order.
    pub z_trace: Vec<f64>,
    pub epsilon: f64,
}

/// Reusable solver state: one network simplex engine.
#[derive(Debug, Default, Clone)]
pub struct Solver {
    engine: NetworkSimplex,
}

impl Solver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check<P: ParametricLengths + ?Sized>(&mut self, p: &P, z: f64) -> Feasibility {
        let net = Network::from_lengths(p, z);
        match self.engine.solve(&net) {
            SpOutcome::Distances(d) => Feasibility::Feasible(WeightVector::from_log(&d)),
            SpOutcome::NegativeCycle { cycle, length } => Feasibility::Infeasible { cycle, length },
        }
    }

    /// Bisection on `[0, upper]`. `upper_logs` must be feasible at `upper`;
    /// it is returned unchanged if no smaller level is found feasible.
    pub fn bisection<P: ParametricLengths + ?Sized>(
        &mut self,
        p: &P,
        upper: f64,
        upper_logs: &[f64],
        epsilon: f64,
    ) -> SolveReport {
        assert!(epsilon > 0.0, "epsilon must be positive");
        let mut z_min = 0.0;
        let mut z_max = upper;
        let mut weights = WeightVector::from_log(upper_logs);
        let mut iterations = 0;
        let mut z_trace = Vec::new();
        while z_max - z_min >= epsilon {
            let z = 0.5 * (z_min + z_max);
            z_trace.push(z);
            iterations += 1;
            match self.check(p, z) {
                Feasibility::Feasible(v) => {
                    z_max = z;
                    weights = v;
                }
                Feasibility::Infeasible { .. } => z_min = z,
            }
        }
        SolveReport {
            z_opt: z_max,
            z_lower: z_min,
            weights,
            method: Method::Bisection,
            iterations,
            // the starting level counts as one solved subproblem
            subproblems_solved: iterations + 1,
            root_evaluations: 0,
            cycle_trace: Vec::new(),
            z_trace,
            epsilon,
        }
    }

    /// Successive negative-cycle canceling from `start`. `upper` is any
    /// level believed feasible; it only seeds the root-finding brackets and
    /// is enlarged if a cycle is still negative there.
    pub fn cycle_cancel<P: ParametricLengths + ?Sized>(
        &mut self,
        p: &P,
        start: f64,
        upper: f64,
        epsilon: f64,
    ) -> Result<SolveReport, SolveError> {
        assert!(epsilon > 0.0, "epsilon must be positive");
        let mut z = start;
        let mut z_lower = 0.0;
        let mut cycle_trace: Vec<Cycle> = Vec::new();
        let mut z_trace = Vec::new();
        let mut root_evaluations = 0;
        loop {
            z_trace.push(z);
            let (cycle, length) = match self.check(p, z) {
                Feasibility::Feasible(weights) => {
                    return Ok(SolveReport {
                        z_opt: z,
                        z_lower,
                        weights,
                        method: Method::CycleCancel,
                        iterations: cycle_trace.len(),
                        subproblems_solved: z_trace.len(),
                        root_evaluations,
                        cycle_trace,
                        z_trace,
                        epsilon,
                    });
                }
                Feasibility::Infeasible { cycle, length } => (cycle, length),
            };
            if cycle_trace.contains(&cycle) {
                return Err(SolveError::RepeatedCycle(cycle));
            }
            let f = |x: f64| cycle_length(p, &cycle, x);
            let (hi, f_hi) = feasible_end(f, z.max(upper))?;
            let bracket = Bracket::with_values(z, hi, length, f_hi)?;
            let root = anderson_bjorck(f, bracket, epsilon)?;
            root_evaluations += root.iterations;
            z_lower = root.lower;
            z = root.z;
            cycle_trace.push(cycle);
        }
    }
}

/// Smallest `upper * 2^k` (shifted off zero) where `f` is nonnegative.
fn feasible_end<F: Fn(f64) -> f64>(f: F, upper: f64) -> Result<(f64, f64), SolveError> {
    let mut hi = upper;
    for _ in 0..MAX_EXPANSIONS {
        let f_hi = f(hi);
        if f_hi >= 0.0 {
            return Ok((hi, f_hi));
        }
        hi = 2.0 * hi + 1e-9;
    }
    Err(SolveError::NoFeasibleLevel(upper))
}

/// Worst deviation of the geometric-mean vector: a level that is always
/// feasible, together with its log-weights.
pub fn initial_upper_bound(a: &Pcm) -> (f64, WeightVector) {
    let v = geometric_mean_vector(a);
    (g_infinity(a, v.values()), v)
}

/// Feasibility of level `z` for the matrix.
pub fn check_feasible(a: &Pcm, z: f64) -> Feasibility {
    Solver::new().check(a, z)
}

pub fn solve_bisection(a: &Pcm, epsilon: f64) -> SolveReport {
    let (upper, v) = initial_upper_bound(a);
    Solver::new().bisection(a, upper, v.logs(), epsilon)
}

pub fn solve_cycle_cancel(a: &Pcm, epsilon: f64) -> Result<SolveReport, SolveError> {
    let (upper, _) = initial_upper_bound(a);
    Solver::new().cycle_cancel(a, 0.0, upper, epsilon)
}

pub fn solve(a: &Pcm, method: Method, epsilon: f64) -> Result<SolveReport, SolveError> {
    match method {
        Method::Bisection => Ok(solve_bisection(a, epsilon)),
        Method::CycleCancel => solve_cycle_cancel(a, epsilon),
    }
}
