//! Priority vectors for pairwise comparison matrices that minimize the worst
//! absolute deviation `max |a_ij - v_i/v_j|`.
//!
//! The log transform turns each level `z` of the deviation into a shortest
//! path problem with parametric arc lengths. [`lwae`] searches for the
//! smallest feasible level by bisection or by canceling negative cycles, and
//! [`refine`] turns the (possibly non-unique) optimum into the unique
//! Pareto-optimal vector.

pub mod arclen;
pub mod baseline;
pub mod experiment;
pub mod lwae;
pub mod metrics;
pub mod netflow;
pub mod pcm;
pub mod random;
pub mod refine;
pub mod rootfind;
pub mod weights;

pub use arclen::{ArcLength, Cycle, ParametricLengths};
pub use lwae::{solve, Feasibility, Method, SolveError, SolveReport, Solver, DEFAULT_EPSILON};
pub use metrics::{g_infinity, gp_error};
pub use pcm::{ParseError, Pcm, PcmError};
pub use random::RngStream;
pub use refine::{refine_to_unique, RefineError, RefinementReport};
pub use weights::WeightVector;
