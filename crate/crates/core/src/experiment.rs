//! Timing experiments on random matrices, summarized per `(n, a_max)` cell.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::lwae::{solve, Method, SolveError};
use crate::random::{random_pcm, RngStream};
use crate::refine::{default_tau, refine_to_unique, RefineError};

/// Sample statistics: mean, sample standard deviation, extremes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub avg: f64,
    pub dev: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    /// # Panics
    /// On an empty sample.
    pub fn from_samples(xs: &[f64]) -> Self {
        assert!(!xs.is_empty(), "statistics of an empty sample");
        let k = xs.len() as f64;
        let avg = xs.iter().sum::<f64>() / k;
        let dev = if xs.len() > 1 {
            (xs.iter().map(|x| (x - avg).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        Stats {
            avg,
            dev,
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Measurements for one random matrix. Times are in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub a_max: u32,
    pub index: usize,
    pub z_opt: f64,
    /// Refinement with bisection on every level.
    pub time_bisect: f64,
    /// Refinement with cycle canceling on every level.
    pub time_cancel: f64,
    /// First worst-deviation solve only.
    pub time_bisect_first: f64,
    pub time_cancel_first: f64,
    /// Worst-deviation problems solved during refinement.
    pub lw: usize,
    /// Feasibility checks of the first solve.
    pub checks_bisect: usize,
    pub checks_cancel: usize,
    pub unique_at_first_level: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub n: usize,
    pub a_max: u32,
    pub trials: usize,
    pub time_bisect: Stats,
    pub time_cancel: Stats,
    pub lw: Stats,
    pub time_bisect_first: Stats,
    pub time_cancel_first: Stats,
    pub checks_bisect: Stats,
    pub checks_cancel: Stats,
}

impl BenchSummary {
    /// # Panics
    /// If `records` is empty or mixes cells.
    pub fn from_records(records: &[InstanceRecord]) -> Self {
        let first = records.first().expect("no records");
        assert!(
            records.iter().all(|r| r.n == first.n && r.a_max == first.a_max),
            "records from different cells"
        );
        let stat = |f: fn(&InstanceRecord) -> f64| {
            Stats::from_samples(&records.iter().map(f).collect::<Vec<_>>())
        };
        BenchSummary {
            n: first.n,
            a_max: first.a_max,
            trials: records.len(),
            time_bisect: stat(|r| r.time_bisect),
            time_cancel: stat(|r| r.time_cancel),
            lw: stat(|r| r.lw as f64),
            time_bisect_first: stat(|r| r.time_bisect_first),
            time_cancel_first: stat(|r| r.time_cancel_first),
            checks_bisect: stat(|r| r.checks_bisect as f64),
            checks_cancel: stat(|r| r.checks_cancel as f64),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("instance {index} (n={n}, a_max={a_max}): {source}")]
    Solve {
        n: usize,
        a_max: u32,
        index: usize,
        source: SolveError,
    },
    #[error("instance {index} (n={n}, a_max={a_max}): {source}")]
    Refine {
        n: usize,
        a_max: u32,
        index: usize,
        source: RefineError,
    },
}

/// Seed of the stream for one cell, so cells can be run in any order.
pub fn cell_seed(seed: u64, n: usize, a_max: u32) -> u64 {
    seed ^ ((n as u64) << 32) ^ (u64::from(a_max) << 16)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Runs one matrix through both methods, with and without refinement.
pub fn run_instance(
    a: &crate::pcm::Pcm,
    a_max: u32,
    index: usize,
    epsilon: f64,
) -> Result<InstanceRecord, BenchError> {
    let n = a.n();
    let tau = default_tau(epsilon);
    let solve_err = |source| BenchError::Solve {
        n,
        a_max,
        index,
        source,
    };
    let refine_err = |source| BenchError::Refine {
        n,
        a_max,
        index,
        source,
    };
    let (b, time_bisect_first) = timed(|| solve(a, Method::Bisection, epsilon));
    let b = b.map_err(solve_err)?;
    let (c, time_cancel_first) = timed(|| solve(a, Method::CycleCancel, epsilon));
    let c = c.map_err(solve_err)?;
    let (rb, time_bisect) = timed(|| refine_to_unique(a, Method::Bisection, epsilon, tau));
    rb.map_err(refine_err)?;
    let (rc, time_cancel) = timed(|| refine_to_unique(a, Method::CycleCancel, epsilon, tau));
    let rc = rc.map_err(refine_err)?;
    Ok(InstanceRecord {
        n,
        a_max,
        index,
        z_opt: c.z_opt,
        time_bisect,
        time_cancel,
        time_bisect_first,
        time_cancel_first,
        lw: rc.iterations,
        checks_bisect: b.subproblems_solved,
        checks_cancel: c.subproblems_solved,
        unique_at_first_level: rc.unique_at_first_level,
    })
}

/// Runs `trials` random matrices for every `(n, a_max)` pair, one cell after
/// another on the calling thread.
pub fn run_bench(
    n_list: &[usize],
    a_max_list: &[u32],
    trials: usize,
    epsilon: f64,
    seed: u64,
) -> Result<(Vec<BenchSummary>, Vec<InstanceRecord>), BenchError> {
    assert!(trials >= 1, "need at least one trial");
    let mut summaries = Vec::new();
    let mut all = Vec::new();
    for &a_max in a_max_list {
        for &n in n_list {
            let mut rng = RngStream::new(cell_seed(seed, n, a_max));
            let mut records = Vec::with_capacity(trials);
            for index in 0..trials {
                let a = random_pcm(n, a_max, &mut rng);
                records.push(run_instance(&a, a_max, index, epsilon)?);
            }
            summaries.push(BenchSummary::from_records(&records));
            all.extend(records);
        }
    }
    Ok((summaries, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_of_known_sample() {
        let s = Stats::from_samples(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(s.avg, 5.0);
        assert!((s.dev - (32.0f64 / 7.0).sqrt()).abs() < 1e-15);
        assert_eq!((s.min, s.max), (2.0, 9.0));
        assert_eq!(Stats::from_samples(&[3.0]).dev, 0.0);
    }

    #[test]
    fn small_bench_is_consistent() {
        let (summaries, records) = run_bench(&[4, 6], &[3, 5], 5, 1e-6, 9).unwrap();
        assert_eq!(summaries.len(), 4);
        assert_eq!(records.len(), 20);
        for s in &summaries {
            for st in [s.time_bisect, s.time_cancel, s.lw, s.checks_cancel] {
                assert!(st.min <= st.avg && st.avg <= st.max && st.dev >= 0.0);
            }
            assert!(s.lw.min >= 1.0);
        }
        let (again, _) = run_bench(&[4, 6], &[3, 5], 5, 1e-6, 9).unwrap();
        for (x, y) in summaries.iter().zip(&again) {
            assert_eq!(x.lw, y.lw);
            assert_eq!(x.checks_bisect, y.checks_bisect);
        }
    }

    #[test]
    fn summary_json_round_trip() {
        let (summaries, records) = run_bench(&[5], &[5], 3, 1e-6, 4).unwrap();
        let text = serde_json::to_string(&summaries).unwrap();
        let back: Vec<BenchSummary> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, summaries);
        let text = serde_json::to_string(&records).unwrap();
        assert_eq!(serde_json::from_str::<Vec<InstanceRecord>>(&text).unwrap(), records);
    }

    #[test]
    fn two_by_two_is_always_consistent() {
        let (_, records) = run_bench(&[2], &[10], 20, 1e-6, 1).unwrap();
        assert!(records.iter().all(|r| r.z_opt == 0.0 && r.lw == 1));
    }
}
