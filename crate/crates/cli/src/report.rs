//! Report structures shared by the text and JSON renderings. Every number is
//! rounded to 12 significant digits once, so both renderings carry the same
//! values.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use lwae_core::baseline::{geometric_mean_vector, principal_eigenvector, saaty_index};
use lwae_core::experiment::{BenchSummary, Stats};
use lwae_core::lwae::solve as solve_lwae;
use lwae_core::metrics::gp_error;
use lwae_core::refine::{default_tau, refine_to_unique};
use lwae_core::{g_infinity, Method, Pcm, WeightVector};

use crate::Normalize;

const EIGEN_TOL: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-9;

/// `x` rounded to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn sig12_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| sig12(x)).collect()
}

pub struct SolveOptions {
    pub method: Method,
    pub epsilon: f64,
    pub refine: bool,
    pub tau: Option<f64>,
    pub normalize: Normalize,
}

#[derive(Debug, Serialize)]
pub struct PairDeviation {
    pub i: usize,
    pub j: usize,
    pub a_ij: f64,
    pub ratio: f64,
    /// `|a_ij - v_i/v_j|`
    pub deviation: f64,
    /// `|a_ji - v_j/v_i|`
    pub reverse: f64,
}

#[derive(Debug, Serialize)]
pub struct SolveOutput {
    pub n: usize,
    pub z_opt: f64,
    pub weights: Vec<f64>,
    pub normalization: &'static str,
    pub method: Method,
    /// Halvings or canceled cycles of the first solve.
    pub iterations: usize,
    /// Feasibility checks over all solves.
    pub subproblems: usize,
    pub levels: Vec<f64>,
    pub dimension: usize,
    pub unique: bool,
    pub epsilon: f64,
    pub refined: bool,
    pub max_deviation: f64,
    pub deviations: Vec<PairDeviation>,
}

fn normalized(v: &WeightVector, how: Normalize) -> (Vec<f64>, &'static str) {
    match how {
        Normalize::First => (v.values().to_vec(), "first"),
        Normalize::Sum => (v.sum_normalized(), "sum"),
    }
}

fn pair_table(a: &Pcm, v: &[f64]) -> Vec<PairDeviation> {
    let n = a.n();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let ratio = v[i] / v[j];
            out.push(PairDeviation {
                i: i + 1,
                j: j + 1,
                a_ij: sig12(a.get(i, j)),
                ratio: sig12(ratio),
                deviation: sig12((a.get(i, j) - ratio).abs()),
                reverse: sig12((a.get(j, i) - 1.0 / ratio).abs()),
            });
        }
    }
    out
}

pub fn solve(a: &Pcm, o: &SolveOptions) -> Result<SolveOutput> {
    let tau = o.tau.unwrap_or_else(|| default_tau(o.epsilon));
    // The refinement also reports the dimension of the first optimal set,
    // so it runs even when only the first level is printed.
    let refined = refine_to_unique(a, o.method, o.epsilon, tau)?;
    let (weights, levels, iterations, subproblems, z_opt) = if o.refine {
        (
            refined.final_weights.clone(),
            refined.levels.clone(),
            refined.first_solve.iterations,
            refined.subproblems_solved,
            refined.levels[0],
        )
    } else {
        let first = solve_lwae(a, o.method, o.epsilon)?;
        (
            first.weights.clone(),
            vec![first.z_opt],
            first.iterations,
            first.subproblems_solved,
            first.z_opt,
        )
    };
    let (v, normalization) = normalized(&weights, o.normalize);
    Ok(SolveOutput {
        n: a.n(),
        z_opt: sig12(z_opt),
        weights: sig12_all(&v),
        normalization,
        method: o.method,
        iterations,
        subproblems,
        levels: sig12_all(&levels),
        dimension: refined.dimension_at_first_level,
        unique: refined.unique_at_first_level,
        epsilon: o.epsilon,
        refined: o.refine,
        max_deviation: sig12(g_infinity(a, weights.values())),
        deviations: pair_table(a, weights.values()),
    })
}

pub fn write_solve_text(out: &mut impl Write, r: &SolveOutput) -> Result<()> {
    writeln!(out, "n: {}", r.n)?;
    writeln!(out, "method: {}", r.method)?;
    writeln!(out, "epsilon: {}", r.epsilon)?;
    writeln!(out, "z_opt: {}", r.z_opt)?;
    writeln!(out, "max deviation: {}", r.max_deviation)?;
    writeln!(out, "dimension: {}", r.dimension)?;
    writeln!(out, "unique: {}", r.unique)?;
    writeln!(out, "refined: {}", r.refined)?;
    let levels: Vec<String> = r.levels.iter().map(f64::to_string).collect();
    writeln!(out, "levels: {}", levels.join(" "))?;
    writeln!(out, "iterations: {}", r.iterations)?;
    writeln!(out, "subproblems: {}", r.subproblems)?;
    writeln!(out, "weights ({}):", r.normalization)?;
    for (k, v) in r.weights.iter().enumerate() {
        writeln!(out, "  v{:<4} {v}", k + 1)?;
    }
    writeln!(out, "deviations:")?;
    writeln!(
        out,
        "  {:>3} {:>3} {:>16} {:>16} {:>16} {:>16}",
        "i", "j", "a_ij", "v_i/v_j", "|a_ij-v_i/v_j|", "|a_ji-v_j/v_i|"
    )?;
    for d in &r.deviations {
        writeln!(
            out,
            "  {:>3} {:>3} {:>16} {:>16} {:>16} {:>16}",
            d.i, d.j, d.a_ij, d.ratio, d.deviation, d.reverse
        )?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct MethodRow {
    pub name: &'static str,
    pub weights: Vec<f64>,
    pub g2: f64,
    pub g_inf: f64,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub consistent: bool,
    pub lambda_max: f64,
    pub saaty_index: f64,
    pub methods: Vec<MethodRow>,
}

pub fn analyze(a: &Pcm, epsilon: f64) -> Result<Analysis> {
    let gm = geometric_mean_vector(a);
    let (ev, lambda) = principal_eigenvector(a, EIGEN_TOL)?;
    let lw = refine_to_unique(a, Method::CycleCancel, epsilon, default_tau(epsilon))?;
    let row = |name, v: &WeightVector| MethodRow {
        name,
        weights: sig12_all(v.values()),
        g2: sig12(gp_error(a, v, 2.0)),
        g_inf: sig12(gp_error(a, v, f64::INFINITY)),
    };
    Ok(Analysis {
        n: a.n(),
        consistent: a.is_consistent(CONSISTENCY_TOL),
        lambda_max: sig12(lambda),
        saaty_index: sig12(saaty_index(a, lambda)),
        methods: vec![
            row("geometric-mean", &gm),
            row("eigenvector", &ev),
            row("lwae", &lw.final_weights),
        ],
    })
}

pub fn write_analysis_text(out: &mut impl Write, r: &Analysis) -> Result<()> {
    writeln!(out, "n: {}", r.n)?;
    writeln!(out, "consistent: {}", r.consistent)?;
    writeln!(out, "lambda_max: {}", r.lambda_max)?;
    writeln!(out, "saaty index: {}", r.saaty_index)?;
    for m in &r.methods {
        writeln!(out, "{}:", m.name)?;
        writeln!(out, "  G2: {}", m.g2)?;
        writeln!(out, "  G_inf: {}", m.g_inf)?;
        let w: Vec<String> = m.weights.iter().map(f64::to_string).collect();
        writeln!(out, "  weights: {}", w.join(" "))?;
    }
    Ok(())
}

fn stat_values(s: &Stats) -> [f64; 4] {
    [s.avg, s.dev, s.min, s.max]
}

type Column = (&'static str, fn(&BenchSummary) -> &Stats);

/// Table with one row block per `a_max` and one column group per `n`.
fn write_table(
    out: &mut impl Write,
    summaries: &[BenchSummary],
    columns: [Column; 3],
) -> Result<()> {
    let mut ns: Vec<usize> = summaries.iter().map(|s| s.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut a_maxes: Vec<u32> = summaries.iter().map(|s| s.a_max).collect();
    a_maxes.sort_unstable();
    a_maxes.dedup();

    write!(out, "{:>6} {:>5}", "", "")?;
    for n in &ns {
        write!(out, " | {:^56}", format!("n = {n}"))?;
    }
    writeln!(out)?;
    write!(out, "{:>6} {:>5}", "a_max", "")?;
    for _ in &ns {
        write!(out, " | ")?;
        for (name, _) in &columns {
            write!(out, "{name:>18} ")?;
        }
    }
    writeln!(out)?;
    for a_max in &a_maxes {
        let cells: Vec<Option<&BenchSummary>> = ns
            .iter()
            .map(|n| summaries.iter().find(|s| s.n == *n && s.a_max == *a_max))
            .collect();
        for k in 0..4 {
            let label = ["AVG", "DEV", "MIN", "MAX"][k];
            let head = if k == 0 { a_max.to_string() } else { String::new() };
            write!(out, "{head:>6} {label:>5}")?;
            for cell in &cells {
                write!(out, " | ")?;
                for (_, get) in &columns {
                    match cell {
                        Some(s) => write!(out, "{:>18} ", sig12(stat_values(get(s))[k]))?,
                        None => write!(out, "{:>18} ", "-")?,
                    }
                }
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn write_bench_text(out: &mut impl Write, summaries: &[BenchSummary]) -> Result<()> {
    let trials: Vec<String> = summaries.iter().map(|s| s.trials.to_string()).collect();
    writeln!(out, "trials per cell: {}", trials.join(" "))?;
    writeln!(
        out,
        "full refinement; Time1 = bisection, Time2 = cycle-cancel (seconds); #LW = worst-deviation problems solved"
    )?;
    write_table(
        out,
        summaries,
        [
            ("Time1", |s| &s.time_bisect),
            ("Time2", |s| &s.time_cancel),
            ("#LW", |s| &s.lw),
        ],
    )?;
    writeln!(out)?;
    writeln!(
        out,
        "first solve only; Time1 = bisection, Time2 = cycle-cancel (seconds); Checks2 = feasibility checks of cycle-cancel"
    )?;
    write_table(
        out,
        summaries,
        [
            ("Time1", |s| &s.time_bisect_first),
            ("Time2", |s| &s.time_cancel_first),
            ("Checks2", |s| &s.checks_cancel),
        ],
    )?;
    Ok(())
}
