use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lwae_core::experiment::run_bench;
use lwae_core::random::random_pcm;
use lwae_core::{Method, Pcm, RngStream, DEFAULT_EPSILON};

mod report;

#[derive(Parser)]
#[command(name = "lwae", version, about = "Worst-deviation priority vectors for pairwise comparison matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the priority vector of a matrix file.
    Solve(SolveArgs),
    /// Compare baseline priority vectors with the worst-deviation optimum.
    Analyze(AnalyzeArgs),
    /// Write random matrices as CSV files.
    Gen(GenArgs),
    /// Time both solvers on random matrices.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Normalize {
    /// First weight equal to 1.
    First,
    /// Weights summing to 1.
    Sum,
}

#[derive(Args)]
struct SolveArgs {
    /// CSV matrix file.
    file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value = "cycle-cancel", value_parser = parse_method)]
    method: Method,
    /// Refine to the unique Pareto-optimal vector (default).
    #[arg(long, overrides_with = "no_refine")]
    refine: bool,
    /// Stop after the first worst-deviation solve.
    #[arg(long, overrides_with = "refine")]
    no_refine: bool,
    /// Tolerance for binding constraints, in log space.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[arg(long, value_enum, default_value_t = Normalize::First)]
    normalize: Normalize,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    a_max: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    count: u32,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,20")]
    n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "3,5,10")]
    a_max_list: Vec<u32>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Also write every instance record as JSON to this file.
    #[arg(long)]
    records: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn read_matrix(path: &Path) -> Result<Pcm> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Pcm::from_csv_str(&text).with_context(|| format!("{}", path.display()))
}

fn check_epsilon(eps: f64) -> Result<()> {
    ensure!(eps > 0.0 && eps.is_finite(), "epsilon must be positive, got {eps}");
    Ok(())
}

fn solve(args: SolveArgs, out: &mut impl Write) -> Result<()> {
    check_epsilon(args.epsilon)?;
    let a = read_matrix(&args.file)?;
    let options = report::SolveOptions {
        method: args.method,
        epsilon: args.epsilon,
        refine: !args.no_refine,
        tau: args.tau,
        normalize: args.normalize,
    };
    let r = report::solve(&a, &options)?;
    match args.output {
        Output::Text => report::write_solve_text(out, &r)?,
        Output::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
    }
    Ok(())
}

fn analyze(args: AnalyzeArgs, out: &mut impl Write) -> Result<()> {
    check_epsilon(args.epsilon)?;
    let a = read_matrix(&args.file)?;
    let r = report::analyze(&a, args.epsilon)?;
    match args.output {
        Output::Text => report::write_analysis_text(out, &r)?,
        Output::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
    }
    Ok(())
}

fn gen(args: GenArgs, out: &mut impl Write) -> Result<()> {
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let mut rng = RngStream::new(args.seed);
    for k in 0..args.count {
        let a = random_pcm(args.n as usize, args.a_max, &mut rng);
        let name = format!("pcm_n{}_a{}_s{}_{k}.csv", args.n, args.a_max, args.seed);
        let path = args.out_dir.join(name);
        fs::write(&path, a.to_csv_string())
            .with_context(|| format!("cannot write {}", path.display()))?;
        writeln!(out, "{}", path.display())?;
    }
    Ok(())
}

fn bench(args: BenchArgs, out: &mut impl Write) -> Result<()> {
    check_epsilon(args.epsilon)?;
    ensure!(args.trials >= 1, "trials must be at least 1");
    ensure!(
        args.n_list.iter().all(|&n| n >= 2),
        "every n must be at least 2"
    );
    ensure!(
        args.a_max_list.iter().all(|&a| a >= 2),
        "every a_max must be at least 2"
    );
    let (summaries, records) = run_bench(
        &args.n_list,
        &args.a_max_list,
        args.trials,
        args.epsilon,
        args.seed,
    )?;
    if let Some(path) = &args.records {
        fs::write(path, serde_json::to_string_pretty(&records)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    match args.output {
        Output::Text => report::write_bench_text(out, &summaries)?,
        Output::Json => writeln!(out, "{}", serde_json::to_string_pretty(&summaries)?)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Solve(a) => solve(a, &mut out),
        Command::Analyze(a) => analyze(a, &mut out),
        Command::Gen(a) => gen(a, &mut out),
        Command::Bench(a) => bench(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
