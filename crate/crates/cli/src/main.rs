//! `drslab`: run splitting iterations and monotonicity checks on problems
//! described in JSON.
//!
//! Exit codes: 0 success, 1 error, 2 non-convergence or a failed check.

mod problem;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use drslab::mono::{
    classify_resolvent, drs_map_matrix, sample_cycles_in, seeded_skew_three_cycle, skew_three_cycle,
};
use drslab::sampling::{gaussian_vector, seeded_rng};
use drslab::{compare_formulations, OperatorSpec64, Vector};
use serde::Serialize;

use problem::ProblemFile;

/// Largest trajectory deviation accepted by `check-equivalence`.
const EQUIVALENCE_TOL: f64 = 1e-8;
/// Largest `|ξ − cycle_sum|` accepted by `witness-skew`.
const WITNESS_TOL: f64 = 1e-10;
/// Largest Moreau residual accepted by `moreau-check`.
const MOREAU_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "drslab",
    version,
    about = "Douglas-Rachford splitting experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Iterate the (relaxed) splitting map and write the trajectory.
    RunDrs,
    /// Iterate the classical, lifted and reduced forms side by side.
    CheckEquivalence,
    /// Search random graph cycles of an operator for a positive cycle sum.
    CheckCycle,
    /// Build the three-cycle witness for a skew coupling `C`.
    WitnessSkew,
    /// Recover `M = T⁻¹ − I` from a linear splitting map and test its symmetry.
    ClassifyResolvent,
    /// Evaluate the Moreau residual of both operators at seeded points.
    MoreauCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
struct Opts {
    /// Problem JSON file.
    #[arg(long, global = true)]
    problem: Option<PathBuf>,
    /// Step size; overrides the problem file.
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Relaxation in (0, 2].
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Iteration count (maximum for run-drs, exact for check-equivalence).
    #[arg(long, global = true)]
    iters: Option<usize>,
    #[arg(long, global = true)]
    stop_tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Longest cycle tried by check-cycle.
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Random cycles per length (check-cycle) or probe points (moreau-check).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output file; reports are also printed to standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Success,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let opts = &cli.opts;
    let path = opts.problem.as_deref().context("--problem is required")?;
    let file = ProblemFile::load(path)?;
    match cli.command {
        Command::RunDrs => run_drs(&file, opts),
        other => {
            if opts.format == Some(Format::Csv) {
                bail!("{other:?} only writes json");
            }
            match other {
                Command::CheckEquivalence => check_equivalence(&file, opts),
                Command::CheckCycle => check_cycle(&file, opts),
                Command::WitnessSkew => witness_skew(&file, opts),
                Command::ClassifyResolvent => classify(&file, opts),
                Command::MoreauCheck => moreau_check(&file, opts),
                Command::RunDrs => unreachable!(),
            }
        }
    }
}

fn positive(name: &str, value: Option<usize>, default: usize) -> anyhow::Result<usize> {
    match value {
        Some(0) => bail!("--{name} must be positive"),
        Some(v) => Ok(v),
        None => Ok(default),
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn emit_json<S: Serialize>(report: &S, opts: &Opts) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    if let Some(out) = &opts.out {
        write_file(out, &text)?;
    }
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn seeded_point(seed: u64, dim: usize) -> Vector<f64> {
    gaussian_vector(&mut seeded_rng(seed), dim)
}

fn format_vector(v: &Vector<f64>) -> String {
    let parts: Vec<_> = v.iter().map(|x| drslab::numfmt::format_g17(*x)).collect();
    format!("[{}]", parts.join(", "))
}

fn run_drs(file: &ProblemFile, opts: &Opts) -> anyhow::Result<Outcome> {
    let mut problem = file.drs_problem(opts.tau)?.with_seed(opts.seed);
    if let Some(gamma) = opts.gamma {
        problem = problem.with_gamma(gamma)?;
    }
    if let Some(tol) = opts.stop_tol {
        problem = problem.with_stop_tol(tol)?;
    }
    if let Some(iters) = opts.iters {
        problem = problem.with_max_iters(iters)?;
    }
    let dim = problem.dim();
    let z0 = file.z0(dim)?.unwrap_or_else(|| Vector::zeros(dim));
    let record = problem.run(&z0)?;

    if let Some(out) = &opts.out {
        let text = match opts.format.unwrap_or(Format::Csv) {
            Format::Csv => record.to_csv(),
            Format::Json => serde_json::to_string_pretty(&record)? + "\n",
        };
        write_file(out, &text)?;
    }

    let x = problem.solution(&record.final_z)?;
    let cert_tol = 100.0 * problem.stop_tol();
    let certified = problem.solution_certificate(&record.final_z, cert_tol)?;
    println!("status: {:?}", record.status);
    println!("iterations: {}", record.iterations());
    println!("x: {}", format_vector(&x));
    println!("certificate: {}", if certified { "pass" } else { "fail" });
    if record.boundary_relaxation {
        println!("note: gamma = 2 is outside the averaged range; convergence is not guaranteed");
    }
    Ok(if record.converged() && certified {
        Outcome::Success
    } else {
        Outcome::Failed
    })
}

fn check_equivalence(file: &ProblemFile, opts: &Opts) -> anyhow::Result<Outcome> {
    let problem = file.drs_problem(opts.tau)?;
    let dim = problem.dim();
    let iters = positive("iters", opts.iters, 100)?;
    let z0 = file
        .z0(dim)?
        .unwrap_or_else(|| seeded_point(opts.seed, dim));
    let report = compare_formulations(&problem, &z0, iters)?;
    emit_json(&report, opts)?;
    Ok(if report.max_deviation <= EQUIVALENCE_TOL {
        Outcome::Success
    } else {
        Outcome::Failed
    })
}

#[derive(Serialize)]
struct CycleReport {
    dim: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
    violation_found: bool,
    witness: Option<drslab::CycleWitness64>,
}

fn check_cycle(file: &ProblemFile, opts: &Opts) -> anyhow::Result<Outcome> {
    let op = file.cycle_operator()?;
    let dim = file.dim.or(op.dim()).unwrap_or(2);
    let n_max = positive("n-max", opts.n_max, 6)?;
    let trials = positive("trials", opts.trials, 1000)?;
    let witness = sample_cycles_in(&op, dim, n_max, trials, opts.seed)?;
    let report = CycleReport {
        dim,
        n_max,
        trials,
        seed: opts.seed,
        violation_found: witness.is_some(),
        witness,
    };
    emit_json(&report, opts)?;
    Ok(Outcome::Success)
}

fn witness_skew(file: &ProblemFile, opts: &Opts) -> anyhow::Result<Outcome> {
    let c = file.coupling()?;
    let witness = match (&file.a1, &file.b1) {
        (Some(a1), b1) => {
            let b1 = b1.clone().unwrap_or_else(|| vec![0.0; c.nrows()]);
            skew_three_cycle(&c, &Vector::from_vec(a1.clone()), &Vector::from_vec(b1))?
        }
        (None, None) => seeded_skew_three_cycle(&c, opts.seed)?,
        (None, Some(_)) => bail!("\"b1\" given without \"a1\""),
    };
    emit_json(&witness, opts)?;
    let xi = witness.xi.expect("skew witnesses carry xi");
    Ok(
        if xi > 0.0 && (xi - witness.cycle_sum).abs() <= WITNESS_TOL {
            Outcome::Success
        } else {
            Outcome::Failed
        },
    )
}

fn classify(file: &ProblemFile, opts: &Opts) -> anyhow::Result<Outcome> {
    let problem = file.drs_problem(opts.tau)?.with_seed(opts.seed);
    let t = drs_map_matrix(&problem)?;
    let classification = classify_resolvent(&t)?;
    emit_json(&classification, opts)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct MoreauEntry {
    operator: &'static str,
    max_residual: f64,
}

#[derive(Serialize)]
struct MoreauReport {
    tau: f64,
    points: usize,
    seed: u64,
    entries: Vec<MoreauEntry>,
    max_residual: f64,
}

fn moreau_check(file: &ProblemFile, opts: &Opts) -> anyhow::Result<Outcome> {
    let problem = file.drs_problem(opts.tau)?;
    let dim = problem.dim();
    let tau = problem.tau();
    let points = positive("trials", opts.trials, 100)?;
    let mut rng = seeded_rng(opts.seed);
    let probes: Vec<Vector<f64>> = (0..points)
        .map(|_| gaussian_vector::<f64, _>(&mut rng, dim) * 3.0)
        .collect();
    let ops: [(&'static str, OperatorSpec64); 4] = [
        ("A", problem.a().clone()),
        ("B", problem.b().clone()),
        ("A^-1", OperatorSpec64::inverse(problem.a().clone())),
        ("B^-1", OperatorSpec64::inverse(problem.b().clone())),
    ];
    let mut entries = Vec::new();
    for (name, op) in &ops {
        let mut worst = 0.0f64;
        for x in &probes {
            worst = worst.max(op.moreau_residual(tau, x)?);
        }
        entries.push(MoreauEntry {
            operator: name,
            max_residual: worst,
        });
    }
    let max_residual = entries.iter().fold(0.0f64, |m, e| m.max(e.max_residual));
    emit_json(
        &MoreauReport {
            tau,
            points,
            seed: opts.seed,
            entries,
            max_residual,
        },
        opts,
    )?;
    Ok(if max_residual <= MOREAU_TOL {
        Outcome::Success
    } else {
        Outcome::Failed
    })
}
