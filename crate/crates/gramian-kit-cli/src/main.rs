//! Command-line front end: construct, classify, sample, remark-example,
//! and the randomized verification suite, all with JSON in and out.
//!
//! Exit codes partition the outcomes: 0 success, 1 malformed input,
//! 2 construction hypothesis violated (an expected, meaningful result,
//! not a crash), 64 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use gramian_kit::construction::{build, ConstructionResult};
use gramian_kit::isometry::classify;
use gramian_kit::lab::{remark_counterexample, run_suite, sample_projection_pair, SampleSpec, SuiteConfig};
use gramian_kit::{GramianError, GramianOperator, SpaceShape, Tolerances};

const EXIT_INPUT: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Desk-scale pseudo-Hilbert module toolkit: build and audit partial
/// gramian isometries from projection pairs.
#[derive(Parser)]
#[command(name = "gramian-kit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build T = Q A^{-1/2} P from two projections P, Q with ||P-Q|| < 1
    /// and emit the full residual trace.
    Construct {
        /// Projection P: path to JSON, or inline JSON starting with '{'
        #[arg(long)]
        p: String,
        /// Projection Q: path to JSON, or inline JSON
        #[arg(long)]
        q: String,
        /// Override the operator-equality tolerance eq_rel
        #[arg(long)]
        tol: Option<f64>,
        /// Sampled vectors for the positivity split
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Seed of the sampled-vector stream
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify an operator against the partial-isometry conditions.
    Classify {
        /// Operator T: path to JSON, or inline JSON
        #[arg(long)]
        t: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a projection pair with a prescribed gap (deterministic in --seed).
    Sample {
        /// Module rank n of H = Z^n
        #[arg(long)]
        n: usize,
        /// Degree d of the coefficient algebra M_d(C)
        #[arg(long)]
        d: usize,
        /// Rank of P (and of Q unless --rank-q is given)
        #[arg(long)]
        rank: usize,
        /// Rank of Q
        #[arg(long)]
        rank_q: Option<usize>,
        /// Target ||P - Q||; omit for random angles (equal ranks) or the
        /// forced gap 1 (unequal ranks)
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the norm-one pair P, Q (PQ = 0, ||P-Q|| = 1) together with
    /// the exact partial isometry T with T*T = P, TT* = Q.
    RemarkExample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized sample -> build -> verify sweep.
    Suite {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated shapes like "2x1,4x1,2x2" (default: the standard six)
        #[arg(long)]
        shapes: Option<String>,
        /// Comma-separated gap targets (default: 0.1,0.3,0.5,0.7,0.9,0.95)
        #[arg(long)]
        gaps: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct PairOutput {
    p: GramianOperator,
    q: GramianOperator,
}

#[derive(Serialize)]
struct TripleOutput {
    p: GramianOperator,
    q: GramianOperator,
    t: GramianOperator,
}

#[derive(Serialize)]
struct HypothesisBody {
    error: &'static str,
    gap: f64,
}

fn fail_input(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_INPUT)
}

/// eq_rel resolution: flag beats GRAMIAN_KIT_TOL beats the default.
fn resolve_tolerances(flag: Option<f64>) -> Result<Tolerances, String> {
    let mut tol = Tolerances::default();
    if let Ok(text) = std::env::var("GRAMIAN_KIT_TOL") {
        let parsed: f64 = text
            .trim()
            .parse()
            .map_err(|_| format!("GRAMIAN_KIT_TOL is not a number: {text:?}"))?;
        tol.eq_rel = parsed;
    }
    if let Some(eq_rel) = flag {
        tol.eq_rel = eq_rel;
    }
    tol.validate().map_err(|e| e.to_string())?;
    Ok(tol)
}

/// Accepts a file path or inline JSON (anything starting with '{').
fn read_operator(arg: &str) -> Result<GramianOperator, String> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("malformed operator JSON in {arg}: {e}"))
}

fn emit<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_shapes(text: &str) -> Result<Vec<SpaceShape>, String> {
    text.split(',')
        .map(|part| {
            let (n, d) = part
                .trim()
                .split_once(['x', 'X'])
                .ok_or_else(|| format!("shape {part:?} is not of the form NxD"))?;
            let n: usize = n.parse().map_err(|_| format!("bad rank in {part:?}"))?;
            let d: usize = d.parse().map_err(|_| format!("bad degree in {part:?}"))?;
            SpaceShape::new(n, d).map_err(|e| e.to_string())
        })
        .collect()
}

fn parse_gaps(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad gap {part:?}"))
        })
        .collect()
}

fn run_construct(
    p: &str,
    q: &str,
    tol: Option<f64>,
    samples: usize,
    seed: u64,
    out: &Option<PathBuf>,
) -> ExitCode {
    let tol = match resolve_tolerances(tol) {
        Ok(t) => t,
        Err(e) => return fail_input(e),
    };
    let p = match read_operator(p) {
        Ok(op) => op,
        Err(e) => return fail_input(e),
    };
    let q = match read_operator(q) {
        Ok(op) => op,
        Err(e) => return fail_input(e),
    };
    match build(&p, &q, &tol, samples, seed) {
        Ok(result) => emit_result(&result, out),
        Err(GramianError::HypothesisViolated { gap }) => {
            let body = HypothesisBody {
                error: "hypothesis-violated",
                gap,
            };
            if let Err(e) = emit(&body, out) {
                return fail_input(e);
            }
            eprintln!("construction rejected: ||P - Q|| = {gap:.12} is not < 1");
            ExitCode::from(EXIT_HYPOTHESIS)
        }
        Err(other) => fail_input(other),
    }
}

fn emit_result(result: &ConstructionResult, out: &Option<PathBuf>) -> ExitCode {
    match emit(result, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail_input(e),
    }
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Construct {
            p,
            q,
            tol,
            samples,
            seed,
            out,
        } => run_construct(&p, &q, tol, samples, seed, &out),
        Command::Classify { t, tol, out } => {
            let tol = match resolve_tolerances(tol) {
                Ok(t) => t,
                Err(e) => return fail_input(e),
            };
            let t = match read_operator(&t) {
                Ok(op) => op,
                Err(e) => return fail_input(e),
            };
            let report = classify(&t, &tol);
            match emit(&report, &out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail_input(e),
            }
        }
        Command::Sample {
            n,
            d,
            rank,
            rank_q,
            gap,
            seed,
            out,
        } => {
            let shape = match SpaceShape::new(n, d) {
                Ok(s) => s,
                Err(e) => return fail_input(e),
            };
            let spec = SampleSpec {
                shape,
                target_gap: gap,
                rank_p: rank,
                rank_q: rank_q.unwrap_or(rank),
                seed,
            };
            match sample_projection_pair(&spec) {
                Ok((p, q)) => match emit(&PairOutput { p, q }, &out) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail_input(e),
                },
                Err(e) => fail_input(e),
            }
        }
        Command::RemarkExample { n, d, out } => {
            let shape = match SpaceShape::new(n, d) {
                Ok(s) => s,
                Err(e) => return fail_input(e),
            };
            match remark_counterexample(shape) {
                Ok((p, q, t)) => match emit(&TripleOutput { p, q, t }, &out) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail_input(e),
                },
                Err(e) => fail_input(e),
            }
        }
        Command::Suite {
            trials,
            seed,
            tol,
            shapes,
            gaps,
            out,
        } => {
            let mut config = SuiteConfig::standard(trials, seed);
            match resolve_tolerances(tol) {
                Ok(t) => config.tol = t,
                Err(e) => return fail_input(e),
            }
            if let Some(text) = shapes {
                match parse_shapes(&text) {
                    Ok(parsed) => config.shapes = parsed,
                    Err(e) => return fail_input(e),
                }
            }
            if let Some(text) = gaps {
                match parse_gaps(&text) {
                    Ok(parsed) => config.gaps = parsed,
                    Err(e) => return fail_input(e),
                }
            }
            let report = match run_suite(&config) {
                Ok(r) => r,
                Err(e) => return fail_input(e),
            };
            let clean = report.failing_seeds.is_empty();
            if let Err(e) = emit(&report, &out) {
                return fail_input(e);
            }
            if clean {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "suite recorded {} unexpected failure(s); seeds listed in the report",
                    report.failing_seeds.len()
                );
                ExitCode::from(EXIT_INPUT)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli)
}
