//! Command-line surface: structure generation, protocol runs, substitutes
//! checks, agreement⇒accuracy audits, parameter sweeps, and the built-in
//! verification suite.
//!
//! Exit codes: 0 success, 1 a check/audit/verification verdict was
//! negative, 2 invalid input or any execution error. All artifacts are
//! deterministic for a fixed command line; JSON envelopes carry a
//! timestamp unless `--no-timestamp` is given, CSV files never do.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{audit_agreement_accuracy, compute_boolean, BoundReport};
use crate::corpus::{generate, parse_corpus_kind, CorpusKind, CorpusSpec};
use crate::divergence::{parse_generator, BregmanGenerator};
use crate::error::{Error, Result};
use crate::metrics::{accuracy_profile, agreement_profile};
use crate::protocol::{
    parse_protocol, run_discretized_bregman, run_discretized_quadratic, run_fast_rounding,
    run_standard, ProtocolKind, Transcript,
};
use crate::structure::InformationStructure;
use crate::substitutes::{rectangle_check_with_guard, CheckMode, ENUMERATION_GUARD};
use crate::verification;

/// Simulates two-party agreement protocols on finite information
/// structures and verifies that approximate agreement implies approximate
/// accuracy when signals are rectangle substitutes.
#[derive(Parser)]
#[command(name = "agreement-lab", version, disable_help_subcommand = true)]
pub struct Cli {
    /// Omit the timestamp from JSON envelopes so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a structure and write it as JSON.
    Gen(GenArgs),
    /// Run a protocol on a structure and write the transcript.
    Run(RunArgs),
    /// Check weak or rectangle substitutes for a structure.
    Check(CheckArgs),
    /// Audit whether the final agreement's accuracy bound holds.
    Audit(AuditArgs),
    /// Cross seeds × epsilons × protocols into one audit CSV.
    Sweep(SweepArgs),
    /// Run the built-in verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Structure family: xor, coin-xor, identical, random, or substitutes.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generator the substitutes kind certifies against.
    #[arg(long, default_value = "squared")]
    pub g: String,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct RunArgs {
    /// Structure JSON path.
    #[arg(long)]
    pub structure: PathBuf,
    /// Protocol: standard, disc-quad, disc-bregman, or fast.
    #[arg(long, default_value = "standard")]
    pub protocol: String,
    /// Agreement parameter ε (required except for standard).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Error budget δ for a boolean computation (fast protocol only,
    /// replaces --epsilon with √(δ/8)).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Generator for disc-bregman.
    #[arg(long, default_value = "squared")]
    pub g: String,
    /// Round budget for the standard protocol; derived from the structure
    /// size when omitted.
    #[arg(long)]
    pub max_rounds: Option<usize>,
    /// Transcript JSON envelope path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional per-round trace CSV path.
    #[arg(long)]
    pub out_trace: Option<PathBuf>,
    /// Optional per-round agreement/accuracy profile CSV path.
    #[arg(long)]
    pub out_profiles: Option<PathBuf>,
}

#[derive(Args)]
pub struct CheckArgs {
    /// Structure JSON path.
    #[arg(long)]
    pub structure: PathBuf,
    /// Generator name.
    #[arg(long, default_value = "squared")]
    pub g: String,
    /// weak (full grid only) or rectangle (every sub-rectangle).
    #[arg(long, default_value = "rectangle")]
    pub mode: String,
    /// Per-side size cap override for rectangle enumeration.
    #[arg(long)]
    pub guard: Option<usize>,
    /// Report JSON path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct AuditArgs {
    /// Structure JSON path.
    #[arg(long)]
    pub structure: PathBuf,
    /// Protocol: standard, disc-quad, disc-bregman, or fast.
    #[arg(long, default_value = "disc-quad")]
    pub protocol: String,
    /// Agreement parameter ε (ignored by standard).
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Generator name.
    #[arg(long, default_value = "squared")]
    pub g: String,
    /// Report JSON path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional one-row audit CSV path.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Corpus family per seed: random or substitutes.
    #[arg(long, default_value = "random")]
    pub corpus: String,
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    /// Comma-separated seed list.
    #[arg(long, value_delimiter = ',', required = true)]
    pub seeds: Vec<u64>,
    /// Comma-separated ε list.
    #[arg(long, value_delimiter = ',', required = true)]
    pub epsilons: Vec<f64>,
    /// Comma-separated protocol list.
    #[arg(long, value_delimiter = ',', required = true)]
    pub protocols: Vec<String>,
    /// Generator name.
    #[arg(long, default_value = "squared")]
    pub g: String,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Report JSON path (the per-check lines always go to stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses the command line and executes it; returns the process exit code.
pub fn main_entry() -> i32 {
    init_threads();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Applies the AGREEMENT_LAB_THREADS cap to the global worker pool.
fn init_threads() {
    if let Some(n) = std::env::var("AGREEMENT_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs one parsed command; `Ok` carries the exit code for verdicts.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Run(args) => run_run(args, cli.no_timestamp),
        Command::Check(args) => run_check(args, cli.no_timestamp),
        Command::Audit(args) => run_audit(args, cli.no_timestamp),
        Command::Sweep(args) => run_sweep(args),
        Command::Verify(args) => run_verify(args, cli.no_timestamp),
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Wraps a result in the common envelope; key order is alphabetical and
/// stable, and the timestamp is dropped under `--no-timestamp`.
fn envelope(command: &str, no_timestamp: bool, result: serde_json::Value) -> String {
    let mut value = serde_json::json!({
        "command": command,
        "result": result,
    });
    if !no_timestamp {
        value["timestamp"] = serde_json::Value::String(chrono::Utc::now().to_rfc3339());
    }
    let mut text = serde_json::to_string_pretty(&value).expect("envelope serializes");
    text.push('\n');
    text
}

fn run_gen(args: GenArgs) -> Result<i32> {
    let kind = parse_corpus_kind(&args.kind)?;
    let generator = match kind {
        CorpusKind::Substitutes => Some(parse_generator(&args.g)?),
        _ => None,
    };
    let spec = CorpusSpec {
        kind,
        rows: args.rows,
        cols: args.cols,
        seed: args.seed,
        generator,
    };
    let s = generate(&spec)?;
    write_text(args.out.as_deref(), &s.to_json_string())?;
    Ok(0)
}

/// Per-round agreement and accuracy profiles as CSV.
fn profiles_csv(
    s: &InformationStructure,
    transcript: &Transcript,
    g: &BregmanGenerator,
) -> Result<String> {
    let mut out = String::from(
        "round,quad,jb,withCharlie,symmetrized,aliceQuad,bobQuad,aliceBregman,bobBregman,midpoint\n",
    );
    for t in 0..=transcript.t_end {
        let partition = transcript.evolution().partition(t);
        let ag = agreement_profile(s, partition, g)?;
        let ac = accuracy_profile(s, partition, g)?;
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            t,
            ag.quad,
            ag.jb,
            ag.with_charlie,
            ag.symmetrized,
            ac.alice_quad,
            ac.bob_quad,
            ac.alice_bregman,
            ac.bob_bregman,
            ac.midpoint,
        ));
    }
    Ok(out)
}

fn run_run(args: RunArgs, no_timestamp: bool) -> Result<i32> {
    let s = InformationStructure::read_json(&args.structure)?;
    let kind = parse_protocol(&args.protocol)?;
    let g = parse_generator(&args.g)?;
    if g.name() != "squared" && kind != ProtocolKind::DiscretizedBregman {
        return Err(Error::DomainError(format!(
            "generator selection applies to disc-bregman, not {}",
            kind.id()
        )));
    }
    if args.max_rounds.is_some() && kind != ProtocolKind::Standard {
        return Err(Error::DomainError(
            "--max-rounds applies to the standard protocol only".into(),
        ));
    }

    let mut boolean = None;
    let epsilon = match (kind, args.epsilon, args.delta) {
        (_, Some(_), Some(_)) => {
            return Err(Error::DomainError(
                "--epsilon and --delta are mutually exclusive".into(),
            ))
        }
        (ProtocolKind::Standard, None, None) => None,
        (ProtocolKind::Standard, Some(_), _) | (ProtocolKind::Standard, _, Some(_)) => {
            return Err(Error::DomainError(
                "the standard protocol takes no parameter; use --max-rounds".into(),
            ))
        }
        (ProtocolKind::FastRounding, None, Some(delta)) => {
            let result = compute_boolean(&s, delta)?;
            boolean = Some(result);
            Some(result.epsilon)
        }
        (_, None, Some(_)) => {
            return Err(Error::DomainError(
                "--delta applies to the fast protocol only".into(),
            ))
        }
        (_, Some(e), None) => Some(e),
        (_, None, None) => {
            return Err(Error::DomainError(format!(
                "{} needs --epsilon",
                kind.id()
            )))
        }
    };

    let transcript = match kind {
        ProtocolKind::Standard => {
            let budget = args
                .max_rounds
                .unwrap_or(s.rows() * s.cols() + s.rows() + s.cols() + 4);
            run_standard(&s, budget)?
        }
        ProtocolKind::DiscretizedQuadratic => {
            run_discretized_quadratic(&s, epsilon.expect("validated above"))?
        }
        ProtocolKind::DiscretizedBregman => {
            run_discretized_bregman(&s, &g, epsilon.expect("validated above"))?
        }
        ProtocolKind::FastRounding => run_fast_rounding(&s, epsilon.expect("validated above"))?,
    };

    if let Some(path) = &args.out_trace {
        std::fs::write(path, transcript.trace_csv())?;
    }
    if let Some(path) = &args.out_profiles {
        let metric_g = parse_generator(&transcript.generator_name)?;
        std::fs::write(path, profiles_csv(&s, &transcript, &metric_g)?)?;
    }

    let mut result = serde_json::json!({
        "structure": s.label(),
        "transcript": transcript.to_json_value(),
    });
    if let Some(b) = boolean {
        result["booleanComputation"] = serde_json::json!({
            "delta": args.delta,
            "epsilon": b.epsilon,
            "errorProbability": b.error_probability,
            "bits": b.bits,
        });
    }
    write_text(args.out.as_deref(), &envelope("run", no_timestamp, result))?;
    Ok(0)
}

fn run_check(args: CheckArgs, no_timestamp: bool) -> Result<i32> {
    let s = InformationStructure::read_json(&args.structure)?;
    let g = parse_generator(&args.g)?;
    let mode = match args.mode.as_str() {
        "weak" => CheckMode::Weak,
        "rectangle" => CheckMode::Rectangle,
        other => {
            return Err(Error::DomainError(format!(
                "unknown check mode {other:?}; expected weak or rectangle"
            )))
        }
    };
    let guard = Some(args.guard.unwrap_or(ENUMERATION_GUARD));
    let report = rectangle_check_with_guard(&s, &g, mode, guard)?;
    let result = serde_json::json!({
        "structure": s.label(),
        "generator": g.name(),
        "report": report.to_json_value(),
    });
    write_text(args.out.as_deref(), &envelope("check", no_timestamp, result))?;
    Ok(if report.holds { 0 } else { 1 })
}

fn run_audit(args: AuditArgs, no_timestamp: bool) -> Result<i32> {
    let s = InformationStructure::read_json(&args.structure)?;
    let g = parse_generator(&args.g)?;
    let kind = parse_protocol(&args.protocol)?;
    let report = audit_agreement_accuracy(&s, &g, kind, args.epsilon)?;
    if let Some(path) = &args.out_csv {
        let mut csv = String::from(BoundReport::csv_header());
        csv.push('\n');
        csv.push_str(&report.csv_row());
        csv.push('\n');
        std::fs::write(path, csv)?;
    }
    let satisfied = report.satisfied;
    write_text(
        args.out.as_deref(),
        &envelope("audit", no_timestamp, report.to_json_value()),
    )?;
    Ok(if satisfied { 0 } else { 1 })
}

fn run_sweep(args: SweepArgs) -> Result<i32> {
    let corpus = parse_corpus_kind(&args.corpus)?;
    if !matches!(corpus, CorpusKind::Random | CorpusKind::Substitutes) {
        return Err(Error::DomainError(
            "sweeps cover the seeded kinds: random or substitutes".into(),
        ));
    }
    let g = parse_generator(&args.g)?;
    let protocols: Vec<ProtocolKind> = args
        .protocols
        .iter()
        .map(|p| parse_protocol(p))
        .collect::<Result<_>>()?;
    for &epsilon in &args.epsilons {
        if !(epsilon > 0.0) {
            return Err(Error::EpsilonOutOfRange {
                value: epsilon,
                requirement: "sweep epsilons must be positive",
            });
        }
    }

    let mut cells: Vec<(u64, ProtocolKind, f64)> = Vec::new();
    for &seed in &args.seeds {
        for &kind in &protocols {
            for &epsilon in &args.epsilons {
                cells.push((seed, kind, epsilon));
            }
        }
    }

    let reports: Vec<BoundReport> = cells
        .par_iter()
        .map(|&(seed, kind, epsilon)| {
            let spec = CorpusSpec {
                kind: corpus,
                rows: args.rows,
                cols: args.cols,
                seed,
                generator: Some(g.clone()),
            };
            let s = generate(&spec)?;
            audit_agreement_accuracy(&s, &g, kind, epsilon)
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<(String, String)> = reports
        .iter()
        .map(|r| {
            let key = format!(
                "{}|{}|{:.16e}|{:.16e}",
                r.label,
                r.protocol.id(),
                r.epsilon_target,
                r.epsilon_measured
            );
            (key, r.csv_row())
        })
        .collect();
    rows.sort();

    let mut csv = String::from(BoundReport::csv_header());
    csv.push('\n');
    for (_, row) in &rows {
        csv.push_str(row);
        csv.push('\n');
    }
    write_text(args.out.as_deref(), &csv)?;
    Ok(if reports.iter().all(|r| r.satisfied) {
        0
    } else {
        1
    })
}

fn run_verify(args: VerifyArgs, no_timestamp: bool) -> Result<i32> {
    let report = verification::run_suite()?;
    for check in &report.checks {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        println!("[{verdict}] {} — {}", check.name, check.detail);
    }
    let passed = report.all_passed();
    println!(
        "{} of {} checks passed",
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len()
    );
    if let Some(path) = &args.out {
        std::fs::write(
            path,
            envelope("verify", no_timestamp, report.to_json_value()),
        )?;
    }
    Ok(if passed { 0 } else { 1 })
}
