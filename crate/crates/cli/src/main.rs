//! `qverify`: check q-series identities at given or sampled parameter points.
//!
//! Exit codes: 0 pass, 1 fail, 2 skipped or outside the domain, 3 input error.

mod paramfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qverify_core::identities::{check_case, find, registry, Mode};
use qverify_core::report::{reports_to_json, Verdict};
use qverify_core::sweep::{run_sweep, summary_table, SweepConfig, DEFAULT_QS};
use qverify_core::QContext;

const EXIT_FAIL: u8 = 1;
const EXIT_SKIPPED: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "qverify", version, about = "Numerical verification of basic hypergeometric identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered identities
    List,
    /// Check one identity at the point given in a TOML file
    Check {
        id: String,
        #[arg(long)]
        params: PathBuf,
        /// Also print the report as JSON
        #[arg(long)]
        json: bool,
        /// Relative tolerance for a pass
        #[arg(long)]
        tol: Option<f64>,
        /// Base q, if the file does not set it
        #[arg(long)]
        q: Option<f64>,
    },
    /// Check identities at seeded random points
    Sweep {
        /// Identity ids, or `all`
        #[arg(long = "identity", default_value = "all")]
        identities: Vec<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampling mode; by default integrals sample real points and series complex ones
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated q values
        #[arg(long, value_delimiter = ',')]
        q: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Leave elapsed times out of the report
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Real,
    Complex,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Real => Mode::Real,
            ModeArg::Complex => Mode::Complex,
        }
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

/// Context from `q`, the tolerance override and `QVERIFY_MAX_TERMS`.
fn context(q: Complex64, tol: Option<f64>) -> Result<QContext, String> {
    let mut ctx = QContext::new(q).map_err(|e| e.to_string())?;
    if let Some(t) = tol {
        ctx = ctx.with_identity_tol(t).map_err(|e| e.to_string())?;
    }
    if let Ok(v) = std::env::var("QVERIFY_MAX_TERMS") {
        let n: usize = v.trim().parse().map_err(|_| format!("QVERIFY_MAX_TERMS = `{v}` is not a count"))?;
        ctx = ctx.with_max_terms(n).map_err(|e| e.to_string())?;
    }
    Ok(ctx)
}

fn cmd_list() -> ExitCode {
    for case in registry() {
        println!("{:<24} {}", case.id, case.title);
    }
    ExitCode::SUCCESS
}

fn cmd_check(id: &str, path: &PathBuf, json: bool, tol: Option<f64>, q: Option<f64>) -> ExitCode {
    let case = match find(id) {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", path.display())),
    };
    let file = match paramfile::parse(&text) {
        Ok(f) => f,
        Err(e) => return input_error(format!("{}: {e}", path.display())),
    };
    let Some(q) = file.q.or(q.map(Complex64::from)) else {
        return input_error("q is set neither in the parameter file nor by --q");
    };
    let ctx = match context(q, tol) {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    let report = match check_case(case, &file.params, &ctx, 0) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    println!("{report}");
    if json {
        println!("{}", report.to_json(true));
    }
    match report.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail(_) => ExitCode::from(EXIT_FAIL),
        Verdict::Skipped(_) => ExitCode::from(EXIT_SKIPPED),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    identities: Vec<String>,
    samples: usize,
    seed: u64,
    mode: Option<ModeArg>,
    tol: Option<f64>,
    q: Vec<f64>,
    out: PathBuf,
    no_timing: bool,
) -> ExitCode {
    let ids = if identities.iter().any(|s| s == "all") { vec![] } else { identities };
    let qs = if q.is_empty() { DEFAULT_QS.to_vec() } else { q };
    let ctx = match context(Complex64::new(qs[0], 0.0), tol) {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    let cfg = SweepConfig { ids, samples, seed, mode: mode.map(Mode::from), qs };
    let outcome = match run_sweep(&cfg, &ctx) {
        Ok(o) => o,
        Err(e) => return input_error(e),
    };
    if let Err(e) = std::fs::write(&out, reports_to_json(&outcome.reports, !no_timing)) {
        return input_error(format!("{}: {e}", out.display()));
    }
    print!("{}", summary_table(&outcome.summary));
    println!("{} reports written to {}", outcome.reports.len(), out.display());
    if outcome.failures() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::List => cmd_list(),
        Command::Check { id, params, json, tol, q } => cmd_check(&id, &params, json, tol, q),
        Command::Sweep { identities, samples, seed, mode, tol, q, out, no_timing } => {
            cmd_sweep(identities, samples, seed, mode, tol, q, out, no_timing)
        }
    }
}
