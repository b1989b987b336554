//! Command-line front end: JSON instance files in, JSON reports out.
//!
//! Exit codes: 0 success, 2 parse or validation failure, 3 internal
//! inconsistency or other computational failure, 4 discrepancy (a
//! reproduction mismatch or a failed integrability certificate), 5 numerical
//! flow or integration failure.

pub mod commands;
pub mod reproduce;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_DISCREPANCY: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

const SCHEMAS: &str = "\
Instance file (schema_version 1):
  {\"schema_version\": 1,
   \"points\": [{\"pos\": \"0\" | \"p/q\" | \"inf\", \"order\": n, \"kind\": \"reg\" | \"un\" | \"ra\",
                \"theta\": {\"plus\": [...], \"minus\": [...]} | {\"seq\": [...]}}],
   \"darboux\": [{\"q\": \"p/q\", \"p\": \"p/q\"}],
   \"options\": {\"truncation\": k, \"margins\": 1e-6, \"rtol\": 1e-9}}
  Rationals are strings \"p/q\" (\"q\" omitted when 1). Unramified and regular
  points list theta+_l and theta-_l for l = 0..n-1; ramified points list
  theta_0..theta_{2n-2}.

Report (stdout):
  {\"command\", \"instance_digest\", \"outputs\", \"diagnostics\"} plus \"timing_ms\"
  with --timing. Exact commands are byte-identical across runs without --timing.
  Failures print {\"error\": {\"kind\", \"message\"}, \"exit_code\"}.

Exit codes: 0 ok, 2 parse/validation, 3 internal inconsistency,
  4 discrepancy (reproduce mismatch, failed certificate), 5 flow/integration failure.

Environment: ISOMONO_THREADS caps the worker threads.";

#[derive(Parser, Debug)]
#[command(name = "isomono", version, about = "Exact normal forms, Hamiltonians and isomonodromic flows of rank-2 connections", after_long_help = SCHEMAS)]
pub struct Cli {
    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pairs {
    /// Residue form and canonical form on every pair of coordinate vectors.
    All,
    /// Fiber form on the (q, p) basis against ±1/P(q_j).
    Canonical,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// Three unramified double poles at 0, 1, infinity.
    #[value(name = "double-poles", alias = "5.1")]
    DoublePoles,
    /// One ramified pole of order five at infinity.
    #[value(name = "kimura", alias = "5.2")]
    Kimura,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build both connection matrices and check the apparent round trip.
    Build { instance: PathBuf },
    /// Local formal reductions at the poles.
    Reduce {
        instance: PathBuf,
        /// Only this point (index into `points`).
        #[arg(long)]
        point: Option<usize>,
        /// Highest order of the gauge series.
        #[arg(long)]
        order: Option<usize>,
        /// Comma-separated free ramified gauge values (rationals).
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
    },
    /// Hamiltonians of every deformation coordinate.
    Hamiltonians { instance: PathBuf },
    /// The residue 2-form on coordinate vector fields.
    Omega {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "canonical")]
        pairs: Pairs,
    },
    /// Certify integrability along every admissible direction (exit 0 iff all hold).
    Certify { instance: PathBuf },
    /// Integrate an isomonodromic flow with RK4.
    Flow {
        instance: PathBuf,
        /// theta_un:i:l:+ | theta_un:i:l:- | theta_ra:i:l | t:i
        #[arg(long)]
        dir: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Write the trajectory here instead of into the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare computed Hamiltonians with the closed forms of a worked example.
    Reproduce {
        #[arg(value_enum)]
        which: Example,
        #[arg(long, default_value_t = 20240611)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Itemized validation of an instance file.
    Validate { instance: PathBuf },
}

/// Outcome of one command: the report and the exit code.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Validation(_)
        | Error::BadIndex(_)
        | Error::UnknownDirection(_)
        | Error::NotADeformationDirection(_)
        | Error::KindMismatch(_)
        | Error::PoleCollision(_)
        | Error::DegenerateConfiguration(_)
        | Error::NonGenericApparentDivisor(_)
        | Error::InvariantSubbundle => EXIT_INVALID,
        Error::FlowSingular { .. } | Error::IntegrationFailure(_) => EXIT_NUMERIC,
        _ => EXIT_INTERNAL,
    }
}

fn kind_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

pub fn error_report(e: &Error) -> Value {
    json!({ "error": { "kind": kind_name(e), "message": e.to_string() }, "exit_code": exit_code(e) })
}

fn configure_threads() {
    if let Some(n) = std::env::var("ISOMONO_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second configuration in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses arguments, runs the command, writes the JSON report and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let report = json!({ "error": { "kind": "Usage", "message": e.to_string() }, "exit_code": EXIT_INVALID });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json"));
            return EXIT_INVALID;
        }
    };
    configure_threads();
    let started = std::time::Instant::now();
    let outcome = commands::execute(&cli.command);
    let (mut report, code) = match outcome {
        Ok(o) => (o.report, o.code),
        Err(e) => (error_report(&e), exit_code(&e)),
    };
    if cli.timing {
        if let Value::Object(m) = &mut report {
            m.insert("timing_ms".into(), json!(started.elapsed().as_secs_f64() * 1e3));
        }
    }
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json"));
    code
}
