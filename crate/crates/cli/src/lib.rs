//! Command-line front end: argument parsing, dispatch, reports and the
//! result cache.
//!
//! Exit codes: 0 success, 1 verification failed, 2 inconclusive (a bounded
//! search found nothing), 3 input error.

pub mod cache;
mod commands;
pub mod report;

use cache::{cache_key, Cache};
use clap::{Args, Parser, Subcommand};
use report::{Outcome, Report, Status};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Precision accepted on the command line.
pub const MIN_PREC_BITS: u32 = 64;
pub const MAX_PREC_BITS: u32 = 1 << 16;

#[derive(Parser, Debug)]
#[command(name = "cmpl", version, about = "Period relations of CM abelian varieties: exact and certified computations")]
pub struct Cli {
    /// Working precision in bits for numeric pipelines.
    #[arg(long, global = true, visible_alias = "prec")]
    pub prec_bits: Option<u32>,
    /// Degree bound for algebraic reconstruction.
    #[arg(long, global = true)]
    pub degree_bound: Option<usize>,
    /// Coefficient height bound: an integer, `10^k` or `1ek`.
    #[arg(long, global = true)]
    pub height_bound: Option<String>,
    /// Cache directory (falls back to CMPL_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Emit the JSON report instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// CM data: repeat `--min-poly`/`--phi` for products, or give a JSON file
/// with a list of CM types.
#[derive(Args, Debug, Clone, Default)]
pub struct CmArgs {
    /// Defining polynomial of a CM field, e.g. "x^2+1".
    #[arg(long = "min-poly")]
    pub min_poly: Vec<String>,
    /// CM type as comma-separated 0-based embedding indices, e.g. "0" or "0,2".
    #[arg(long)]
    pub phi: Vec<String>,
    /// JSON file: an array of {"min_poly": ..., "phi": [...]}.
    #[arg(long)]
    pub types: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Relation lattice, Mumford-Tate dimension and quadratic analysis.
    Relations(CmArgs),
    /// Bi-algebraic structure operations on JSON inputs.
    Biq {
        #[command(subcommand)]
        op: BiqOp,
    },
    /// Siegel tangent structure, roots and root-space analysis.
    Siegel {
        #[arg(long)]
        g: Option<usize>,
        #[command(flatten)]
        cm: CmArgs,
    },
    /// Hilbert tangent structure.
    Hilbert {
        #[arg(long)]
        g: usize,
    },
    /// Weyl (Galois generic) test and special subvarieties.
    Weyl {
        #[arg(long = "min-poly")]
        min_poly: String,
    },
    /// Certified numeric pipelines.
    Verify {
        #[command(subcommand)]
        op: VerifyOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum BiqOp {
    /// Isotypic partition of a structure.
    Decompose {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        lattice: Option<PathBuf>,
    },
    /// Number of bi-algebraic subspaces.
    Count {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        lattice: Option<PathBuf>,
    },
    /// Whether a presented subspace is bi-algebraic.
    Test {
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long)]
        lattice: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyOp {
    /// Algebraicity of j'(τ0)·π/θ² at a CM point.
    #[command(name = "siegel-g1")]
    SiegelG1 {
        #[arg(long, allow_hyphen_values = true)]
        tau0: String,
    },
    /// η1 in Q̄·θ + Q̄·(2πi/θ) for a CM discriminant.
    #[command(name = "beta-diag")]
    BetaDiag {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Rational offset added to η1, e.g. "1/10000000000" or "1e-10".
        #[arg(long, allow_hyphen_values = true)]
        perturb: Option<String>,
    },
    /// Integer-relation search among period products (evidence only).
    Hasc {
        /// Comma-separated CM discriminants.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        discs: Vec<i64>,
        /// Semicolon-separated constant expressions (pi, i, sqrt, theta(d)).
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        /// products, reciprocity or raw.
        #[arg(long)]
        variant: Option<String>,
    },
}

/// Validated configuration echoed in every report.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub subject: Value,
    pub prec_bits: Option<u32>,
    pub degree_bound: Option<usize>,
    pub height_bound: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub json: bool,
}

impl RunConfig {
    /// The part of the configuration that determines the result.
    pub fn request(&self) -> Value {
        json!({
            "command": self.command,
            "subject": self.subject,
            "prec_bits": self.prec_bits,
            "degree_bound": self.degree_bound,
            "height_bound": self.height_bound,
        })
    }

    pub fn echo(&self) -> Value {
        let mut v = self.request();
        v["format"] = json!(if self.json { "json" } else { "text" });
        v["cache_dir"] = json!(self.cache_dir.as_ref().map(|p| p.display().to_string()));
        v
    }
}

/// An input problem: reported with exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

/// Failure while running a command: input errors exit 3, the rest exit 1.
#[derive(Debug)]
pub enum RunError {
    Input(String),
    Failed(String),
}

impl From<InputError> for RunError {
    fn from(e: InputError) -> Self {
        RunError::Input(e.0)
    }
}

fn write_out(w: &mut dyn Write, s: &str) {
    let _ = w.write_all(s.as_bytes());
    let _ = w.flush();
}

/// Parses `argv` (including the program name), runs the command and writes
/// the report. `env_cache_dir` is the value of `CMPL_CACHE_DIR`.
pub fn run(argv: &[String], env_cache_dir: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                EXIT_OK
            } else {
                EXIT_INPUT
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                write_out(out, &text);
            } else {
                write_out(err, &text);
            }
            return code;
        }
    };
    let json_out = cli.json;
    let started = Instant::now();
    let config = match commands::config(&cli, env_cache_dir) {
        Ok(c) => c,
        Err(e) => return input_error(&e.0, json_out, out, err),
    };
    let cache = config.cache_dir.as_ref().and_then(|d| match Cache::open(d) {
        Ok(c) => Some(c),
        Err(e) => {
            write_out(err, &format!("warning: cache disabled ({}): {e}\n", d.display()));
            None
        }
    });
    let key = cache_key(&json!({ "schema_version": report::SCHEMA_VERSION, "version": env!("CARGO_PKG_VERSION"), "request": config.request() }));
    let computed = match &cache {
        Some(c) => c.get_or_compute(&key, || commands::execute(&cli, &config).map(|o| o.to_json())),
        None => commands::execute(&cli, &config).map(|o| (o.to_json(), false)),
    };
    let (payload, hit) = match computed {
        Ok(v) => v,
        Err(RunError::Input(m)) => return input_error(&m, json_out, out, err),
        Err(RunError::Failed(m)) => {
            let rep = Report::failure(&config, &m, started.elapsed());
            emit(&rep, json_out, out);
            write_out(err, &format!("error: verification failed: {m}\n"));
            return EXIT_FAILED;
        }
    };
    let outcome = match Outcome::from_json(&payload) {
        Some(o) => o,
        None => return input_error("corrupt cached result", json_out, out, err),
    };
    let rep = Report::new(&config, outcome, started.elapsed(), cache.is_some(), hit, &key);
    emit(&rep, json_out, out);
    rep.exit_code()
}

fn emit(rep: &Report, json_out: bool, out: &mut dyn Write) {
    if json_out {
        write_out(out, &format!("{}\n", serde_json::to_string_pretty(&rep.to_json()).expect("serializable")));
    } else {
        write_out(out, &rep.to_text());
    }
}

fn input_error(msg: &str, json_out: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if json_out {
        let v = json!({
            "schema_version": report::SCHEMA_VERSION,
            "tool": report::tool(),
            "status": Status::InputError.as_str(),
            "exit_code": EXIT_INPUT,
            "error": msg,
        });
        write_out(out, &format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")));
    }
    write_out(err, &format!("error: {msg}\n"));
    EXIT_INPUT
}
