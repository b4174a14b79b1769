//! Command-line front end for steerlab.
//!
//! Every subcommand writes one JSON envelope
//! `{schema, version, config, report, checks, pass}` (or CSV where noted) and
//! exits 0 when everything passes, 1 when a claim or identity fails and 2 on
//! usage, configuration or I/O errors. Reports carry no timestamps, so the
//! same flags and seed give byte-identical output.

mod ghjw_input;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use steerlab::identities::{IdentityCheck, IdentitySuite};
use steerlab::protocols::{
    default_stat_tol, fable_checks, photon_checks, run_fable, run_photon_trick, verify_claims,
    BobBasis, CarolStrategy, ClaimCheck, FableConfig, FableOrdering, PhotonOrdering,
    PhotonTrickConfig, Preparation,
};

pub use ghjw_input::{certify_input, GhjwInput};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: field `{field}`: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Core(#[from] steerlab::Error),
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::Fail => ExitCode::from(1),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "steerlab", version, about = "Ensemble steering laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the analytic identity suite
    Verify(VerifyArgs),
    /// Certify candidate decompositions of a density matrix by steering
    Ghjw(GhjwArgs),
    /// Simulate Bob sorting Alice's photons into one of two ensembles
    PhotonTrick(PhotonArgs),
    /// Simulate Carol supplying spin pairs to Alice and Bob
    Fable(FableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Numerical tolerance
    #[arg(long, default_value_t = steerlab::DEFAULT_TOL, value_parser = positive)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Random unitaries in the rotational sweep
    #[arg(long, default_value_t = 100)]
    pub rotations: usize,
    /// Offset added to the suite's 1/√2 constant
    #[arg(long, default_value_t = 0.0, hide = true, value_parser = finite)]
    pub perturb: f64,
}

#[derive(Debug, Args)]
pub struct GhjwArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// JSON file with the density matrix and candidate ensembles
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    /// Number of pairs
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..=100_000_000))]
    pub pairs: u64,
    /// Absolute bound for statistical claims [default: 0.01, widened as 1/√N below 10⁵ pairs]
    #[arg(long, value_parser = positive)]
    pub stat_tol: Option<f64>,
    /// Also write the per-pair transcript as CSV
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    Hv,
    Diagonal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhotonOrderArg {
    BobFirst,
    AliceFirst,
}

#[derive(Debug, Args)]
pub struct PhotonArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Weight of |H⟩ in Alice's state
    #[arg(long, default_value_t = 0.7, value_parser = open_unit)]
    pub p: f64,
    /// Bob's measurement basis
    #[arg(long, value_enum, default_value_t = BasisArg::Hv)]
    pub basis: BasisArg,
    #[arg(long, value_enum, default_value_t = PhotonOrderArg::BobFirst)]
    pub ordering: PhotonOrderArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PrepArg {
    Direct1,
    Direct2,
    Quartet,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Case1,
    Case2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FableOrderArg {
    First,
    Last,
}

#[derive(Debug, Args)]
pub struct FableArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// How Carol prepares the pairs
    #[arg(long, value_enum, default_value_t = PrepArg::Quartet)]
    pub prep: PrepArg,
    /// Which story Carol tells
    #[arg(long, value_enum, default_value_t = StrategyArg::Case1)]
    pub strategy: StrategyArg,
    /// Whether Carol measures before or after Alice and Bob
    #[arg(long, value_enum, default_value_t = FableOrderArg::First)]
    pub ordering: FableOrderArg,
}

fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err("must be finite".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x = finite(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err("must be positive".into())
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let x = finite(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize, K: Serialize> {
    schema: &'a str,
    version: &'a str,
    config: C,
    report: R,
    checks: K,
    pass: bool,
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    bytes
}

fn csv_error(path: &str, e: csv::Error) -> CliError {
    CliError::Io {
        path: path.into(),
        source: io::Error::other(e),
    }
}

fn print_checks(checks: &[ClaimCheck]) {
    for c in checks {
        let observed = c.observed.map_or("n/a".into(), |o| format!("{o:.6}"));
        eprintln!(
            "{} {}: observed {observed}, expected {} ± {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            c.tolerance
        );
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Verify(a) => cmd_verify(&a),
        Command::Ghjw(a) => cmd_ghjw(&a),
        Command::PhotonTrick(a) => cmd_photon_trick(&a),
        Command::Fable(a) => cmd_fable(&a),
    }
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    max_residual: f64,
    failed: Vec<&'a str>,
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let suite = IdentitySuite {
        tol: a.common.tol,
        perturbation: a.perturb,
        rotation_samples: a.rotations,
        seed: a.common.seed,
    };
    let checks = suite.run();
    let pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        eprintln!(
            "{} {}: residual {:.3e} (tol {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        );
    }
    let summary = VerifySummary {
        max_residual: checks.iter().map(|c| c.residual).fold(0.0, f64::max),
        failed: checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect(),
    };
    if !pass {
        eprintln!("max residual {:.3e}", summary.max_residual);
    }
    let bytes = match a.common.format {
        Format::Json => to_json(&Envelope {
            schema: "identities-v1",
            version: VERSION,
            config: &suite,
            report: &summary,
            checks: &checks,
            pass,
        }),
        Format::Csv => identities_csv(&checks)?,
    };
    write_out(a.common.out.as_deref(), &bytes)?;
    Ok(Outcome::from_pass(pass))
}

fn identities_csv(checks: &[IdentityCheck]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in checks {
        w.serialize(c).map_err(|e| csv_error("<csv>", e))?;
    }
    w.into_inner().map_err(|e| CliError::Io {
        path: "<csv>".into(),
        source: e.into_error(),
    })
}

#[derive(Serialize)]
struct GhjwConfigEcho<'a> {
    tol: f64,
    seed: u64,
    density: steerlab::states::json::WireMatrix,
    from_first_ensemble: bool,
    ensembles: &'a [steerlab::states::json::WireEnsemble],
}

pub fn cmd_ghjw(a: &GhjwArgs) -> Result<Outcome, CliError> {
    if a.common.format == Format::Csv {
        return Err(CliError::Config("ghjw reports are JSON only".into()));
    }
    let path = &a.config;
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let input = GhjwInput::parse(&text, path)?;
    let w = input.resolve_density(a.common.tol)?;
    let report = certify_input(&w, &input, a.common.tol);
    let pass = report.all_certified();
    for c in &report.candidates {
        match &c.error {
            None if c.valid => eprintln!("PASS candidate {}", c.index),
            None => eprintln!("FAIL candidate {}", c.index),
            Some(e) => eprintln!("FAIL candidate {}: {e}", c.index),
        }
    }
    let bytes = to_json(&Envelope {
        schema: "ghjw-certification-v1",
        version: VERSION,
        config: GhjwConfigEcho {
            tol: a.common.tol,
            seed: a.common.seed,
            density: ghjw_input::resolved_density_wire(&w),
            from_first_ensemble: input.from_first_ensemble,
            ensembles: &input.ensembles,
        },
        report: &report,
        checks: (),
        pass,
    });
    write_out(a.common.out.as_deref(), &bytes)?;
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct ProtocolConfigEcho<C: Serialize> {
    #[serde(flatten)]
    protocol: C,
    stat_tol: f64,
}

fn write_transcript(
    path: &Path,
    write: impl FnOnce(fs::File) -> Result<(), csv::Error>,
) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write(file).map_err(|e| csv_error(&path.display().to_string(), e))
}

pub fn cmd_photon_trick(a: &PhotonArgs) -> Result<Outcome, CliError> {
    let cfg = PhotonTrickConfig {
        n_pairs: a.protocol.pairs as usize,
        seed: a.common.seed,
        p: a.p,
        bob_basis: match a.basis {
            BasisArg::Hv => BobBasis::Hv,
            BasisArg::Diagonal => BobBasis::Diagonal,
        },
        ordering: match a.ordering {
            PhotonOrderArg::BobFirst => PhotonOrdering::BobFirst,
            PhotonOrderArg::AliceFirst => PhotonOrdering::AliceFirst,
        },
    };
    let stat_tol = a.protocol.stat_tol.unwrap_or_else(|| default_stat_tol(cfg.n_pairs));
    let (transcript, report) = run_photon_trick(&cfg)?;
    let checks = photon_checks(&cfg, &report, stat_tol);
    let pass = checks.iter().all(|c| c.pass);
    print_checks(&checks);
    if let Some(path) = &a.protocol.transcript {
        write_transcript(path, |f| transcript.write_csv(f))?;
    }
    let bytes = match a.common.format {
        Format::Json => to_json(&Envelope {
            schema: steerlab::protocols::PHOTON_SCHEMA,
            version: VERSION,
            config: ProtocolConfigEcho { protocol: &cfg, stat_tol },
            report: &report,
            checks: &checks,
            pass,
        }),
        Format::Csv => {
            let mut buf = Vec::new();
            transcript.write_csv(&mut buf).map_err(|e| csv_error("<csv>", e))?;
            buf
        }
    };
    write_out(a.common.out.as_deref(), &bytes)?;
    Ok(Outcome::from_pass(pass))
}

pub fn cmd_fable(a: &FableArgs) -> Result<Outcome, CliError> {
    let cfg = FableConfig {
        n_pairs: a.protocol.pairs as usize,
        seed: a.common.seed,
        preparation: match a.prep {
            PrepArg::Direct1 => Preparation::DirectCaseI,
            PrepArg::Direct2 => Preparation::DirectCaseII,
            PrepArg::Quartet => Preparation::EntangledQuartet,
        },
        carol_strategy: match a.strategy {
            StrategyArg::Case1 => CarolStrategy::CaseITrick,
            StrategyArg::Case2 => CarolStrategy::CaseIITrick,
        },
        ordering: match a.ordering {
            FableOrderArg::First => FableOrdering::CarolFirst,
            FableOrderArg::Last => FableOrdering::CarolLast,
        },
    };
    let stat_tol = a.protocol.stat_tol.unwrap_or_else(|| default_stat_tol(cfg.n_pairs));
    let transcript = run_fable(&cfg)?;
    let report = verify_claims(&transcript);
    let checks = fable_checks(&report, &cfg, stat_tol);
    let pass = checks.iter().all(|c| c.pass);
    print_checks(&checks);
    if let Some(path) = &a.protocol.transcript {
        write_transcript(path, |f| transcript.write_csv(f))?;
    }
    let bytes = match a.common.format {
        Format::Json => to_json(&Envelope {
            schema: steerlab::protocols::FABLE_SCHEMA,
            version: VERSION,
            config: ProtocolConfigEcho { protocol: &cfg, stat_tol },
            report: &report,
            checks: &checks,
            pass,
        }),
        Format::Csv => {
            let mut buf = Vec::new();
            transcript.write_csv(&mut buf).map_err(|e| csv_error("<csv>", e))?;
            buf
        }
    };
    write_out(a.common.out.as_deref(), &bytes)?;
    Ok(Outcome::from_pass(pass))
}

/// Parses `args` and runs; usage and configuration errors exit 2.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
