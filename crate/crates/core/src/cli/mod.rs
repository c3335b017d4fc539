//! The `qcloseness` command line.
//!
//! Exit codes: `0` success, `2` usage (unknown flag, bad value, eps outside
//! `(0, 1)`), `3` input (unreadable or malformed state file), `4` numeric
//! or runtime failure. Nothing is written to the report on an error path.
//!
//! `QCLOSENESS_SEED` and `QCLOSENESS_JOBS` supply defaults for `--seed` and
//! `--jobs`.

pub mod family;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::closeness::{exact_closeness, swap_test_distribution, ClosenessReport, Quantity};
use crate::experiments::{
    default_f2_rounds, fit_scaling, records_to_csv, records_to_json, run_distinguish, sweep, Distinguisher,
    Method, PairFamily, DEFAULT_EPS_GRID, MIN_SWEEP_TRIALS,
};
use crate::oracles::PreparedPair;
use crate::qlin::{seeded_rng, write_state_file, StateVector};
use crate::Error;

pub use family::{StateFamily, StateSource};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// A failure with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn input(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_INPUT, message: e.to_string() }
    }

    fn numeric(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_NUMERIC, message: e.to_string() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("eps must lie in (0, 1), got {v}"))
    }
}

fn parse_source(s: &str) -> Result<StateSource, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "qcloseness", version, about = "Pure-state trace distance and fidelity estimation with query accounting")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Base seed for every random choice.
    #[arg(long, env = "QCLOSENESS_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for trials (default: all cores).
    #[arg(long, env = "QCLOSENESS_JOBS")]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct Pair {
    /// JSON state file or family:NAME(key=value,...).
    #[arg(long, value_parser = parse_source)]
    state_a: StateSource,
    #[arg(long, value_parser = parse_source)]
    state_b: StateSource,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// One estimate of T, F or F^2 with its query or sample cost.
    Estimate {
        /// td, f, f2, or a full method name such as folklore_query_td.
        #[arg(long, value_parser = parse_method, default_value = "td")]
        method: Method,
        #[arg(long, value_parser = parse_eps)]
        eps: f64,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Exact T, F, F^2 and Helstrom error from the state vectors.
    Exact {
        #[command(flatten)]
        pair: Pair,
        /// Also write both states as JSON files into this directory.
        #[arg(long)]
        save_states: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Success rate and mean cost over an eps grid, with a log-log fit.
    Sweep {
        #[arg(long, value_parser = parse_method, default_value = "optimal_td")]
        method: Method,
        /// Grid points; repeat or comma-separate. Defaults to 0.1,0.05,0.025,0.0125.
        #[arg(long, value_parser = parse_eps, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, default_value_t = MIN_SWEEP_TRIALS)]
        trials: usize,
        /// Qubits of the Haar-random pairs (ignored with --state-a/--state-b).
        #[arg(long, default_value_t = 3)]
        qubits: usize,
        #[arg(long, value_parser = parse_source, requires = "state_b")]
        state_a: Option<StateSource>,
        #[arg(long, value_parser = parse_source, requires = "state_a")]
        state_b: Option<StateSource>,
        #[command(flatten)]
        common: Common,
    },
    /// Tell p+ from p- with the trace-distance or squared-fidelity estimator.
    Distinguish {
        #[arg(long, value_parser = ["td", "f2"], default_value = "td")]
        which: String,
        #[arg(long, value_parser = parse_eps, default_value = "0.1")]
        eps: f64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Trials per ground truth.
        #[arg(long, default_value_t = 300)]
        trials: usize,
        /// Median rounds for the f2 distinguisher (default: fewest reaching 8/9).
        #[arg(long)]
        rounds: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// SWAP-test ancilla law and a sampled frequency.
    SwapTest {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[command(flatten)]
        common: Common,
    },
}

/// What to run.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Estimate { method: Method, eps: f64, state_a: StateSource, state_b: StateSource },
    Exact { state_a: StateSource, state_b: StateSource, save_states: Option<PathBuf> },
    Sweep { method: Method, eps_grid: Vec<f64>, trials: usize, family: SweepFamily },
    Distinguish { which: Distinguisher, eps: f64, n: usize, trials: usize, rounds: u32 },
    SwapTest { state_a: StateSource, state_b: StateSource, shots: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepFamily {
    Haar { qubits: usize },
    Fixed { state_a: StateSource, state_b: StateSource },
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn eps(&self) -> Option<f64> {
        match &self.command {
            Command::Estimate { eps, .. } | Command::Distinguish { eps, .. } => Some(*eps),
            _ => None,
        }
    }
}

fn check_file(source: &StateSource) -> Result<(), CliError> {
    if let StateSource::File(p) = source {
        std::fs::File::open(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

/// Parses and validates `argv` (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        let code = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                EXIT_OK
            }
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.render().to_string() }
    })?;

    let (command, common, default_format) = match cli.command {
        Cmd::Estimate { method, eps, pair, common } => {
            (Command::Estimate { method, eps, state_a: pair.state_a, state_b: pair.state_b }, common, Format::Text)
        }
        Cmd::Exact { pair, save_states, common } => {
            (Command::Exact { state_a: pair.state_a, state_b: pair.state_b, save_states }, common, Format::Text)
        }
        Cmd::Sweep { method, eps, trials, qubits, state_a, state_b, common } => {
            if trials < MIN_SWEEP_TRIALS {
                return Err(CliError::usage(format!("sweep needs --trials >= {MIN_SWEEP_TRIALS}")));
            }
            let eps_grid = if eps.is_empty() { DEFAULT_EPS_GRID.to_vec() } else { eps };
            let family = match (state_a, state_b) {
                (Some(state_a), Some(state_b)) => SweepFamily::Fixed { state_a, state_b },
                _ => {
                    if qubits == 0 {
                        return Err(CliError::usage("--qubits must be positive"));
                    }
                    SweepFamily::Haar { qubits }
                }
            };
            (Command::Sweep { method, eps_grid, trials, family }, common, Format::Csv)
        }
        Cmd::Distinguish { which, eps, n, trials, rounds, common } => {
            if eps >= 0.5 {
                return Err(CliError::usage("distinguish needs eps < 1/2"));
            }
            if n < 2 || n % 2 != 0 {
                return Err(CliError::usage("--n must be even and at least 2"));
            }
            if trials == 0 {
                return Err(CliError::usage("--trials must be positive"));
            }
            let rounds = rounds.unwrap_or_else(default_f2_rounds);
            if rounds % 2 == 0 {
                return Err(CliError::usage("--rounds must be odd"));
            }
            let which = which.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
            (Command::Distinguish { which, eps, n, trials, rounds }, common, Format::Text)
        }
        Cmd::SwapTest { pair, shots, common } => {
            if shots == 0 {
                return Err(CliError::usage("--shots must be positive"));
            }
            (Command::SwapTest { state_a: pair.state_a, state_b: pair.state_b, shots }, common, Format::Text)
        }
    };
    if common.jobs == Some(0) {
        return Err(CliError::usage("--jobs must be positive"));
    }
    match &command {
        Command::Estimate { state_a, state_b, .. }
        | Command::Exact { state_a, state_b, .. }
        | Command::SwapTest { state_a, state_b, .. }
        | Command::Sweep { family: SweepFamily::Fixed { state_a, state_b }, .. } => {
            check_file(state_a)?;
            check_file(state_b)?;
        }
        _ => {}
    }
    Ok(RunConfig {
        command,
        seed: common.seed,
        jobs: common.jobs,
        format: common.format.unwrap_or(default_format),
        output: common.output,
    })
}

fn load_pair(a: &StateSource, b: &StateSource, warnings: &mut Vec<String>) -> Result<(StateVector, StateVector), CliError> {
    let a = a.load().map_err(CliError::input)?;
    let b = b.load().map_err(CliError::input)?;
    warnings.extend(a.warning);
    warnings.extend(b.warning);
    if a.state.dim() != b.state.dim() {
        return Err(CliError::input(format!("states have dimensions {} and {}", a.state.dim(), b.state.dim())));
    }
    Ok((a.state, b.state))
}

fn csv_row<S: Serialize>(row: &S) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(row).map_err(CliError::numeric)?;
    let bytes = w.into_inner().map_err(|e| CliError::numeric(e.error()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn json<S: Serialize>(v: &S) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(CliError::numeric)
}

#[derive(Serialize)]
struct EstimateReport {
    method: Method,
    eps: f64,
    estimate: f64,
    exact: f64,
    abs_error: f64,
    unit: crate::amp_est::CostUnit,
    queries_or_samples: u64,
    helstrom_error: Option<f64>,
    seed: u64,
}

#[derive(Serialize)]
struct SwapReport {
    exact_prob_zero: f64,
    shots: u64,
    zeros: u64,
    frequency: f64,
    sigma: f64,
    squared_fidelity_estimate: f64,
    squared_fidelity_exact: f64,
    seed: u64,
}

#[derive(Serialize)]
struct DistinguishReport {
    which: Distinguisher,
    eps: f64,
    n: usize,
    trials_per_truth: usize,
    rounds: u32,
    successes: usize,
    success_rate: f64,
    floor: f64,
    mean_queries: f64,
    seed: u64,
}

fn exact_text(r: &ClosenessReport) -> String {
    format!(
        "T={:.6}, F={:.6}, F²={:.6}, p_err={:.6}\n",
        r.trace_distance, r.sqrt_fidelity, r.squared_fidelity, r.helstrom_error
    )
}

fn render(config: &RunConfig, warnings: &mut Vec<String>) -> Result<String, CliError> {
    let numeric = CliError::numeric;
    match &config.command {
        Command::Estimate { method, eps, state_a, state_b } => {
            let (a, b) = load_pair(state_a, state_b, warnings)?;
            let mut pair = PreparedPair::from_states(&a, &b).map_err(CliError::input)?;
            let exact = method.quantity().of(&exact_closeness(&pair).map_err(numeric)?);
            let r = method.estimate(&mut pair, *eps, config.seed).map_err(numeric)?;
            let report = EstimateReport {
                method: *method,
                eps: *eps,
                estimate: r.estimate,
                exact,
                abs_error: r.error_against(exact),
                unit: r.unit,
                queries_or_samples: r.queries_used,
                helstrom_error: (method.quantity() == Quantity::TraceDistance)
                    .then(|| crate::closeness::helstrom_error(r.estimate)),
                seed: config.seed,
            };
            match config.format {
                Format::Json => json(&report),
                Format::Csv => csv_row(&report),
                Format::Text => {
                    let cost = match r.unit {
                        crate::amp_est::CostUnit::Queries => "queries",
                        crate::amp_est::CostUnit::Samples => "samples",
                    };
                    let mut s = format!(
                        "method={} eps={} estimate={:.6} exact={:.6} abs_error={:.6} {cost}={}",
                        method, eps, report.estimate, report.exact, report.abs_error, report.queries_or_samples
                    );
                    if let Some(p) = report.helstrom_error {
                        s += &format!(" p_err={p:.6}");
                    }
                    Ok(s + "\n")
                }
            }
        }
        Command::Exact { state_a, state_b, save_states } => {
            let (a, b) = load_pair(state_a, state_b, warnings)?;
            let r = exact_closeness(&PreparedPair::from_states(&a, &b).map_err(CliError::input)?).map_err(numeric)?;
            if let Some(dir) = save_states {
                save(dir, &a, &b)?;
            }
            match config.format {
                Format::Json => json(&r),
                Format::Csv => csv_row(&r),
                Format::Text => Ok(exact_text(&r)),
            }
        }
        Command::Sweep { method, eps_grid, trials, family } => {
            let family = match family {
                SweepFamily::Haar { qubits } => PairFamily::Haar { qubits: *qubits },
                SweepFamily::Fixed { state_a, state_b } => {
                    let (phi, psi) = load_pair(state_a, state_b, warnings)?;
                    PairFamily::Fixed { phi, psi }
                }
            };
            let records = sweep(&family, *method, eps_grid, *trials, config.seed, config.jobs).map_err(numeric)?;
            let exponent = fit_scaling(&records).ok();
            match config.format {
                Format::Json => {
                    if let Some(x) = exponent {
                        warnings.push(format!("fitted exponent: {x:.6}"));
                    }
                    Ok(records_to_json(&records).map_err(numeric)? + "\n")
                }
                Format::Csv => {
                    let mut s = records_to_csv(&records).map_err(numeric)?;
                    if let Some(x) = exponent {
                        s += &format!("# exponent={x:.6}\n");
                    }
                    Ok(s)
                }
                Format::Text => {
                    let mut s = String::new();
                    for r in &records {
                        s += &format!(
                            "method={} eps={} trials={} success_rate={:.6} floor={:.6} mean_queries={:.1} exact_value={:.6}\n",
                            r.method, r.eps, r.trials, r.success_rate, r.success_floor(), r.mean_queries, r.exact_value
                        );
                    }
                    if let Some(x) = exponent {
                        s += &format!("exponent={x:.6}\n");
                    }
                    Ok(s)
                }
            }
        }
        Command::Distinguish { which, eps, n, trials, rounds } => {
            let s = run_distinguish(*which, *eps, *n, *trials, *rounds, config.seed, config.jobs).map_err(numeric)?;
            let report = DistinguishReport {
                which: s.which,
                eps: s.eps,
                n: s.n,
                trials_per_truth: s.trials_per_truth,
                rounds: if *which == Distinguisher::F2 { *rounds } else { 1 },
                successes: s.successes,
                success_rate: s.success_rate,
                floor: s.floor,
                mean_queries: s.mean_queries,
                seed: config.seed,
            };
            match config.format {
                Format::Json => json(&report),
                Format::Csv => csv_row(&report),
                Format::Text => Ok(format!(
                    "which={} eps={} n={} trials_per_truth={} success_rate={:.6} floor={:.6} mean_queries={:.1} {}\n",
                    match which {
                        Distinguisher::Td => "td",
                        Distinguisher::F2 => "f2",
                    },
                    eps,
                    n,
                    trials,
                    s.success_rate,
                    s.floor,
                    s.mean_queries,
                    if s.success_rate >= s.floor { "ok" } else { "below_floor" }
                )),
            }
        }
        Command::SwapTest { state_a, state_b, shots } => {
            let (a, b) = load_pair(state_a, state_b, warnings)?;
            let pair = PreparedPair::from_states(&a, &b).map_err(CliError::input)?;
            let dist = swap_test_distribution(&pair).map_err(numeric)?;
            let sampler = dist.sampler();
            let mut rng = seeded_rng(config.seed);
            let zeros = (0..*shots).filter(|_| sampler.draw(&mut rng) == 0).count() as u64;
            let p0 = dist.get(0);
            let freq = zeros as f64 / *shots as f64;
            let report = SwapReport {
                exact_prob_zero: p0,
                shots: *shots,
                zeros,
                frequency: freq,
                sigma: (p0 * (1.0 - p0) / *shots as f64).sqrt(),
                squared_fidelity_estimate: (2.0 * freq - 1.0).clamp(0.0, 1.0),
                squared_fidelity_exact: exact_closeness(&pair).map_err(numeric)?.squared_fidelity,
                seed: config.seed,
            };
            match config.format {
                Format::Json => json(&report),
                Format::Csv => csv_row(&report),
                Format::Text => Ok(format!(
                    "Pr[0]={:.6} shots={} frequency={:.6} sigma={:.6} F²_est={:.6} F²={:.6}\n",
                    p0, shots, freq, report.sigma, report.squared_fidelity_estimate, report.squared_fidelity_exact
                )),
            }
        }
    }
}

fn save(dir: &Path, a: &StateVector, b: &StateVector) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::input)?;
    write_state_file(dir.join("state_a.json"), a).map_err(CliError::input)?;
    write_state_file(dir.join("state_b.json"), b).map_err(CliError::input)?;
    Ok(())
}

/// Runs `config`, writing the report to `out` (or to `--output`) and
/// warnings to `err`.
pub fn run_to(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let mut warnings = Vec::new();
    let result = render(config, &mut warnings);
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let text = result?;
    match &config.output {
        Some(path) => std::fs::write(path, text).map_err(CliError::input),
        None => out.write_all(text.as_bytes()).map_err(CliError::input),
    }
}

/// Runs `config` against stdout and stderr; returns the exit status.
pub fn run(config: &RunConfig) -> i32 {
    match run_to(config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

/// Parses `argv` and runs it; returns the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run(&config),
        Err(e) if e.code == EXIT_OK => {
            print!("{e}");
            EXIT_OK
        }
        Err(e) => {
            eprint!("{e}");
            if !e.message.ends_with('\n') {
                eprintln!();
            }
            e.code
        }
    }
}
