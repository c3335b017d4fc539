//! Seeded experiment harness: eps sweeps with query-scaling fits,
//! success-rate calibration of square-root amplitude estimation, and the
//! distinguishing experiments in [`distinguish`].
//!
//! Every trial draws its randomness from `derive_seed` streams of the run
//! seed, and results are merged in (method, eps, trial) order, so a run is
//! reproducible regardless of how many worker threads it uses.

pub mod distinguish;
pub mod io;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amp_est::{sqrt_amp_est, EstimationResult};
use crate::closeness::{exact_closeness, folklore_query_estimate, folklore_sample_estimate, optimal_estimate, Quantity};
use crate::oracles::{block_encoding, PreparedPair};
use crate::qlin::{derive_seed, haar_state, seeded_rng, StateVector};
use crate::{Error, Result};

pub use distinguish::{
    default_f2_rounds, distinguish_f2, distinguish_td, run_distinguish, DistinguishOutcome, DistinguishSummary, Distinguisher, Verdict,
};
pub use io::{read_records_json, records_to_csv, records_to_json, write_records, RecordFormat};

/// Version stamped on every emitted record.
pub const SCHEMA_VERSION: u32 = 1;

/// Default eps grid for sweeps.
pub const DEFAULT_EPS_GRID: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Minimum trials per grid point in a sweep.
pub const MIN_SWEEP_TRIALS: usize = 100;

/// Estimator family and target quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    OptimalTd,
    OptimalF,
    OptimalF2,
    FolkloreQueryTd,
    FolkloreQueryF,
    FolkloreQueryF2,
    FolkloreSampleTd,
    FolkloreSampleF,
    FolkloreSampleF2,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::OptimalTd,
        Method::OptimalF,
        Method::OptimalF2,
        Method::FolkloreQueryTd,
        Method::FolkloreQueryF,
        Method::FolkloreQueryF2,
        Method::FolkloreSampleTd,
        Method::FolkloreSampleF,
        Method::FolkloreSampleF2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::OptimalTd => "optimal_td",
            Method::OptimalF => "optimal_f",
            Method::OptimalF2 => "optimal_f2",
            Method::FolkloreQueryTd => "folklore_query_td",
            Method::FolkloreQueryF => "folklore_query_f",
            Method::FolkloreQueryF2 => "folklore_query_f2",
            Method::FolkloreSampleTd => "folklore_sample_td",
            Method::FolkloreSampleF => "folklore_sample_f",
            Method::FolkloreSampleF2 => "folklore_sample_f2",
        }
    }

    pub fn quantity(&self) -> Quantity {
        match self {
            Method::OptimalTd | Method::FolkloreQueryTd | Method::FolkloreSampleTd => Quantity::TraceDistance,
            Method::OptimalF | Method::FolkloreQueryF | Method::FolkloreSampleF => Quantity::SqrtFidelity,
            Method::OptimalF2 | Method::FolkloreQueryF2 | Method::FolkloreSampleF2 => Quantity::SquaredFidelity,
        }
    }

    /// One estimate of this method's quantity on `pair`.
    pub fn estimate(&self, pair: &mut PreparedPair, eps: f64, rng_seed: u64) -> Result<EstimationResult> {
        let q = self.quantity();
        match self {
            Method::OptimalTd | Method::OptimalF | Method::OptimalF2 => optimal_estimate(pair, q, eps, rng_seed),
            Method::FolkloreQueryTd | Method::FolkloreQueryF | Method::FolkloreQueryF2 => {
                folklore_query_estimate(pair, q, eps, rng_seed)
            }
            Method::FolkloreSampleTd | Method::FolkloreSampleF | Method::FolkloreSampleF2 => {
                folklore_sample_estimate(pair, q, eps, rng_seed)
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts the full names plus the shorthands `td`, `f`, `f2` for the
    /// optimal estimators.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let short = match key.as_str() {
            "td" | "t" => Some(Method::OptimalTd),
            "f" => Some(Method::OptimalF),
            "f2" => Some(Method::OptimalF2),
            _ => None,
        };
        short
            .or_else(|| Method::ALL.into_iter().find(|m| m.name() == key))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method '{s}'")))
    }
}

/// Where sweep pairs come from.
#[derive(Debug, Clone, PartialEq)]
pub enum PairFamily {
    /// The same pair on every trial.
    Fixed { phi: StateVector, psi: StateVector },
    /// A fresh pair of independent Haar-random states per trial.
    Haar { qubits: usize },
}

impl PairFamily {
    /// Pair for `trial`; depends only on `seed` and `trial`, so every eps
    /// sees the same pairs.
    pub fn pair(&self, seed: u64, trial: usize) -> Result<PreparedPair> {
        match self {
            PairFamily::Fixed { phi, psi } => PreparedPair::from_states(phi, psi),
            PairFamily::Haar { qubits } => {
                let mut rng = seeded_rng(derive_seed(seed, 2 * trial as u64));
                let phi = haar_state(*qubits, &mut rng);
                let psi = haar_state(*qubits, &mut rng);
                PreparedPair::from_states(&phi, &psi)
            }
        }
    }
}

/// Aggregate of one (method, eps) grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema: u32,
    pub method: Method,
    pub eps: f64,
    pub trials: usize,
    /// Fraction of trials with `|estimate - exact| < eps`.
    pub success_rate: f64,
    /// Queries per oracle, or copies per state for sample methods.
    pub mean_queries: f64,
    /// Mean exact value of the target quantity over the trial pairs.
    pub exact_value: f64,
    pub seed: u64,
}

impl ExperimentRecord {
    /// `2/3 - 3 sqrt(s (1 - s) / trials)`, the binomial guard a calibrated
    /// estimator should clear.
    pub fn success_floor(&self) -> f64 {
        success_floor(self.success_rate, self.trials)
    }
}

/// `2/3` minus three binomial standard deviations of an observed rate.
pub fn success_floor(rate: f64, trials: usize) -> f64 {
    2.0 / 3.0 - 3.0 * (rate * (1.0 - rate) / trials as f64).sqrt()
}

/// Outcome of a single sweep trial.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Trial {
    success: bool,
    queries: u64,
    exact: f64,
}

/// Runs `work(i)` for `i in 0..count` and returns results in index order,
/// on `jobs` threads (`None`: the global rayon pool).
pub fn run_indexed<T, F>(count: usize, jobs: Option<usize>, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let go = || (0..count).into_par_iter().map(&work).collect::<Result<Vec<T>>>();
    match jobs {
        None => go(),
        Some(0) => Err(Error::InvalidParameter("jobs must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(go),
    }
}

fn validate_grid(eps_grid: &[f64]) -> Result<()> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidParameter("empty eps grid".into()));
    }
    if let Some(bad) = eps_grid.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::InvalidParameter(format!("eps {bad} outside (0, 1)")));
    }
    Ok(())
}

/// One record per eps for `method`, each over `trials` pairs from `family`.
pub fn sweep(
    family: &PairFamily,
    method: Method,
    eps_grid: &[f64],
    trials: usize,
    seed: u64,
    jobs: Option<usize>,
) -> Result<Vec<ExperimentRecord>> {
    validate_grid(eps_grid)?;
    if trials < MIN_SWEEP_TRIALS {
        return Err(Error::InvalidParameter(format!("sweeps need at least {MIN_SWEEP_TRIALS} trials, got {trials}")));
    }
    eps_grid
        .iter()
        .enumerate()
        .map(|(k, &eps)| {
            let results = run_indexed(trials, jobs, |i| {
                let mut pair = family.pair(seed, i)?;
                let exact = method.quantity().of(&exact_closeness(&pair)?);
                let est_seed = derive_seed(derive_seed(seed, 2 * i as u64 + 1), k as u64);
                let r = method.estimate(&mut pair, eps, est_seed)?;
                Ok(Trial { success: r.error_against(exact) < eps, queries: r.queries_used, exact })
            })?;
            Ok(aggregate(method, eps, seed, &results))
        })
        .collect()
}

fn aggregate(method: Method, eps: f64, seed: u64, results: &[Trial]) -> ExperimentRecord {
    let n = results.len() as f64;
    ExperimentRecord {
        schema: SCHEMA_VERSION,
        method,
        eps,
        trials: results.len(),
        success_rate: results.iter().filter(|t| t.success).count() as f64 / n,
        mean_queries: results.iter().map(|t| t.queries as f64).sum::<f64>() / n,
        exact_value: results.iter().map(|t| t.exact).sum::<f64>() / n,
        seed,
    }
}

/// Least-squares slope of `ln(mean_queries)` against `ln(1/eps)`.
pub fn fit_scaling(records: &[ExperimentRecord]) -> Result<f64> {
    let mut distinct: Vec<f64> = records.iter().map(|r| r.eps).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidParameter(format!("scaling fit needs 3 distinct eps, got {}", distinct.len())));
    }
    if records.iter().any(|r| !(r.mean_queries > 0.0) || !(r.eps > 0.0)) {
        return Err(Error::InvalidParameter("scaling fit needs positive eps and query counts".into()));
    }
    let xs: Vec<f64> = records.iter().map(|r| (1.0 / r.eps).ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.mean_queries.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// `sqrt(1/2 sum_j (sqrt p(j) - sqrt q(j))^2)`.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    for d in [p, q] {
        crate::qlin::MeasurementDistribution::new(d.to_vec())?;
    }
    let s: f64 = p.iter().zip(q).map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)).sum();
    Ok((0.5 * s).sqrt().clamp(0.0, 1.0))
}

/// Empirical success of square-root amplitude estimation at one `(p, delta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationRecord {
    pub p: f64,
    pub delta: f64,
    pub trials: usize,
    /// Fraction of trials with `|x - sqrt(p)| < delta`.
    pub success_rate: f64,
    pub queries_per_trial: u64,
    /// Raw `x` of every trial, in trial order.
    pub estimates: Vec<f64>,
}

impl CalibrationRecord {
    pub fn success_floor(&self) -> f64 {
        success_floor(self.success_rate, self.trials)
    }
}

/// Runs `trials` seeded square-root amplitude estimations on a two-qubit
/// block encoding of `p`.
pub fn calibrate_sqrt_amp_est(p: f64, delta: f64, trials: usize, seed: u64, jobs: Option<usize>) -> Result<CalibrationRecord> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let u = block_encoding(p, &StateVector::zero(1), &StateVector::basis(1, 1)?)?;
    let results = run_indexed(trials, jobs, |i| {
        let mut oracle = crate::oracles::CountingOracle::new(u.clone());
        sqrt_amp_est(&mut oracle, delta, derive_seed(seed, i as u64))
    })?;
    let target = p.sqrt();
    let estimates: Vec<f64> = results.iter().map(|r| r.estimate).collect();
    let successes = estimates.iter().filter(|x| (*x - target).abs() < delta).count();
    Ok(CalibrationRecord {
        p,
        delta,
        trials,
        success_rate: successes as f64 / trials as f64,
        queries_per_trial: results[0].queries_used,
        estimates,
    })
}
