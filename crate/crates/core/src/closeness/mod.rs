//! Pure-state closeness: exact values, the `O(1/eps)` estimators, and the
//! SWAP-test baselines in [`folklore`].
//!
//! For pure states `F = |<phi|psi>|`, `T = sqrt(1 - F^2)`, and the minimum
//! error of telling the two apart with equal priors is `1/2 - T/2`.

pub mod folklore;

use serde::Serialize;

use crate::amp_est::{sqrt_amp_est, sqrt_amp_est_queries, EstimationResult, DEFAULT_EPSILON_FAIL};
use crate::oracles::PreparedPair;
use crate::{Error, Result};

pub use folklore::{
    folklore_query_estimate, folklore_query_estimators, folklore_sample_estimate, folklore_sample_estimators,
    folklore_queries, folklore_samples, samples_for_squared_fidelity, swap_test_circuit, swap_test_distribution, swap_test_oracle, swap_test_shot,
};

/// Which closeness measure an estimator targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    TraceDistance,
    SqrtFidelity,
    SquaredFidelity,
}

impl Quantity {
    /// The exact value of this quantity in `report`.
    pub fn of(&self, report: &ClosenessReport) -> f64 {
        match self {
            Quantity::TraceDistance => report.trace_distance,
            Quantity::SqrtFidelity => report.sqrt_fidelity,
            Quantity::SquaredFidelity => report.squared_fidelity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportMethod {
    Optimal,
    FolkloreQuery,
    FolkloreSample,
    Exact,
}

/// All closeness measures for one pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosenessReport {
    pub trace_distance: f64,
    pub sqrt_fidelity: f64,
    pub squared_fidelity: f64,
    /// `1/2 - trace_distance / 2`.
    pub helstrom_error: f64,
    pub method: ReportMethod,
    /// Queries to each oracle (query methods), copies of each state
    /// (sample method), or zero (exact).
    pub queries_or_samples: u64,
}

impl ClosenessReport {
    pub(crate) fn new(
        trace_distance: f64,
        sqrt_fidelity: f64,
        squared_fidelity: f64,
        method: ReportMethod,
        queries_or_samples: u64,
    ) -> Self {
        Self {
            trace_distance,
            sqrt_fidelity,
            squared_fidelity,
            helstrom_error: helstrom_error(trace_distance),
            method,
            queries_or_samples,
        }
    }
}

/// Minimum discrimination error for equal priors, `1/2 - T/2`.
pub fn helstrom_error(trace_distance: f64) -> f64 {
    0.5 - 0.5 * trace_distance
}

/// Ground truth from the state vectors; uses no queries.
pub fn exact_closeness(pair: &PreparedPair) -> Result<ClosenessReport> {
    let overlap = pair.phi_state().inner(&pair.psi_state())?;
    let squared = overlap.norm_sqr().min(1.0);
    Ok(ClosenessReport::new((1.0 - squared).sqrt(), overlap.norm().min(1.0), squared, ReportMethod::Exact, 0))
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps {eps} outside (0, 1)")));
    }
    Ok(())
}

/// Trace distance via square-root amplitude estimation on `W`. Queries are
/// per oracle: each application of `W` uses `U_phi` and `U_psi` once.
pub fn estimate_trace_distance(pair: &mut PreparedPair, eps: f64, rng_seed: u64) -> Result<EstimationResult> {
    check_eps(eps)?;
    let mut w = pair.w_oracle()?;
    sqrt_amp_est(&mut w, eps, rng_seed)
}

/// Square-root fidelity via square-root amplitude estimation on `W'`.
pub fn estimate_sqrt_fidelity(pair: &mut PreparedPair, eps: f64, rng_seed: u64) -> Result<EstimationResult> {
    check_eps(eps)?;
    let mut w = pair.w_prime_oracle()?;
    sqrt_amp_est(&mut w, eps, rng_seed)
}

/// Squared fidelity as `1 - x^2` for an `eps/2`-accurate trace-distance
/// estimate `x`.
pub fn estimate_squared_fidelity(pair: &mut PreparedPair, eps: f64, rng_seed: u64) -> Result<EstimationResult> {
    check_eps(eps)?;
    let mut res = estimate_trace_distance(pair, eps / 2.0, rng_seed)?;
    let x = res.estimate;
    res.estimate = (1.0 - x * x).clamp(0.0, 1.0);
    res.raw_outcomes = vec![res.estimate];
    Ok(res)
}

/// Per-oracle query count of one optimal estimate of `quantity` at `eps`.
pub fn optimal_queries(quantity: Quantity, eps: f64) -> Result<u64> {
    check_eps(eps)?;
    match quantity {
        Quantity::TraceDistance | Quantity::SqrtFidelity => sqrt_amp_est_queries(eps, DEFAULT_EPSILON_FAIL),
        Quantity::SquaredFidelity => sqrt_amp_est_queries(eps / 2.0, DEFAULT_EPSILON_FAIL),
    }
}

/// Dispatches to the optimal estimator for `quantity`.
pub fn optimal_estimate(pair: &mut PreparedPair, quantity: Quantity, eps: f64, rng_seed: u64) -> Result<EstimationResult> {
    match quantity {
        Quantity::TraceDistance => estimate_trace_distance(pair, eps, rng_seed),
        Quantity::SqrtFidelity => estimate_sqrt_fidelity(pair, eps, rng_seed),
        Quantity::SquaredFidelity => estimate_squared_fidelity(pair, eps, rng_seed),
    }
}

/// Runs the three optimal estimators independently at `eps`.
pub fn optimal_estimators(pair: &mut PreparedPair, eps: f64, rng_seed: u64) -> Result<ClosenessReport> {
    let seeds = |i| crate::qlin::derive_seed(rng_seed, i);
    let t = estimate_trace_distance(pair, eps, seeds(0))?;
    let f = estimate_sqrt_fidelity(pair, eps, seeds(1))?;
    let f2 = estimate_squared_fidelity(pair, eps, seeds(2))?;
    let total = t.queries_used + f.queries_used + f2.queries_used;
    Ok(ClosenessReport::new(t.estimate, f.estimate, f2.estimate, ReportMethod::Optimal, total))
}
