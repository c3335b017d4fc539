//! Square-root amplitude estimation and the amplitude estimation it
//! reproduces.
//!
//! For `U|0>_A|0>_B = sqrt(p)|0>_A|phi_0>_B + sqrt(1-p)|1>_A|phi_1>_B` the
//! Grover iterate `Q` built from `U` has eigenvalues `e^{+-2i theta_p}`
//! with `theta_p = arcsin(sqrt(p))`, and `U|0>|0>` lies in the span of the
//! two eigenvectors. Phase estimation on `Q` returns a phase near
//! `theta_p / pi` or `1 - theta_p / pi`; either way `|sin(pi phi)|` is
//! close to `sqrt(p)` because `|sin|` is 1-Lipschitz and symmetric about
//! `pi/2`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::oracles::{GroverIterate, QueryOracle};
use crate::phase_est::{circular_distance, run_phase_estimation, PhaseEstimateConfig, PhaseOutcome};
use crate::qlin::{derive_seed, StateVector};
use crate::{Error, Result};

/// Failure probability of the inner phase estimation; gives overall
/// success probability at least 2/3 without amplification.
pub const DEFAULT_EPSILON_FAIL: f64 = 1.0 / 3.0;

/// What `EstimationResult::queries_used` counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CostUnit {
    /// Oracle queries (to each oracle, for pair estimators).
    Queries,
    /// Independent copies of each state.
    Samples,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationResult {
    pub estimate: f64,
    pub queries_used: u64,
    pub unit: CostUnit,
    pub repetitions: u32,
    /// Per-repetition estimates, in run order.
    pub raw_outcomes: Vec<f64>,
    /// Measured phase registers behind `raw_outcomes`, when phase
    /// estimation was involved.
    pub phases: Vec<PhaseOutcome>,
}

impl EstimationResult {
    pub fn error_against(&self, exact: f64) -> f64 {
        (self.estimate - exact).abs()
    }
}

/// `|sin(pi phi)|`, clamped to `[0, 1]`.
pub fn estimate_from_phase(phi_tilde: f64) -> f64 {
    (PI * phi_tilde).sin().abs().clamp(0.0, 1.0)
}

/// Phase-estimation settings used for a `delta`-accurate estimate of
/// `sqrt(p)`: resolution `delta / pi` in turns.
pub fn sqrt_amp_est_config(delta: f64, epsilon_fail: f64) -> Result<PhaseEstimateConfig> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1)")));
    }
    PhaseEstimateConfig::new(delta / PI, epsilon_fail)
}

/// Exact query count of one [`sqrt_amp_est_with`] run: one application of
/// `U` to prepare `U|0>|0>`, then `2^t - 1` controlled `Q`s at two queries
/// each. That is `2^(t+1) - 1`.
pub fn sqrt_amp_est_queries(delta: f64, epsilon_fail: f64) -> Result<u64> {
    let cfg = sqrt_amp_est_config(delta, epsilon_fail)?;
    Ok(1 + 2 * cfg.controlled_applications())
}

/// Query count of one [`amp_est`] run at error `delta`.
pub fn amp_est_queries(delta: f64, epsilon_fail: f64) -> Result<u64> {
    sqrt_amp_est_queries(delta / 2.0, epsilon_fail)
}

/// Estimates `sqrt(p)` to within `delta` with probability at least 2/3.
pub fn sqrt_amp_est<O: QueryOracle + ?Sized>(u: &mut O, delta: f64, rng_seed: u64) -> Result<EstimationResult> {
    sqrt_amp_est_with(u, delta, DEFAULT_EPSILON_FAIL, rng_seed)
}

pub fn sqrt_amp_est_with<O: QueryOracle + ?Sized>(
    u: &mut O,
    delta: f64,
    epsilon_fail: f64,
    rng_seed: u64,
) -> Result<EstimationResult> {
    if u.num_qubits() == 0 {
        return Err(Error::MalformedBlock("the flag register A needs one qubit".into()));
    }
    let cfg = sqrt_amp_est_config(delta, epsilon_fail)?;

    let start = u.unitary().first_column();
    u.charge(1);
    let outcome = {
        let mut q = GroverIterate::new(&mut *u)?;
        run_phase_estimation(&mut q, &start, &cfg, rng_seed)?
    };
    let estimate = estimate_from_phase(outcome.phi_tilde);
    Ok(EstimationResult {
        estimate,
        queries_used: 1 + 2 * cfg.controlled_applications(),
        unit: CostUnit::Queries,
        repetitions: 1,
        raw_outcomes: vec![estimate],
        phases: vec![outcome],
    })
}

/// Estimates `p` to within `delta` by squaring a `delta/2`-accurate
/// estimate of `sqrt(p)`.
pub fn amp_est<O: QueryOracle + ?Sized>(u: &mut O, delta: f64, rng_seed: u64) -> Result<EstimationResult> {
    amp_est_with(u, delta, DEFAULT_EPSILON_FAIL, rng_seed)
}

pub fn amp_est_with<O: QueryOracle + ?Sized>(
    u: &mut O,
    delta: f64,
    epsilon_fail: f64,
    rng_seed: u64,
) -> Result<EstimationResult> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1)")));
    }
    let mut res = sqrt_amp_est_with(u, delta / 2.0, epsilon_fail, rng_seed)?;
    res.estimate = res.estimate * res.estimate;
    res.raw_outcomes = vec![res.estimate];
    Ok(res)
}

/// Median of `values` (upper median for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Median of `rounds` independent runs of `estimator`, each seeded from
/// `rng_seed` and its round index. With single-run success `q >= 2/3`
/// the median fails with probability at most `exp(-rounds / 18)`.
pub fn amplify<F>(mut estimator: F, rounds: u32, rng_seed: u64) -> Result<EstimationResult>
where
    F: FnMut(u64) -> Result<EstimationResult>,
{
    if rounds == 0 || rounds % 2 == 0 {
        return Err(Error::InvalidParameter(format!("rounds must be odd and positive, got {rounds}")));
    }
    if rounds == 1 {
        return estimator(rng_seed);
    }
    let mut raw = Vec::with_capacity(rounds as usize);
    let mut phases = Vec::new();
    let mut queries = 0;
    let mut unit = CostUnit::Queries;
    for round in 0..rounds {
        let r = estimator(derive_seed(rng_seed, round as u64))?;
        queries += r.queries_used;
        unit = r.unit;
        raw.push(r.estimate);
        phases.extend(r.phases);
    }
    Ok(EstimationResult {
        estimate: median(&raw),
        queries_used: queries,
        unit,
        repetitions: rounds,
        raw_outcomes: raw,
        phases,
    })
}

/// Smallest odd number of median rounds lifting single-run success
/// `base` to at least `target`, by the exact binomial tail.
pub fn rounds_for_confidence(base: f64, target: f64) -> u32 {
    let mut rounds = 1u32;
    while majority_success(rounds, base) < target {
        rounds += 2;
    }
    rounds
}

/// `Pr[Binomial(rounds, q) > rounds / 2]`.
pub fn majority_success(rounds: u32, q: f64) -> f64 {
    let n = rounds as i32;
    let mut total = 0.0;
    let mut coeff = 1.0f64; // C(n, k), built incrementally
    for k in 0..=n {
        if k > 0 {
            coeff = coeff * (n - k + 1) as f64 / k as f64;
        }
        if 2 * k > n {
            total += coeff * q.powi(k) * (1.0 - q).powi(n - k);
        }
    }
    total
}

/// Whether `|sqrt(x) - sqrt(x_tilde)| < sqrt(eps)`. Inputs must satisfy
/// `|x - x_tilde| <= eps`; inside the open strip the answer is always
/// `true`, and on its edge `x = 0, x_tilde = eps` the two sides are equal,
/// so the strict comparison is `false` there.
pub fn sqrt_stability_check(x: f64, x_tilde: f64, eps: f64) -> Result<bool> {
    if x < 0.0 || x_tilde < 0.0 || eps <= 0.0 {
        return Err(Error::InvalidParameter("need x, x_tilde >= 0 and eps > 0".into()));
    }
    if !((x - x_tilde).abs() <= eps) {
        return Err(Error::InvalidParameter(format!("|x - x_tilde| = {} exceeds eps = {eps}", (x - x_tilde).abs())));
    }
    Ok((x.sqrt() - x_tilde.sqrt()).abs() < eps.sqrt())
}

/// Whether `|x^2 - p| <= 2 |x - sqrt(p)|` for `x, p` in `[0, 1]`.
///
/// Both sides are evaluated with error-free corrections: `x^2 - p` through
/// a fused multiply-add, and `sqrt(p)` as `r + (p - r^2) / (2r)`. Naive
/// evaluation can report a one-ulp violation when `x` and `sqrt(p)` round
/// to the same double, for instance `x = |sin(pi/4)|` against `p = 0.5`.
pub fn squaring_reduction_holds(x_tilde: f64, p: f64) -> bool {
    let lhs = x_tilde.mul_add(x_tilde, -p).abs();
    let r = p.sqrt();
    let correction = if r > 0.0 { -r.mul_add(r, -p) / (2.0 * r) } else { 0.0 };
    let rhs = 2.0 * ((x_tilde - r) - correction).abs();
    lhs <= rhs
}

/// `pi * min{ |phi - a|, 1 - |phi - a|, |phi - b|, 1 - |phi - b| }` with
/// `a = theta_p / pi` and `b = 1 - a`: an upper bound on
/// `| |sin(pi phi)| - sqrt(p) |`.
pub fn sin_lipschitz_bound(phi_tilde: f64, p: f64) -> f64 {
    let a = p.sqrt().clamp(0.0, 1.0).asin() / PI;
    PI * circular_distance(phi_tilde, a).min(circular_distance(phi_tilde, 1.0 - a))
}

/// The exact `|0>_A` probability of a block encoding.
pub fn flag_probability(u: &crate::qlin::UnitaryOp) -> f64 {
    let start: StateVector = u.first_column();
    (0..start.dim() / 2).map(|i| start.amplitude(i).norm_sqr()).sum()
}
