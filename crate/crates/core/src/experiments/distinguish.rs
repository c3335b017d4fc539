//! Telling `p+` from `p-` with closeness estimators.
//!
//! `p+-(j) = (1 +- (-1)^j 2 eps) / n`. An oracle preparing
//! `sum_j sqrt(p(j)) |j>` is handed to a distinguisher that sees only the
//! oracle; the harness alone knows which distribution it encodes.
//!
//! * Trace distance: `T(U|0>, U_{p+}|0>)` is `0` under `p+` and `2 eps`
//!   under `p-`. Estimate it to `eps` and answer `p+` iff `d < eps`.
//! * Squared fidelity against the comb state `sqrt(2/n) sum_j |2j>`: it is
//!   `1/2 + eps` under `p+` and `1/2 - eps` under `p-`. Estimate it to
//!   `eps` and answer `p+` iff `d > 1/2`.

use serde::Serialize;

use super::{run_indexed, success_floor};
use crate::amp_est::{amplify, rounds_for_confidence, DEFAULT_EPSILON_FAIL};
use crate::closeness::{estimate_squared_fidelity, estimate_trace_distance};
use crate::oracles::{build_distribution_oracle, comb_distribution, perturbed_uniform, CountingOracle, Perturbation, PreparedPair};
use crate::qlin::derive_seed;
use crate::{Error, Result};

/// Which closeness estimator a distinguisher uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinguisher {
    Td,
    F2,
}

impl std::str::FromStr for Distinguisher {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "td" => Ok(Distinguisher::Td),
            "f2" => Ok(Distinguisher::F2),
            other => Err(Error::InvalidParameter(format!("unknown distinguisher '{other}' (td or f2)"))),
        }
    }
}

/// What a distinguisher decides, before the harness compares it with the
/// truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub verdict: Perturbation,
    pub statistic_d: f64,
    /// Queries made to the unknown oracle.
    pub queries: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistinguishOutcome {
    pub truth: Perturbation,
    pub verdict: Perturbation,
    pub statistic_d: f64,
    pub queries: u64,
}

impl DistinguishOutcome {
    pub fn correct(&self) -> bool {
        self.truth == self.verdict
    }
}

fn oracle_for(eps: f64, n: usize, sign: Perturbation) -> Result<CountingOracle> {
    Ok(CountingOracle::new(build_distribution_oracle(&perturbed_uniform(eps, n, sign)?)?))
}

/// Estimates `T(U|0>, U_{p+}|0>)` to `eps` and answers `p+` iff `d < eps`.
pub fn distinguish_td(u_unknown: CountingOracle, eps: f64, n: usize, rng_seed: u64) -> Result<Verdict> {
    let reference = oracle_for(eps, n, Perturbation::Plus)?;
    let mut pair = PreparedPair::new(u_unknown, reference)?;
    let d = estimate_trace_distance(&mut pair, eps, rng_seed)?.estimate;
    let verdict = if d < eps { Perturbation::Plus } else { Perturbation::Minus };
    Ok(Verdict { verdict, statistic_d: d, queries: pair.query_counts().0 })
}

/// Median-of-`rounds` estimate of `F^2(U|0>, comb)` to `eps`; answers `p+`
/// iff `d > 1/2`.
pub fn distinguish_f2(u_unknown: CountingOracle, eps: f64, n: usize, rounds: u32, rng_seed: u64) -> Result<Verdict> {
    let comb = CountingOracle::new(build_distribution_oracle(&comb_distribution(n)?)?);
    let mut pair = PreparedPair::new(u_unknown, comb)?;
    let d = amplify(|s| estimate_squared_fidelity(&mut pair, eps, s), rounds, rng_seed)?.estimate;
    let verdict = if d > 0.5 { Perturbation::Plus } else { Perturbation::Minus };
    Ok(Verdict { verdict, statistic_d: d, queries: pair.query_counts().0 })
}

/// Median rounds for the inner `F^2` estimate: the fewest lifting a 2/3
/// single-run success to at least 8/9.
pub fn default_f2_rounds() -> u32 {
    rounds_for_confidence(1.0 - DEFAULT_EPSILON_FAIL, 8.0 / 9.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinguishSummary {
    pub which: Distinguisher,
    pub eps: f64,
    pub n: usize,
    /// Trials per ground truth.
    pub trials_per_truth: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// `2/3 - 3 sigma` for the observed rate.
    pub floor: f64,
    pub mean_queries: f64,
    pub outcomes: Vec<DistinguishOutcome>,
}

/// Runs `trials_per_truth` trials under each of `p+` and `p-`.
/// `rounds` only affects the `F2` distinguisher.
pub fn run_distinguish(
    which: Distinguisher,
    eps: f64,
    n: usize,
    trials_per_truth: usize,
    rounds: u32,
    rng_seed: u64,
    jobs: Option<usize>,
) -> Result<DistinguishSummary> {
    if trials_per_truth == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let truths = [Perturbation::Plus, Perturbation::Minus];
    let outcomes = run_indexed(2 * trials_per_truth, jobs, |i| {
        let truth = truths[i / trials_per_truth];
        let unknown = oracle_for(eps, n, truth)?;
        let seed = derive_seed(rng_seed, i as u64);
        let v = match which {
            Distinguisher::Td => distinguish_td(unknown, eps, n, seed)?,
            Distinguisher::F2 => distinguish_f2(unknown, eps, n, rounds, seed)?,
        };
        Ok(DistinguishOutcome { truth, verdict: v.verdict, statistic_d: v.statistic_d, queries: v.queries })
    })?;
    let successes = outcomes.iter().filter(|o| o.correct()).count();
    let total = outcomes.len();
    let rate = successes as f64 / total as f64;
    Ok(DistinguishSummary {
        which,
        eps,
        n,
        trials_per_truth,
        successes,
        success_rate: rate,
        floor: success_floor(rate, total),
        mean_queries: outcomes.iter().map(|o| o.queries as f64).sum::<f64>() / total as f64,
        outcomes,
    })
}
