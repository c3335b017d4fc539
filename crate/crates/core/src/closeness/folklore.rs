//! SWAP-test baselines.
//!
//! The SWAP test on `|0>|phi>|psi>` returns `0` with probability
//! `(1 + F^2) / 2`. Repeating it gives `F^2` to within `e` from
//! `O(1/e^2)` samples; running amplitude estimation on the same circuit
//! with state-preparation oracles gives it from `O(1/e)` queries. `F` and
//! `T` then follow by square roots of an `eps^2`-accurate `F^2`, hence the
//! `O(1/eps^4)` sample and `O(1/eps^2)` query costs.

use rand_distr::{Binomial, Distribution};

use super::{check_eps, ClosenessReport, Quantity, ReportMethod};
use crate::amp_est::{amp_est, amp_est_queries, CostUnit, EstimationResult, DEFAULT_EPSILON_FAIL};
use crate::oracles::PreparedPair;
use crate::qlin::{derive_seed, marginal_distribution, sample, seeded_rng, MeasurementDistribution, StateVector, UnitaryOp};
use crate::{Error, Result};

/// Basis permutation of the controlled SWAP on `1 + 2k` qubits: swaps the
/// two `k`-qubit registers when the top qubit is `|1>`.
fn cswap_permutation(k: usize) -> Vec<usize> {
    let d = 1usize << k;
    let half = d * d;
    (0..2 * half)
        .map(|idx| {
            if idx < half {
                idx
            } else {
                let (i, j) = ((idx - half) / d, (idx - half) % d);
                half + j * d + i
            }
        })
        .collect()
}

/// `(H (x) I) CSWAP (H (x) I)` on `1 + 2k` qubits.
pub fn swap_test_circuit(k: usize) -> UnitaryOp {
    let h = UnitaryOp::hadamard().tensor(&UnitaryOp::identity(2 * k));
    let cswap = UnitaryOp::permutation(&cswap_permutation(k)).expect("valid permutation");
    h.mul(&cswap).and_then(|m| m.mul(&h)).expect("matching dimensions")
}

/// Hadamard on the most significant qubit.
fn hadamard_top(state: &StateVector) -> StateVector {
    let half = state.dim() / 2;
    let a = state.amplitudes();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = a.clone();
    for r in 0..half {
        out[r] = (a[r] + a[r + half]) * s;
        out[r + half] = (a[r] - a[r + half]) * s;
    }
    StateVector::from_vector(out).expect("Hadamard preserves the norm")
}

/// Exact ancilla distribution of the SWAP test on `|0>|phi>|psi>`.
///
/// Gates act directly on the `2^(1+2k)` amplitudes, so no dense
/// `2^(1+2k)`-square matrix is formed.
pub fn swap_test_distribution(pair: &PreparedPair) -> Result<MeasurementDistribution> {
    let input = StateVector::zero(1).tensor(&pair.phi_state()).tensor(&pair.psi_state());
    let s = hadamard_top(&input);
    let perm = cswap_permutation(pair.num_qubits());
    let mut swapped = s.amplitudes().clone();
    for (src, &dst) in perm.iter().enumerate() {
        swapped[dst] = s.amplitude(src);
    }
    let s = hadamard_top(&StateVector::from_vector(swapped)?);
    marginal_distribution(&s, &[0])
}

/// One SWAP test; consumes one copy of each state, no oracle queries.
pub fn swap_test_shot(pair: &PreparedPair, rng_seed: u64) -> Result<u8> {
    Ok(sample(&swap_test_distribution(pair)?, rng_seed) as u8)
}

/// The SWAP test with state preparation folded in:
/// `(H (x) I) CSWAP (H (x) I) (I (x) U_phi (x) U_psi)`. Its `|0>_A`
/// probability is `(1 + F^2) / 2`; each application costs one query to each
/// oracle.
pub fn swap_test_oracle(pair: &PreparedPair) -> Result<UnitaryOp> {
    let prep = UnitaryOp::identity(1).tensor(&pair.u_phi.inner().tensor(pair.u_psi.inner()));
    swap_test_circuit(pair.num_qubits()).mul(&prep)
}

/// Hoeffding count for a `(1 + F^2)/2` frequency accurate to `err / 2`,
/// hence `F^2 = 2 freq - 1` accurate to `err`, with probability 2/3:
/// `ceil(ln 6 / (2 (err/2)^2))`.
pub fn samples_for_squared_fidelity(err: f64) -> u64 {
    let freq_err = err / 2.0;
    (6f64.ln() / (2.0 * freq_err * freq_err)).ceil() as u64
}

/// Error needed on `F^2` to reach `eps` on `quantity`.
fn inner_error(quantity: Quantity, eps: f64) -> f64 {
    match quantity {
        Quantity::SquaredFidelity => eps,
        Quantity::SqrtFidelity | Quantity::TraceDistance => eps * eps,
    }
}

fn finish(quantity: Quantity, squared: f64) -> f64 {
    let squared = squared.clamp(0.0, 1.0);
    match quantity {
        Quantity::SquaredFidelity => squared,
        Quantity::SqrtFidelity => squared.sqrt(),
        Quantity::TraceDistance => (1.0 - squared).sqrt(),
    }
}

/// Copies of each state used by [`folklore_sample_estimate`].
pub fn folklore_samples(quantity: Quantity, eps: f64) -> Result<u64> {
    check_eps(eps)?;
    Ok(samples_for_squared_fidelity(inner_error(quantity, eps)))
}

/// Per-oracle queries used by [`folklore_query_estimate`].
pub fn folklore_queries(quantity: Quantity, eps: f64) -> Result<u64> {
    check_eps(eps)?;
    amp_est_queries(inner_error(quantity, eps) / 2.0, DEFAULT_EPSILON_FAIL)
}

/// Sample-access estimate of `quantity` from repeated SWAP tests.
///
/// The number of `0` outcomes over `N` independent shots is drawn from
/// `Binomial(N, Pr[0])`, which is the same law as running the shots one
/// by one.
pub fn folklore_sample_estimate(pair: &PreparedPair, quantity: Quantity, eps: f64, rng_seed: u64) -> Result<EstimationResult> {
    let shots = folklore_samples(quantity, eps)?;
    let p0 = swap_test_distribution(pair)?.get(0).clamp(0.0, 1.0);
    let binomial = Binomial::new(shots, p0).map_err(|e| Error::Numeric(e.to_string()))?;
    let zeros = binomial.sample(&mut seeded_rng(rng_seed));
    let squared = 2.0 * zeros as f64 / shots as f64 - 1.0;
    let estimate = finish(quantity, squared);
    Ok(EstimationResult {
        estimate,
        queries_used: shots,
        unit: CostUnit::Samples,
        repetitions: 1,
        raw_outcomes: vec![estimate],
        phases: vec![],
    })
}

/// Query-access estimate of `quantity`: amplitude estimation of
/// `(1 + F^2)/2` on [`swap_test_oracle`] at error `e/2`, where `e` is the
/// error needed on `F^2`.
pub fn folklore_query_estimate(pair: &mut PreparedPair, quantity: Quantity, eps: f64, rng_seed: u64) -> Result<EstimationResult> {
    check_eps(eps)?;
    let op = swap_test_oracle(pair)?;
    let mut oracle = pair.charging(op);
    let mut res = amp_est(&mut oracle, inner_error(quantity, eps) / 2.0, rng_seed)?;
    res.estimate = finish(quantity, 2.0 * res.estimate - 1.0);
    res.raw_outcomes = vec![res.estimate];
    Ok(res)
}

/// `F^2` at `eps` plus `F` and `T` from one `F^2` estimate at `eps^2`;
/// the reported cost is the total sample count of both runs.
pub fn folklore_sample_estimators(pair: &PreparedPair, eps: f64, rng_seed: u64) -> Result<ClosenessReport> {
    let f2 = folklore_sample_estimate(pair, Quantity::SquaredFidelity, eps, derive_seed(rng_seed, 0))?;
    let fine = folklore_sample_estimate(pair, Quantity::SqrtFidelity, eps, derive_seed(rng_seed, 1))?;
    let t = (1.0 - fine.estimate * fine.estimate).max(0.0).sqrt();
    Ok(ClosenessReport::new(t, fine.estimate, f2.estimate, ReportMethod::FolkloreSample, f2.queries_used + fine.queries_used))
}

/// Query-access counterpart of [`folklore_sample_estimators`].
pub fn folklore_query_estimators(pair: &mut PreparedPair, eps: f64, rng_seed: u64) -> Result<ClosenessReport> {
    let f2 = folklore_query_estimate(pair, Quantity::SquaredFidelity, eps, derive_seed(rng_seed, 0))?;
    let fine = folklore_query_estimate(pair, Quantity::SqrtFidelity, eps, derive_seed(rng_seed, 1))?;
    let t = (1.0 - fine.estimate * fine.estimate).max(0.0).sqrt();
    Ok(ClosenessReport::new(t, fine.estimate, f2.estimate, ReportMethod::FolkloreQuery, f2.queries_used + fine.queries_used))
}
