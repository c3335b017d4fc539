//! Textbook phase estimation with explicit register sizing.
//!
//! The circuit is the usual one: Hadamards on a `t`-qubit phase register
//! `C`, a ladder in which bit `j` of `C` controls `Q^(2^j)`, an inverse
//! Fourier transform on `C`, and a computational-basis measurement of `C`.
//!
//! The simulation runs the circuit on the smallest `Q`-invariant subspace
//! that contains the input state (a Krylov span, two-dimensional for a
//! Grover iterate). The state never leaves that subspace, so the outcome
//! distribution is the same as on the full register while the memory cost
//! is `2^t * m` amplitudes instead of `2^t * dim`. Controlled powers act
//! diagonally in the eigenbasis of the restricted operator, which keeps
//! them exactly unitary for registers of 20+ qubits where repeated
//! squaring drifts. They are charged as `2^t - 1` controlled applications
//! of `Q`.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::oracles::QueryOracle;
use crate::qlin::{invariant_subspace, sample, Matrix, MeasurementDistribution, StateVector, UnitaryOp, Vector, C64};
use crate::{Error, Result};

/// Largest phase register the simulator accepts.
pub const MAX_ANCILLA_QUBITS: usize = 26;

/// Krylov residual below which the input's span is treated as invariant.
const SUBSPACE_TOLERANCE: f64 = 1e-12;

/// `2^t - 1 <= SIZING_CONSTANT / (epsilon_fail * delta)` for every valid
/// configuration.
pub const SIZING_CONSTANT: f64 = 10.0;

/// Resolution and failure probability of a phase-estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimateConfig {
    /// Accuracy in full turns: success means circular distance `< delta`.
    pub delta: f64,
    /// Probability bound on missing the accuracy target.
    pub epsilon_fail: f64,
}

impl PhaseEstimateConfig {
    pub fn new(delta: f64, epsilon_fail: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("phase resolution {delta} outside (0, 1)")));
        }
        if !(epsilon_fail > 0.0 && epsilon_fail < 1.0) {
            return Err(Error::InvalidParameter(format!("failure probability {epsilon_fail} outside (0, 1)")));
        }
        let cfg = Self { delta, epsilon_fail };
        if cfg.ancilla_qubits() > MAX_ANCILLA_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "phase register of {} qubits exceeds the simulator limit of {MAX_ANCILLA_QUBITS}",
                cfg.ancilla_qubits()
            )));
        }
        Ok(cfg)
    }

    /// `t = ceil(log2(1/delta)) + ceil(log2(2 + 1/(2 epsilon_fail)))`.
    pub fn ancilla_qubits(&self) -> usize {
        ancilla_qubits(self.delta, self.epsilon_fail)
    }

    /// `2^t - 1`, the number of controlled applications of the unitary.
    pub fn controlled_applications(&self) -> u64 {
        (1u64 << self.ancilla_qubits()) - 1
    }
}

pub fn ancilla_qubits(delta: f64, epsilon_fail: f64) -> usize {
    let precision = (1.0 / delta).log2().ceil().max(0.0) as usize;
    let confidence = (2.0 + 1.0 / (2.0 * epsilon_fail)).log2().ceil() as usize;
    precision + confidence
}

/// A measured phase register.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhaseOutcome {
    /// `raw_index / 2^t`, in full turns.
    pub phi_tilde: f64,
    pub raw_index: u64,
    pub ancilla_qubits: usize,
}

impl PhaseOutcome {
    pub fn from_index(raw_index: u64, ancilla_qubits: usize) -> Self {
        Self { phi_tilde: raw_index as f64 / (1u64 << ancilla_qubits) as f64, raw_index, ancilla_qubits }
    }
}

/// `min(|a - b|, 1 - |a - b|)` for phases in `[0, 1)`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Phase-register amplitudes restricted to the invariant subspace:
/// `amps[y * m + s]` for outcome `y` and eigenvector `s` (the columns of
/// `basis`).
struct RegisterState {
    amps: Vec<C64>,
    basis: Matrix,
    num_outcomes: usize,
}

fn simulate(q: &UnitaryOp, input: &StateVector, t: usize) -> Result<RegisterState> {
    let sub = invariant_subspace(q, input, SUBSPACE_TOLERANCE)?;
    let (z, phases) = sub.eigendecomposition()?;
    let m = sub.dim();
    let n = 1usize << t;
    let coords: Vector = z.adjoint() * (sub.basis.adjoint() * input.amplitudes());

    // Hadamards, then the controlled-Q^(2^j) ladder. In the eigenbasis of Q
    // the ladder multiplies eigencomponent s of branch x by
    // e^{2 pi i x phase_s}. Writing x = hi * 2^lo_bits + lo, that factor is
    // a product of two table entries, each reduced mod 1 before
    // exponentiating.
    let scale = 1.0 / (n as f64).sqrt();
    let lo_bits = t / 2;
    let lo_len = 1usize << lo_bits;
    let turn = |k: usize, phase: f64| C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 * phase).rem_euclid(1.0));
    let mut amps = vec![C64::new(0.0, 0.0); n * m];
    for s in 0..m {
        let lo: Vec<C64> = (0..lo_len).map(|k| turn(k, phases[s])).collect();
        let hi: Vec<C64> = (0..n >> lo_bits).map(|k| turn(k << lo_bits, phases[s]) * coords[s] * scale).collect();
        for x in 0..n {
            amps[x * m + s] = hi[x >> lo_bits] * lo[x & (lo_len - 1)];
        }
    }

    // inverse QFT on the phase register: forward DFT (e^{-2 pi i xy/N}) / sqrt(N)
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(n);
    let mut column = vec![C64::new(0.0, 0.0); n];
    for s in 0..m {
        for x in 0..n {
            column[x] = amps[x * m + s];
        }
        fft.process(&mut column);
        for y in 0..n {
            amps[y * m + s] = column[y] * scale;
        }
    }
    Ok(RegisterState { amps, basis: sub.basis * z, num_outcomes: n })
}

fn check_dims<O: QueryOracle + ?Sized>(q: &O, input: &StateVector) -> Result<()> {
    if q.unitary().dim() != input.dim() {
        return Err(Error::DimensionMismatch { expected: q.unitary().dim(), found: input.dim() });
    }
    Ok(())
}

/// Exact Born distribution of the measured phase register.
pub fn outcome_distribution<O: QueryOracle + ?Sized>(
    q: &O,
    input_state: &StateVector,
    cfg: &PhaseEstimateConfig,
) -> Result<MeasurementDistribution> {
    check_dims(q, input_state)?;
    let reg = simulate(q.unitary(), input_state, cfg.ancilla_qubits())?;
    let m = reg.basis.ncols();
    let mut probs: Vec<f64> = reg.amps.chunks(m).map(|c| c.iter().map(|a| a.norm_sqr()).sum()).collect();
    let total: f64 = probs.iter().sum();
    if !total.is_finite() || (total - 1.0).abs() > 1e-9 {
        return Err(Error::Numeric(format!("phase register mass {total}")));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    MeasurementDistribution::new(probs)
}

/// Full post-circuit state on `system (x) C` (system on the high-order
/// qubits), before the measurement. Memory is `dim * 2^t`, so this is
/// meant for small cross-checks.
pub fn register_state<O: QueryOracle + ?Sized>(
    q: &O,
    input_state: &StateVector,
    cfg: &PhaseEstimateConfig,
) -> Result<StateVector> {
    check_dims(q, input_state)?;
    let reg = simulate(q.unitary(), input_state, cfg.ancilla_qubits())?;
    let m = reg.basis.ncols();
    let n = reg.num_outcomes;
    let dim = input_state.dim();
    let mut full = Vector::zeros(dim * n);
    for y in 0..n {
        let local = Vector::from_column_slice(&reg.amps[y * m..(y + 1) * m]);
        let lifted = &reg.basis * local;
        for i in 0..dim {
            full[i * n + y] = lifted[i];
        }
    }
    StateVector::from_vector(full).map_err(|_| Error::Numeric("register state lost normalization".into()))
}

/// Runs the circuit once and measures the phase register, charging
/// `2^t - 1` controlled applications of `q`.
pub fn run_phase_estimation<O: QueryOracle + ?Sized>(
    q: &mut O,
    input_state: &StateVector,
    cfg: &PhaseEstimateConfig,
    rng_seed: u64,
) -> Result<PhaseOutcome> {
    let dist = outcome_distribution(q, input_state, cfg)?;
    q.charge(cfg.controlled_applications());
    let index = sample(&dist, rng_seed);
    Ok(PhaseOutcome::from_index(index as u64, cfg.ancilla_qubits()))
}
