//! Query-counted oracles and the composite operators built from them.
//!
//! Every application of an oracle, its adjoint or a controlled variant costs
//! one query. Composite operators ([`PairOracle`], [`GroverIterate`]) forward
//! their charges to the oracles they are built from, so the counters on the
//! underlying [`CountingOracle`]s always hold the true query totals.

use crate::qlin::{Matrix, StateVector, UnitaryOp, C64};
use crate::{Error, Result};

/// An operator whose applications are charged against an oracle budget.
pub trait QueryOracle {
    fn unitary(&self) -> &UnitaryOp;

    /// Records `applications` uses of [`unitary`](Self::unitary), in any
    /// of its plain, adjoint or controlled forms.
    fn charge(&mut self, applications: u64);

    fn num_qubits(&self) -> usize {
        self.unitary().num_qubits()
    }
}

/// A unitary oracle with a monotone query counter.
#[derive(Debug, Clone)]
pub struct CountingOracle {
    inner: UnitaryOp,
    query_count: u64,
}

impl CountingOracle {
    pub fn new(inner: UnitaryOp) -> Self {
        Self { inner, query_count: 0 }
    }

    /// Oracle preparing `state` from `|0>`.
    pub fn preparing(state: &StateVector) -> Self {
        Self::new(UnitaryOp::with_first_column(state))
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    pub fn inner(&self) -> &UnitaryOp {
        &self.inner
    }

    /// One query.
    pub fn apply(&mut self, state: &StateVector) -> Result<StateVector> {
        let out = self.inner.apply(state)?;
        self.query_count += 1;
        Ok(out)
    }

    /// One query.
    pub fn apply_adjoint(&mut self, state: &StateVector) -> Result<StateVector> {
        let out = self.inner.adjoint().apply(state)?;
        self.query_count += 1;
        Ok(out)
    }

    /// The prepared state `U|0>` read classically, without a charge. Only
    /// ground-truth computations and the sample-access model use this.
    pub fn prepared_state(&self) -> StateVector {
        self.inner.first_column()
    }
}

impl QueryOracle for CountingOracle {
    fn unitary(&self) -> &UnitaryOp {
        &self.inner
    }

    fn charge(&mut self, applications: u64) {
        self.query_count += applications;
    }
}

/// Oracles `U_phi`, `U_psi` preparing two `k`-qubit states.
#[derive(Debug, Clone)]
pub struct PreparedPair {
    pub u_phi: CountingOracle,
    pub u_psi: CountingOracle,
    num_qubits: usize,
}

impl PreparedPair {
    pub fn new(u_phi: CountingOracle, u_psi: CountingOracle) -> Result<Self> {
        let num_qubits = u_phi.inner().num_qubits();
        if u_psi.inner().num_qubits() != num_qubits {
            return Err(Error::DimensionMismatch { expected: u_phi.inner().dim(), found: u_psi.inner().dim() });
        }
        Ok(Self { u_phi, u_psi, num_qubits })
    }

    pub fn from_states(phi: &StateVector, psi: &StateVector) -> Result<Self> {
        Self::new(CountingOracle::preparing(phi), CountingOracle::preparing(psi))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn phi_state(&self) -> StateVector {
        self.u_phi.prepared_state()
    }

    pub fn psi_state(&self) -> StateVector {
        self.u_psi.prepared_state()
    }

    /// `(queries to U_phi, queries to U_psi)`.
    pub fn query_counts(&self) -> (u64, u64) {
        (self.u_phi.query_count(), self.u_psi.query_count())
    }

    /// Wraps an operator that uses each oracle exactly once per application.
    pub fn charging(&mut self, op: UnitaryOp) -> PairOracle<'_> {
        PairOracle { op, pair: self }
    }

    pub fn u_oracle(&mut self) -> Result<PairOracle<'_>> {
        let op = build_u(self)?;
        Ok(self.charging(op))
    }

    pub fn w_oracle(&mut self) -> Result<PairOracle<'_>> {
        let op = build_w(self)?;
        Ok(self.charging(op))
    }

    pub fn w_prime_oracle(&mut self) -> Result<PairOracle<'_>> {
        let op = build_w_prime(self)?;
        Ok(self.charging(op))
    }
}

/// A composite operator costing one query to each oracle of a pair.
#[derive(Debug)]
pub struct PairOracle<'a> {
    op: UnitaryOp,
    pair: &'a mut PreparedPair,
}

impl QueryOracle for PairOracle<'_> {
    fn unitary(&self) -> &UnitaryOp {
        &self.op
    }

    fn charge(&mut self, applications: u64) {
        self.pair.u_phi.charge(applications);
        self.pair.u_psi.charge(applications);
    }
}

/// `U = U_phi^dag U_psi`, so that `<0|U|0> = <phi|psi>`.
pub fn build_u(pair: &PreparedPair) -> Result<UnitaryOp> {
    pair.u_phi.inner().adjoint().mul(pair.u_psi.inner())
}

/// `V = X_A (x) |0><0|_B + I_A (x) (I - |0><0|)_B` on `1 + k` qubits: flips
/// the flag qubit `A` exactly on the `|0>_B` branch.
pub fn marking_operator(k: usize) -> UnitaryOp {
    let dim_b = 1usize << k;
    let mut perm: Vec<usize> = (0..2 * dim_b).collect();
    perm.swap(0, dim_b);
    UnitaryOp::permutation(&perm).expect("swap of two indices is a permutation")
}

/// `W = V (I_A (x) U_B)`, with
/// `W|0>|0> = sqrt(p)|0>|phi_0> + sqrt(1-p)|1>|phi_1>` and
/// `sqrt(p) = sqrt(1 - |<phi|psi>|^2)`, the trace distance.
pub fn build_w(pair: &PreparedPair) -> Result<UnitaryOp> {
    let u = build_u(pair)?;
    marking_operator(pair.num_qubits()).mul(&UnitaryOp::identity(1).tensor(&u))
}

/// `W' = (X_A (x) I_B) W`; its `|0>_A` amplitude is the fidelity `|<phi|psi>|`.
pub fn build_w_prime(pair: &PreparedPair) -> Result<UnitaryOp> {
    let w = build_w(pair)?;
    UnitaryOp::pauli_x().tensor(&UnitaryOp::identity(pair.num_qubits())).mul(&w)
}

/// `Q = -U (I - 2|0><0|_A (x) |0><0|_B) U^dag (I - 2|0><0|_A (x) I_B)`, with
/// `A` the most significant qubit of `u`.
///
/// On the span of `U|0>|0>`, `Q` has eigenvalues `e^{+-2i theta}` where
/// `sin(theta) = sqrt(p)` is the `|0>_A` amplitude.
pub fn grover_iterate(u: &UnitaryOp) -> Result<UnitaryOp> {
    if u.num_qubits() == 0 {
        return Err(Error::MalformedBlock("the flag register A needs one qubit".into()));
    }
    let dim = u.dim();
    let mut reflect_zero = Matrix::identity(dim, dim);
    reflect_zero[(0, 0)] = C64::new(-1.0, 0.0);
    let mut reflect_flag = Matrix::identity(dim, dim);
    for i in 0..dim / 2 {
        reflect_flag[(i, i)] = C64::new(-1.0, 0.0);
    }
    let m = u.matrix();
    let q = -(m * reflect_zero * m.adjoint() * reflect_flag);
    Ok(UnitaryOp::from_matrix_unchecked(q))
}

/// Grover iterate over a charged oracle; one application of `Q` (or any
/// controlled form) charges two applications of the inner oracle, one
/// for `U` and one for `U^dag`.
#[derive(Debug)]
pub struct GroverIterate<'a, O: QueryOracle + ?Sized> {
    q: UnitaryOp,
    base: &'a mut O,
}

impl<'a, O: QueryOracle + ?Sized> GroverIterate<'a, O> {
    pub fn new(base: &'a mut O) -> Result<Self> {
        let q = grover_iterate(base.unitary())?;
        Ok(Self { q, base })
    }

    pub fn base(&mut self) -> &mut O {
        self.base
    }
}

impl<O: QueryOracle + ?Sized> QueryOracle for GroverIterate<'_, O> {
    fn unitary(&self) -> &UnitaryOp {
        &self.q
    }

    fn charge(&mut self, applications: u64) {
        self.base.charge(2 * applications);
    }
}

/// Alias matching the operation name used in the documentation.
pub fn build_grover_iterate<O: QueryOracle + ?Sized>(u: &mut O) -> Result<GroverIterate<'_, O>> {
    GroverIterate::new(u)
}

fn validate_distribution(probabilities: &[f64]) -> Result<()> {
    if probabilities.is_empty() {
        return Err(Error::InvalidDistribution("empty support".into()));
    }
    if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {p} is negative or not finite")));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

/// Amplitude-encoding oracle `U_p|0> = sum_j sqrt(p(j)) |j>`, zero-padded to
/// the next power of two and completed by Gram-Schmidt.
pub fn build_distribution_oracle(probabilities: &[f64]) -> Result<UnitaryOp> {
    Ok(UnitaryOp::with_first_column(&distribution_state(probabilities)?))
}

/// The state `sum_j sqrt(p(j)) |j>`, zero-padded to a power of two.
pub fn distribution_state(probabilities: &[f64]) -> Result<StateVector> {
    validate_distribution(probabilities)?;
    let dim = probabilities.len().next_power_of_two();
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (a, p) in amps.iter_mut().zip(probabilities) {
        *a = C64::new(p.sqrt(), 0.0);
    }
    StateVector::normalized(amps)
}

/// Sign of the perturbation in [`perturbed_uniform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    Plus,
    Minus,
}

/// `p(j) = (1 +- (-1)^j 2 eps) / n` on `n` (even) outcomes.
pub fn perturbed_uniform(eps: f64, n: usize, sign: Perturbation) -> Result<Vec<f64>> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("support size {n} must be even and positive")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidParameter(format!("eps {eps} outside (0, 1/2)")));
    }
    let s = match sign {
        Perturbation::Plus => 1.0,
        Perturbation::Minus => -1.0,
    };
    Ok((0..n)
        .map(|j| {
            let alt = if j % 2 == 0 { 1.0 } else { -1.0 };
            (1.0 + s * alt * 2.0 * eps) / n as f64
        })
        .collect())
}

/// Uniform over the even outcomes of `[n]`: the comb state
/// `sqrt(2/n) sum_j |2j>`.
pub fn comb_distribution(n: usize) -> Result<Vec<f64>> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("support size {n} must be even and positive")));
    }
    Ok((0..n).map(|j| if j % 2 == 0 { 2.0 / n as f64 } else { 0.0 }).collect())
}

/// A unitary on `1 + k` qubits with
/// `U|0>|0> = sqrt(p)|0>|phi0> + sqrt(1-p)|1>|phi1>`.
pub fn block_encoding(p: f64, phi0: &StateVector, phi1: &StateVector) -> Result<UnitaryOp> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    if phi0.dim() != phi1.dim() {
        return Err(Error::DimensionMismatch { expected: phi0.dim(), found: phi1.dim() });
    }
    let top = StateVector::basis(1, 0)?.tensor(phi0);
    let bottom = StateVector::basis(1, 1)?.tensor(phi1);
    let amps = top.amplitudes() * C64::new(p.sqrt(), 0.0) + bottom.amplitudes() * C64::new((1.0 - p).sqrt(), 0.0);
    let state = StateVector::normalized(amps.iter().copied().collect())?;
    Ok(UnitaryOp::with_first_column(&state))
}
