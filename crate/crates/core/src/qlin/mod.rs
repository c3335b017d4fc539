//! Dense complex linear algebra substrate.
//!
//! Qubit ordering is big-endian: qubit 0 is the most significant bit of a
//! basis index, so in `tensor(a, b)` the factor `a` sits on the high-order
//! qubits. Registers written `|x>_A |y>_B` therefore map to index
//! `x * dim(B) + y`.

mod io;
mod measure;
mod random;
mod state;
mod subspace;
mod unitary;

pub use io::{read_state_file, read_state_json, write_state_file, write_state_json, LoadedState};
pub use measure::{marginal_distribution, sample, MeasurementDistribution, Sampler};
pub use random::{derive_seed, haar_state, haar_unitary, seeded_rng, SimRng};
pub use state::StateVector;
pub use subspace::{invariant_subspace, InvariantSubspace};
pub use unitary::{adjoint, apply, controlled, tensor, UnitaryOp};

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type Matrix = nalgebra::DMatrix<C64>;

/// Dense complex column vector.
pub type Vector = nalgebra::DVector<C64>;

/// Tolerance on the L2 norm of a [`StateVector`].
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Tolerance on `max |M^dag M - I|` for a [`UnitaryOp`].
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

/// Tolerance on the total mass of a [`MeasurementDistribution`].
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Returns `log2(len)` when `len` is a positive power of two.
pub(crate) fn log2_exact(len: usize) -> crate::Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(crate::Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}
