use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Matrix, StateVector, UnitaryOp, C64};

/// Generator used by every stochastic operation in the crate.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child seed for `stream` under `seed` (ChaCha stream split).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Haar-random unitary via QR of a complex Ginibre matrix, with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(num_qubits: usize, rng: &mut SimRng) -> UnitaryOp {
    let dim = 1usize << num_qubits;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let g = Matrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * scale, im * scale)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    UnitaryOp::from_matrix_unchecked(q)
}

/// Haar-random pure state, the first column of [`haar_unitary`].
pub fn haar_state(num_qubits: usize, rng: &mut SimRng) -> StateVector {
    haar_unitary(num_qubits, rng).first_column()
}
