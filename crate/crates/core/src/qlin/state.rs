use super::{log2_exact, Vector, C64, NORM_TOLERANCE};
use crate::{Error, Result};

/// Normalized amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vector,
    num_qubits: usize,
}

impl StateVector {
    /// Wraps `amplitudes`, rejecting non-power-of-two lengths and vectors
    /// whose norm is off by more than [`NORM_TOLERANCE`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_vector(Vector::from_vec(amplitudes))
    }

    pub fn from_vector(amplitudes: Vector) -> Result<Self> {
        let num_qubits = log2_exact(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, num_qubits })
    }

    /// Scales `amplitudes` to unit norm. Fails on a zero (or non-finite)
    /// vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let v = Vector::from_vec(amplitudes);
        let num_qubits = log2_exact(v.len())?;
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes: v.unscale(norm), num_qubits })
    }

    /// Real amplitudes; convenient for distribution states.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index>` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = Vector::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes, num_qubits })
    }

    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0).expect("index 0 always valid")
    }

    /// Uniform superposition `H^{(x)n}|0>`.
    pub fn uniform(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self { amplitudes: Vector::from_element(dim, a), num_qubits }
    }

    pub(crate) fn from_vector_unchecked(amplitudes: Vector) -> Self {
        let num_qubits = amplitudes.len().trailing_zeros() as usize;
        Self { amplitudes, num_qubits }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `self (x) other`, with `self` on the high-order qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        Self { amplitudes, num_qubits: self.num_qubits + other.num_qubits }
    }

    /// Born probabilities over the full computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest componentwise distance to `other`.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amplitudes.iter().map(|a| [a.re, a.im]).collect()
    }
}
