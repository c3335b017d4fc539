use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{log2_exact, Matrix, StateVector, Vector, C64, UNITARITY_TOLERANCE};
use crate::{Error, Result};

/// Dense unitary matrix acting on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: Matrix,
    num_qubits: usize,
}

impl UnitaryOp {
    /// Validates shape and unitarity (`max |M^dag M - I| < 1e-9`).
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let num_qubits = log2_exact(matrix.nrows())?;
        let op = Self { matrix, num_qubits };
        let defect = op.unitarity_defect();
        if !(defect < UNITARITY_TOLERANCE) {
            return Err(Error::NotUnitary(defect));
        }
        Ok(op)
    }

    /// For matrices that are unitary by construction (products, Kronecker
    /// products and block extensions of unitaries).
    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.nrows(), matrix.ncols());
        let num_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { matrix, num_qubits }
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self::from_matrix_unchecked(Matrix::identity(1 << num_qubits, 1 << num_qubits))
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn pauli_z() -> Self {
        Self::from_real(2, &[1.0, 0.0, 0.0, -1.0])
    }

    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::from_real(2, &[h, h, h, -h])
    }

    /// The phase gate `S = diag(1, i)`.
    pub fn phase_s() -> Self {
        Self::phase(0.25)
    }

    /// `diag(1, e^{2 pi i turns})`; eigenphase `turns` on `|1>`.
    pub fn phase(turns: f64) -> Self {
        let mut m = Matrix::identity(2, 2);
        m[(1, 1)] = C64::from_polar(1.0, 2.0 * PI * turns);
        Self::from_matrix_unchecked(m)
    }

    /// Row-major real matrix; caller guarantees unitarity.
    fn from_real(dim: usize, entries: &[f64]) -> Self {
        let m = Matrix::from_row_iterator(dim, dim, entries.iter().map(|&x| C64::new(x, 0.0)));
        Self::from_matrix_unchecked(m)
    }

    /// Permutation unitary sending `|j>` to `|perm[j]>`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        log2_exact(dim)?;
        let mut seen = vec![false; dim];
        let mut m = Matrix::zeros(dim, dim);
        for (j, &target) in perm.iter().enumerate() {
            if target >= dim || seen[target] {
                return Err(Error::InvalidParameter(format!("not a permutation at position {j}")));
            }
            seen[target] = true;
            m[(target, j)] = C64::new(1.0, 0.0);
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// A unitary whose first column is `state`.
    ///
    /// The remaining columns come from Gram-Schmidt against the standard
    /// basis in index order, skipping the basis vector on which `state` has
    /// its largest magnitude (ties broken by lowest index). Skipping that
    /// pivot keeps every residual well conditioned.
    pub fn with_first_column(state: &StateVector) -> Self {
        let dim = state.dim();
        let v = state.amplitudes();
        let pivot = (0..dim)
            .fold((0, -1.0), |(best, mag), i| {
                let m = v[i].norm();
                if m > mag { (i, m) } else { (best, mag) }
            })
            .0;
        let mut columns: Vec<Vector> = Vec::with_capacity(dim);
        columns.push(v.clone());
        for i in (0..dim).filter(|&i| i != pivot) {
            let mut e = Vector::zeros(dim);
            e[i] = C64::new(1.0, 0.0);
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for c in &columns {
                    let proj = c.dotc(&e);
                    e.axpy(-proj, c, C64::new(1.0, 0.0));
                }
            }
            let norm = e.norm();
            columns.push(e.unscale(norm));
        }
        Self::from_matrix_unchecked(Matrix::from_columns(&columns))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// `max |M^dag M - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.matrix.adjoint() * &self.matrix;
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram[(r, c)] - C64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest entrywise distance to `other` (same dimension assumed).
    pub fn max_distance(&self, other: &UnitaryOp) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &UnitaryOp) -> Result<UnitaryOp> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rhs.dim() });
        }
        Ok(Self::from_matrix_unchecked(&self.matrix * &rhs.matrix))
    }

    pub fn adjoint(&self) -> UnitaryOp {
        Self::from_matrix_unchecked(self.matrix.adjoint())
    }

    /// `self (x) other` with `self` on the high-order qubits.
    pub fn tensor(&self, other: &UnitaryOp) -> UnitaryOp {
        Self::from_matrix_unchecked(self.matrix.kronecker(&other.matrix))
    }

    /// Adds `num_controls` control qubits above the target register; the
    /// result acts as `self` only when every control is `|1>`.
    pub fn controlled(&self, num_controls: usize) -> UnitaryOp {
        let dim = self.dim();
        let total = dim << num_controls;
        let mut m = Matrix::identity(total, total);
        m.view_mut((total - dim, total - dim), (dim, dim)).copy_from(&self.matrix);
        Self::from_matrix_unchecked(m)
    }

    /// `self^exponent` by repeated squaring.
    pub fn power(&self, mut exponent: u64) -> UnitaryOp {
        let dim = self.dim();
        let mut result = Matrix::identity(dim, dim);
        let mut base = self.matrix.clone();
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = &result * &base;
            }
            exponent >>= 1;
            if exponent > 0 {
                base = &base * &base;
            }
        }
        Self::from_matrix_unchecked(result)
    }

    /// `self |state>`.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.dim() });
        }
        Ok(StateVector::from_vector_unchecked(&self.matrix * state.amplitudes()))
    }

    /// `self |0>`.
    pub fn first_column(&self) -> StateVector {
        StateVector::from_vector_unchecked(self.matrix.column(0).into_owned())
    }
}

/// `u |s>`.
pub fn apply(u: &UnitaryOp, s: &StateVector) -> Result<StateVector> {
    u.apply(s)
}

/// Kronecker product, `a` on the high-order qubits.
pub fn tensor(a: &UnitaryOp, b: &UnitaryOp) -> UnitaryOp {
    a.tensor(b)
}

pub fn controlled(u: &UnitaryOp, num_controls: usize) -> Result<UnitaryOp> {
    if num_controls == 0 {
        return Err(Error::InvalidParameter("controlled() needs at least one control".into()));
    }
    Ok(u.controlled(num_controls))
}

pub fn adjoint(u: &UnitaryOp) -> UnitaryOp {
    u.adjoint()
}
