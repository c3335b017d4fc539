use nalgebra::Schur;

use super::{Matrix, StateVector, UnitaryOp, Vector, C64};
use crate::{Error, Result};

/// Smallest subspace containing a start vector that is invariant under a
/// unitary, together with the unitary restricted to it.
#[derive(Debug, Clone)]
pub struct InvariantSubspace {
    /// Orthonormal basis as columns (`dim x m`); column 0 is the start vector.
    pub basis: Matrix,
    /// `basis^dag U basis`, an `m x m` unitary.
    pub restricted: Matrix,
    /// Norm of the residual that terminated the Krylov iteration; bounds how
    /// far the span is from exactly invariant.
    pub residual: f64,
}

impl InvariantSubspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Eigenvalues of the restricted operator.
    pub fn eigenvalues(&self) -> Vec<C64> {
        let m = &self.restricted;
        match m.nrows() {
            1 => vec![m[(0, 0)]],
            2 => {
                let half_trace = (m[(0, 0)] + m[(1, 1)]) * 0.5;
                let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
                let disc = (half_trace * half_trace - det).sqrt();
                vec![half_trace + disc, half_trace - disc]
            }
            _ => Schur::new(m.clone()).eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default(),
        }
    }

    /// Unitary `Z` and eigenphases (in turns, `[0, 1)`) with
    /// `restricted = Z diag(e^{2 pi i phase}) Z^dag`, from a complex Schur
    /// form. The triangular factor of a normal matrix is diagonal, so a
    /// large off-diagonal entry is reported as an error.
    pub fn eigendecomposition(&self) -> Result<(Matrix, Vec<f64>)> {
        let schur = Schur::try_new(self.restricted.clone(), f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
        let (z, t) = schur.unpack();
        let m = t.nrows();
        let off = (0..m).flat_map(|r| (r + 1..m).map(move |c| (r, c))).map(|ix| t[ix].norm()).fold(0.0, f64::max);
        if off > 1e-8 {
            return Err(Error::Numeric(format!("restricted operator is not normal (off-diagonal {off:e})")));
        }
        let phases = (0..m).map(|s| (t[(s, s)].arg() / std::f64::consts::TAU).rem_euclid(1.0)).collect();
        Ok((z, phases))
    }

    /// Maps coordinates in the subspace back to the full space.
    pub fn lift(&self, coords: &Vector) -> Vector {
        &self.basis * coords
    }
}

/// Krylov span `{s, U s, U^2 s, ...}` orthonormalized with two passes of
/// modified Gram-Schmidt, stopping once the next residual has norm below
/// `tol`.
pub fn invariant_subspace(u: &UnitaryOp, start: &StateVector, tol: f64) -> Result<InvariantSubspace> {
    if u.dim() != start.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: start.dim() });
    }
    let m = u.matrix();
    let mut columns: Vec<Vector> = vec![start.amplitudes().clone()];
    let mut residual = 0.0;
    while columns.len() < u.dim() {
        let mut next = m * columns.last().expect("non-empty");
        for _ in 0..2 {
            for c in &columns {
                let proj = c.dotc(&next);
                next.axpy(-proj, c, C64::new(1.0, 0.0));
            }
        }
        let norm = next.norm();
        if norm < tol {
            residual = norm;
            break;
        }
        columns.push(next.unscale(norm));
    }
    let basis = Matrix::from_columns(&columns);
    let restricted = basis.adjoint() * m * &basis;
    Ok(InvariantSubspace { basis, restricted, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvector_gives_one_dimensional_span() {
        let z = UnitaryOp::phase(0.3);
        let s = StateVector::basis(1, 1).unwrap();
        let sub = invariant_subspace(&z, &s, 1e-12).unwrap();
        assert_eq!(sub.dim(), 1);
        let ev = sub.eigenvalues()[0];
        assert!((ev.arg() - 0.6 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn two_eigencomponents_give_two_dimensional_span() {
        let z = UnitaryOp::phase(0.125).tensor(&UnitaryOp::identity(1));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_real(&[h, 0.0, h, 0.0]).unwrap();
        let sub = invariant_subspace(&z, &s, 1e-12).unwrap();
        assert_eq!(sub.dim(), 2);
        let mut phases: Vec<f64> = sub.eigenvalues().iter().map(|e| e.arg()).collect();
        phases.sort_by(f64::total_cmp);
        assert!(phases[0].abs() < 1e-12);
        assert!((phases[1] - std::f64::consts::PI / 4.0).abs() < 1e-12);
    }
}
