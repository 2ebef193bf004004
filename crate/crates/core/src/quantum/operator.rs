use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

/// A dense operator on a `dim`-dimensional Hilbert space.
///
/// Coupling operators carry √rate units; everything else is dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
}

impl Operator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    /// Projector |level⟩⟨level|.
    pub fn projector(dim: usize, level: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(level, level)] = C64::new(1.0, 0.0);
        Self { matrix: m }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self {
            matrix: CMatrix::from_diagonal(&d),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            matrix: &self.matrix * c,
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Largest elementwise modulus of `A - A†`.
    pub fn hermitian_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        }
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Mul<&Operator> for C64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator {
            matrix: -&self.matrix,
        }
    }
}

/// The transition operator |lower⟩⟨upper|.
pub fn lowering_op(dim: usize, lower: usize, upper: usize) -> Result<Operator> {
    if !(lower < upper && upper < dim) {
        return Err(Error::LevelIndex { dim, lower, upper });
    }
    let mut m = CMatrix::zeros(dim, dim);
    m[(lower, upper)] = C64::new(1.0, 0.0);
    Ok(Operator { matrix: m })
}

/// Qubit σ_z = |0⟩⟨0| − |1⟩⟨1|, so that σ₊σ₋ = (1 − σ_z)/2.
pub fn sigma_z() -> Operator {
    Operator::from_diagonal(&[1.0, -1.0])
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity against the global policy.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_policy(matrix, NumericPolicy::global())
    }

    pub fn with_policy(matrix: CMatrix, policy: &NumericPolicy) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let rho = Self { matrix };
        let tr = rho.matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > policy.trace_tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let dev = (&rho.matrix - rho.matrix.adjoint())
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        if dev > policy.hermitian_tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let min_ev = rho.min_eigenvalue();
        if min_ev < -policy.psd_tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_ev:.3e}"
            )));
        }
        Ok(rho)
    }

    /// Wraps a matrix produced by trusted propagation without validation.
    pub(crate) fn from_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// The basis state |level⟩⟨level|.
    pub fn basis(dim: usize, level: usize) -> Self {
        Self {
            matrix: Operator::projector(dim, level).into_matrix(),
        }
    }

    /// |ψ⟩⟨ψ| for a normalized state vector.
    pub fn pure(state: &[C64]) -> Result<Self> {
        let v = DVector::from_column_slice(state);
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(Self {
            matrix: &v * v.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn population(&self, level: usize) -> f64 {
        self.matrix[(level, level)].re
    }

    /// tr(O ρ).
    pub fn expectation(&self, op: &Operator) -> C64 {
        (op.matrix() * &self.matrix).trace()
    }

    /// ⟨ψ|ρ|ψ⟩ for a normalized vector.
    pub fn fidelity_with(&self, state: &[C64]) -> f64 {
        let v = DVector::from_column_slice(state);
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm: DMatrix<C64> = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn qubit_lowering_operator() {
        let sm = lowering_op(2, 0, 1).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert_eq!(sm.matrix(), &expected);
    }

    #[test]
    fn qutrit_transitions() {
        let s12 = lowering_op(3, 1, 2).unwrap();
        let s02 = lowering_op(3, 0, 2).unwrap();
        for (op, at) in [(s12, (1, 2)), (s02, (0, 2))] {
            for i in 0..3 {
                for j in 0..3 {
                    let want = if (i, j) == at { 1.0 } else { 0.0 };
                    assert_eq!(op.matrix()[(i, j)], c(want));
                }
            }
        }
    }

    #[test]
    fn lowering_rejects_bad_indices() {
        assert!(lowering_op(2, 1, 1).is_err());
        assert!(lowering_op(2, 1, 0).is_err());
        assert!(lowering_op(3, 0, 3).is_err());
    }

    #[test]
    fn raising_lowering_identity() {
        let sm = lowering_op(2, 0, 1).unwrap();
        let n = &sm.dagger() * &sm;
        let rhs = (&Operator::identity(2) - &sigma_z()).scale(c(0.5));
        assert!(n.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(DensityMatrix::basis(2, 1).matrix().clone()).is_ok());
        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(DensityMatrix::new(negative).is_err());
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(non_herm).is_err());
    }

    #[test]
    fn pure_state_fidelity() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(s), C64::new(0.0, s)];
        let rho = DensityMatrix::pure(&psi).unwrap();
        assert!((rho.fidelity_with(&psi) - 1.0).abs() < 1e-14);
        assert!((rho.population(1) - 0.5).abs() < 1e-14);
    }
}
