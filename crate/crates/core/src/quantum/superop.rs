//! Superoperators on column-stacked density matrices.
//!
//! `vec(ρ)` stacks the columns of ρ, so that `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.
//! In particular `−i[H, ·]` is `−i (I ⊗ H − Hᵀ ⊗ I)` and every formula in this
//! crate (dissipators, jumps, counting generators) uses this one convention.

use std::ops::{Add, Mul};

use nalgebra::DVector;

use super::expm::expm;
use super::operator::{DensityMatrix, Operator};
use super::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

/// A linear map on `dim × dim` matrices, stored as a `dim² × dim²` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

pub fn vectorize(m: &CMatrix) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &DVector<C64>, dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v.as_slice())
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        let n = dim * dim;
        Self {
            dim,
            matrix: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let n = dim * dim;
        Self {
            dim,
            matrix: CMatrix::identity(n, n),
        }
    }

    /// ρ ↦ A ρ B.
    pub fn sandwich(a: &Operator, b: &Operator) -> Self {
        Self {
            dim: a.dim(),
            matrix: b.matrix().transpose().kronecker(a.matrix()),
        }
    }

    /// ρ ↦ A ρ.
    pub fn left(a: &Operator) -> Self {
        Self::sandwich(a, &Operator::identity(a.dim()))
    }

    /// ρ ↦ ρ B.
    pub fn right(b: &Operator) -> Self {
        Self::sandwich(&Operator::identity(b.dim()), b)
    }

    /// Jump superoperator ρ ↦ X ρ X†.
    pub fn jump(x: &Operator) -> Self {
        Self::sandwich(x, &x.dagger())
    }

    /// ρ ↦ −i[H, ρ].
    pub fn hamiltonian(h: &Operator) -> Self {
        let minus_i = C64::new(0.0, -1.0);
        let m = (Self::left(h).matrix - Self::right(h).matrix) * minus_i;
        Self {
            dim: h.dim(),
            matrix: m,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dim: self.dim,
            matrix: &self.matrix * c,
        }
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(rho)), self.dim)
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_unchecked(self.apply(rho.matrix()))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Superoperator) -> Self {
        Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// exp(self · t).
    pub fn exp(&self, t: f64) -> Result<Self> {
        sup_exp(self, t)
    }

    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Row vector `vec(I)†`, i.e. the trace functional.
    pub(crate) fn trace_functional(dim: usize) -> DVector<C64> {
        vectorize(&CMatrix::identity(dim, dim))
    }
}

impl Add for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Mul for &Superoperator {
    type Output = Superoperator;
    fn mul(self, rhs: &Superoperator) -> Superoperator {
        self.compose(rhs)
    }
}

/// 𝒟[X]ρ = XρX† − ½{X†X, ρ}.
pub fn dissipator(x: &Operator) -> Superoperator {
    let xdx = &x.dagger() * x;
    let half = C64::new(0.5, 0.0);
    let m = Superoperator::jump(x).matrix
        - (Superoperator::left(&xdx).matrix + Superoperator::right(&xdx).matrix) * half;
    Superoperator {
        dim: x.dim(),
        matrix: m,
    }
}

/// 𝓛 = −i[H, ·] + Σⱼ 𝒟[Lⱼ].
pub fn liouvillian(h: &Operator, collapse: &[Operator]) -> Result<Superoperator> {
    let tol = NumericPolicy::global().hermitian_tol;
    let dev = h.hermitian_deviation();
    if dev > tol {
        return Err(Error::NonHermitian {
            what: "Hamiltonian",
            deviation: dev,
        });
    }
    let mut lv = Superoperator::hamiltonian(h);
    for l in collapse {
        l.check_dim(h.dim())?;
        lv.matrix += dissipator(l).matrix;
    }
    Ok(lv)
}

/// exp(𝓛 t) for t ≥ 0.
pub fn sup_exp(lv: &Superoperator, t: f64) -> Result<Superoperator> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("duration must be non-negative, got {t}"),
        });
    }
    if t == 0.0 {
        return Ok(Superoperator::identity(lv.dim));
    }
    Ok(Superoperator {
        dim: lv.dim,
        matrix: expm(&(&lv.matrix * C64::new(t, 0.0))),
    })
}
