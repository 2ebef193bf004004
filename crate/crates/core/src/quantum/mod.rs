//! Finite-dimensional operator algebra: operators, density matrices,
//! dissipators, Liouvillians and their exponentials.

mod expm;
mod operator;
mod superop;

pub use expm::expm;
pub use operator::{lowering_op, sigma_z, DensityMatrix, Operator};
pub use superop::{dissipator, liouvillian, sup_exp, unvectorize, vectorize, Superoperator};

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = nalgebra::DMatrix<C64>;
