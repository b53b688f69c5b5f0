//! Unitarily invariant norms of tensor-product matrices and linear maps that
//! preserve them.
//!
//! The crate computes Ky Fan and Schatten norms through a Jacobi SVD, checks
//! matrix orthogonality identities numerically, and decides whether a linear
//! map on `M_{n_1} kron ... kron M_{n_m}` has the standard form
//! `A_1 kron ... kron A_m -> U (phi_1(A_1) kron ... kron phi_m(A_m)) V`
//! with each `phi_s` the identity or the transpose.
//!
//! Everything is generic over the real scalar [`Real`] (`f32` or `f64`); the
//! aliases below fix double precision, which is what the default tolerances
//! in [`tol`] are calibrated for.

pub mod eig;
pub mod error;
pub mod gallery;
pub mod matrix;
pub mod norms;
pub mod ortho;
pub mod preserver;
pub mod random;
pub mod scalar;
pub mod shape;
pub mod svd;
pub mod tol;

pub use eig::{hermitian_eig, HermitianEigen};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use norms::{norm, norm_attaining_vectors, NormSpec};
pub use preserver::{Flag, RecoveryReport, StandardForm, SuperOperator, Verdict};
pub use random::{gaussian_matrix, random_unitary};
pub use scalar::{Cx, Real};
pub use shape::TensorShape;
pub use svd::{svd, SingularSpectrum};

/// Double-precision complex scalar.
pub type C64 = Cx<f64>;
/// Double-precision dense complex matrix.
pub type ComplexMatrix = Matrix<f64>;
/// Single-precision dense complex matrix.
pub type ComplexMatrixF32 = Matrix<f32>;
pub type Spectrum = SingularSpectrum<f64>;
pub type SuperOp = SuperOperator<f64>;
pub type Form = StandardForm<f64>;
pub type Recovery = RecoveryReport<f64>;
