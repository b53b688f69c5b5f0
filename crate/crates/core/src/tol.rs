//! Default tolerances (stated for double precision).
//!
//! Use [`crate::Real::tol`] to obtain a value floored for the working
//! precision.

/// Relative SVD reconstruction accuracy.
pub const SVD: f64 = 1e-10;
/// `||U*U - I||_F` accepted as unitary.
pub const UNITARY: f64 = 1e-8;
/// Relative anti-Hermitian residual accepted as Hermitian.
pub const HERM: f64 = 1e-8;
/// Singular values above `RANK * max(1, s_1)` count toward the numerical rank.
pub const RANK: f64 = 1e-8;
/// Relative orthogonality residual.
pub const ORTHO: f64 = 1e-8;
/// Agreement required of sampled norm identities.
pub const NORM_IDENTITY: f64 = 1e-8;
/// Singular values within this distance of 0 or 1 count as "in {0, 1}".
pub const ZERO_ONE: f64 = 1e-6;
/// Preservation check on product matrices: `max deviation <= VERIFY * scale`.
pub const VERIFY: f64 = 1e-6;
/// Recovery residual per unit of ambient dimension `N`.
pub const RECOVER_PER_DIM: f64 = 1e-6;
/// Margin above 1 before the realignment criterion flags a state.
pub const CCNR: f64 = 1e-8;
/// Jacobi sweep budget per column.
pub const SWEEPS_PER_COLUMN: usize = 30;
