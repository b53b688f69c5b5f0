//! Named witnesses, the realignment (CCNR) separability test and random
//! product-state generators.

use rand::Rng;

use crate::error::{dim, Error, Result};
use crate::matrix::Matrix;
use crate::norms::{norm, NormSpec};
use crate::preserver::SuperOperator;
use crate::random::{gaussian_with, rng};
use crate::scalar::{re, Cx, Real};
use crate::shape::TensorShape;
use crate::tol;

/// `r^2 E11 kron E11 + r (E12 kron E12 + E21 kron E21) + E22 kron E22` in
/// `M_2 kron M_2`.
///
/// Its singular values are `r^2 + 1, 0, 0, 0`, while transposing the second
/// factor gives `r^2, r, r, 1`.
pub fn c_r_matrix<T: Real>(r: T) -> Result<Matrix<T>> {
    if !r.is_finite() || r < T::zero() {
        return Err(Error::Precondition(format!("r = {r} must be finite and >= 0")));
    }
    let e = |i, j| Matrix::<T>::unit(2, 2, i, j);
    let terms = [
        (r * r, e(0, 0).kron(&e(0, 0))),
        (r, e(0, 1).kron(&e(0, 1))),
        (r, e(1, 0).kron(&e(1, 0))),
        (T::one(), e(1, 1).kron(&e(1, 1))),
    ];
    Ok(terms
        .iter()
        .fold(Matrix::zeros(4, 4), |acc, (c, m)| &acc + &m.scale_re(*c)))
}

/// The map on `M_{mn}` exchanging entries `(1, mn)` and `(mn, 1)` and fixing
/// the rest. It preserves the Frobenius norm but is not of standard form.
pub fn swap_corner_map<T: Real>(m: usize, n: usize) -> Result<SuperOperator<T>> {
    let shape = TensorShape::bipartite(m, n)?;
    let big = shape.total();
    let n2 = big * big;
    let (a, b) = ((big - 1) * big, big - 1);
    let mut perm: Vec<usize> = (0..n2).collect();
    perm.swap(a, b);
    let mut matrix = Matrix::zeros(n2, n2);
    for (i, &j) in perm.iter().enumerate() {
        matrix[(i, j)] = re(T::one());
    }
    SuperOperator::new(shape, matrix)
}

/// Outcome of [`ccnr_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct CcnrReport<T: Real> {
    pub realignment_trace_norm: T,
    /// `true` certifies entanglement; `false` is inconclusive.
    pub flagged_entangled: bool,
    /// Small defects in the input (trace, Hermiticity, positivity).
    pub warnings: Vec<String>,
}

/// Realignment criterion: a separable state has realignment trace norm at
/// most 1.
///
/// Inputs that are not exactly unit-trace Hermitian psd are still evaluated;
/// the defects are reported in `warnings`.
pub fn ccnr_check<T: Real>(rho: &Matrix<T>, shape: (usize, usize)) -> Result<CcnrReport<T>> {
    let (m, n) = shape;
    let big = m * n;
    if rho.shape() != (big, big) {
        return Err(dim(
            "ccnr_check",
            format!("state is {}x{}, shape ({m},{n}) needs {big}x{big}", rho.rows(), rho.cols()),
        ));
    }
    let mut warnings = Vec::new();
    let tr = rho.trace();
    if (tr - re(T::one())).norm() > T::tol(tol::ZERO_ONE) {
        warnings.push(format!("trace is {} + {}i, expected 1", tr.re, tr.im));
    }
    let scale = T::one().max(rho.frobenius_norm());
    let herm = rho.hermitian_residual();
    if herm > T::tol(tol::HERM) * scale {
        warnings.push(format!("not Hermitian (residual {:e})", herm.as_f64()));
    } else {
        let sym = (rho + &rho.adjoint()).scale_re(T::lit(0.5));
        if let Ok(e) = crate::eig::hermitian_eig(&sym) {
            let low = e.values.last().copied().unwrap_or_else(T::zero);
            if low < -T::tol(tol::HERM) * scale {
                warnings.push(format!("not positive semidefinite (eigenvalue {:e})", low.as_f64()));
            }
        }
    }
    let r = rho.rearrange((m, m), (n, n))?;
    let value = norm(&r, NormSpec::TraceNorm)?;
    Ok(CcnrReport {
        realignment_trace_norm: value,
        flagged_entangled: value > T::one() + T::tol(tol::CCNR),
        warnings,
    })
}

/// `A_1 kron ... kron A_m` with complex Gaussian factors.
pub fn random_product_matrix<T: Real>(shape: &TensorShape, seed: u64) -> Matrix<T> {
    let mut g = rng(seed);
    shape
        .dims()
        .iter()
        .map(|&d| gaussian_with(d, d, &mut g))
        .fold(Matrix::identity(1), |acc, f| acc.kron(&f))
}

/// `(|00> + |11>)(<00| + <11|) / 2` on `C^2 kron C^2`.
pub fn maximally_entangled_state<T: Real>() -> Matrix<T> {
    let half = T::lit(0.5);
    Matrix::from_fn(4, 4, |i, j| {
        if i % 3 == 0 && j % 3 == 0 {
            re(half)
        } else {
            re(T::zero())
        }
    })
}

/// `x x^* kron y y^*` for the normalized vectors `x`, `y`.
pub fn product_state<T: Real>(x: &[Cx<T>], y: &[Cx<T>]) -> Result<Matrix<T>> {
    let proj = |v: &[Cx<T>]| -> Result<Matrix<T>> {
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if nrm == T::zero() {
            return Err(Error::ZeroMatrix);
        }
        let col = Matrix::column_vector(v).scale_re(T::one() / nrm);
        Ok(&col * &col.adjoint())
    };
    Ok(proj(x)?.kron(&proj(y)?))
}

/// Random unit-trace psd matrix `G G^* / tr(G G^*)`.
fn random_density<T: Real, R: Rng>(d: usize, g: &mut R) -> Matrix<T> {
    let a = gaussian_with::<T, R>(d, d, g);
    let p = &a * &a.adjoint();
    let t = p.trace().re;
    p.scale_re(T::one() / t)
}

/// `sum_i p_i A_i kron B_i` with random density matrices `A_i in M_m`,
/// `B_i in M_n` and random probability weights.
pub fn random_separable_mixture<T: Real>(m: usize, n: usize, terms: usize, seed: u64) -> Matrix<T> {
    let mut g = rng(seed);
    let weights: Vec<T> = (0..terms.max(1)).map(|_| T::lit(g.random_range(0.05..1.0))).collect();
    let total: T = weights.iter().copied().sum();
    let mut rho = Matrix::zeros(m * n, m * n);
    for w in weights {
        let a = random_density::<T, _>(m, &mut g);
        let b = random_density::<T, _>(n, &mut g);
        rho = &rho + &a.kron(&b).scale_re(w / total);
    }
    rho
}

/// Random unit vector in `C^d`.
pub fn random_unit_vector<T: Real>(d: usize, seed: u64) -> Vec<Cx<T>> {
    let mut g = rng(seed);
    let v = gaussian_with::<T, _>(d, 1, &mut g).into_data();
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    v.into_iter().map(|z| z * (T::one() / nrm)).collect()
}
