//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of the working matrix are orthogonalized pairwise with complex
//! plane rotations until every pair satisfies
//! `|w_p^* w_q| <= tol * ||w_p|| ||w_q||`. The singular values are the final
//! column norms. Wide inputs are handled through the adjoint.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{re, Cx, Real};
use crate::tol;

/// Singular values in non-increasing order, with optional unitary factors.
///
/// When factors are present, `A = left * Diag(values) * right^*` where `left`
/// is `rows x rows`, `right` is `cols x cols` and `values` has
/// `min(rows, cols)` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum<T: Real> {
    pub values: Vec<T>,
    pub left: Option<Matrix<T>>,
    pub right: Option<Matrix<T>>,
}

impl<T: Real> SingularSpectrum<T> {
    /// Number of singular values above `1e-8 * max(1, s_1)`.
    pub fn rank(&self) -> usize {
        numerical_rank(&self.values)
    }

    pub fn largest(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    /// `left * Diag(values) * right^*`, if factors were computed.
    pub fn reconstruct(&self) -> Option<Matrix<T>> {
        let (u, v) = (self.left.as_ref()?, self.right.as_ref()?);
        let k = self.values.len();
        let mut us = u.columns(0..k);
        for j in 0..k {
            for i in 0..us.rows() {
                us[(i, j)] *= self.values[j];
            }
        }
        Some(us * v.columns(0..k).adjoint())
    }
}

/// Count of values strictly above `1e-8 * max(1, max value)`.
pub fn numerical_rank<T: Real>(values: &[T]) -> usize {
    let top = values.iter().copied().fold(T::zero(), T::max);
    let cut = T::tol(tol::RANK) * top.max(T::one());
    values.iter().filter(|&&s| s > cut).count()
}

/// Singular values of `a`, and the unitary factors when `want_factors` is set.
pub fn svd<T: Real>(a: &Matrix<T>, want_factors: bool) -> Result<SingularSpectrum<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.rows() < a.cols() {
        let s = jacobi(&a.adjoint(), want_factors)?;
        return Ok(SingularSpectrum {
            values: s.values,
            left: s.right,
            right: s.left,
        });
    }
    jacobi(a, want_factors)
}

/// Singular values only.
pub fn singular_values<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    Ok(svd(a, false)?.values)
}

fn col_dot<T: Real>(p: &[Cx<T>], q: &[Cx<T>]) -> Cx<T> {
    p.iter().zip(q).map(|(a, b)| a.conj() * b).sum()
}

fn col_norm_sqr<T: Real>(p: &[Cx<T>]) -> T {
    p.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies `[p, q] <- [p, q] * [[c, s], [-s conj(phase), c conj(phase)]]`.
fn rotate<T: Real>(cols: &mut [Vec<Cx<T>>], p: usize, q: usize, c: T, s: T, phase: Cx<T>) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    let ph = phase.conj();
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let wp = *x;
        let wq = *y * ph;
        *x = wp * c - wq * s;
        *y = wp * s + wq * c;
    }
}

fn jacobi<T: Real>(a: &Matrix<T>, want_factors: bool) -> Result<SingularSpectrum<T>> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut w: Vec<Vec<Cx<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Cx<T>>> = if want_factors {
        (0..n)
            .map(|j| {
                let mut e = vec![re(T::zero()); n];
                e[j] = re(T::one());
                e
            })
            .collect()
    } else {
        Vec::new()
    };

    let eps = T::epsilon();
    let tol_rel = eps * T::from_usize_lossy(m).sqrt() * T::lit(2.0);
    let frob = a.frobenius_norm();
    // columns this small carry no information and are left alone
    let negligible = (eps * frob).powi(2);
    let max_sweeps = tol::SWEEPS_PER_COLUMN * n.max(1);

    let mut norms: Vec<T> = w.iter().map(|c| col_norm_sqr(c)).collect();
    let mut converged = frob == T::zero() || n == 1;
    let mut sweeps = 0;
    while !converged {
        if sweeps == max_sweeps {
            return Err(Error::NonConvergence { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let g = col_dot(&w[p], &w[q]);
                let gn = g.norm();
                if gn <= tol_rel * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = g / gn;
                let zeta = (beta - alpha) / (gn + gn);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s, phase);
                if want_factors {
                    rotate(&mut v, p, q, c, s, phase);
                }
                norms[p] = col_norm_sqr(&w[p]);
                norms[q] = col_norm_sqr(&w[q]);
            }
        }
        converged = !rotated;
    }

    let sigma: Vec<T> = norms.iter().map(|x| x.sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&j| sigma[j]).collect();

    if !want_factors {
        return Ok(SingularSpectrum {
            values,
            left: None,
            right: None,
        });
    }

    let mut right = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        right.set_column(dst, &v[src]);
    }

    let mut basis: Vec<Vec<Cx<T>>> = Vec::with_capacity(m);
    let zero_cut = eps * frob * T::from_usize_lossy(m);
    for &j in &order {
        if sigma[j] > zero_cut {
            let inv = T::one() / sigma[j];
            basis.push(w[j].iter().map(|&z| z * inv).collect());
        } else {
            break;
        }
    }
    let left = complete_basis(basis, m);
    Ok(SingularSpectrum {
        values,
        left: Some(left),
        right: Some(right),
    })
}

/// Extends orthonormal columns to an `m x m` unitary, each time adding the
/// standard basis vector with the largest residual, orthogonalized twice.
pub(crate) fn complete_basis<T: Real>(mut basis: Vec<Vec<Cx<T>>>, m: usize) -> Matrix<T> {
    let project_out = |basis: &[Vec<Cx<T>>], e: &mut Vec<Cx<T>>| {
        for _ in 0..2 {
            for b in basis {
                let proj = col_dot(b, e);
                for (x, &y) in e.iter_mut().zip(b) {
                    *x -= y * proj;
                }
            }
        }
    };
    while basis.len() < m {
        let mut best: Option<(T, Vec<Cx<T>>)> = None;
        for k in 0..m {
            let mut e = vec![re(T::zero()); m];
            e[k] = re(T::one());
            project_out(&basis, &mut e);
            let nrm = col_norm_sqr(&e).sqrt();
            if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
                best = Some((nrm, e));
            }
        }
        let (nrm, e) = best.expect("m > 0");
        let inv = T::one() / nrm;
        basis.push(e.into_iter().map(|z| z * inv).collect());
    }
    let mut out = Matrix::zeros(m, m);
    for (j, col) in basis.iter().enumerate().take(m) {
        out.set_column(j, col);
    }
    out
}
