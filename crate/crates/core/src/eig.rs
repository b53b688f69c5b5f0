//! Hermitian eigendecomposition by cyclic two-sided Jacobi rotations.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{re, Cx, Real};
use crate::tol;

/// Eigenvalues in non-increasing order with a unitary matrix of eigenvectors
/// (as columns): `A = vectors * Diag(values) * vectors^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

/// Rejects inputs with `||A - A*||_F > 1e-8 * max(1, ||A||_F)`; the Hermitian
/// part is decomposed.
pub fn hermitian_eig<T: Real>(a: &Matrix<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(crate::error::dim(
            "hermitian_eig",
            format!("{}x{} is not square", a.rows(), a.cols()),
        ));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let frob = a.frobenius_norm();
    let residual = a.hermitian_residual();
    if residual > T::tol(tol::HERM) * frob.max(T::one()) {
        return Err(Error::NotHermitian {
            residual: residual.as_f64(),
        });
    }

    let n = a.rows();
    let half = T::lit(0.5);
    let mut h = Matrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half);
    for i in 0..n {
        h[(i, i)] = re(h[(i, i)].re);
    }
    let mut vecs = Matrix::<T>::identity(n);

    let eps = T::epsilon();
    let floor = eps * frob / T::from_usize_lossy(n);
    let max_sweeps = tol::SWEEPS_PER_COLUMN * n;
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = h[(p, q)];
                let mag = apq.norm();
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                if mag <= floor || mag <= eps * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;
                let phase = apq / mag;
                let theta = (aqq - app) / (mag + mag);
                let t = if theta >= T::zero() {
                    T::one() / (theta + (T::one() + theta * theta).sqrt())
                } else {
                    -T::one() / (-theta + (T::one() + theta * theta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                let ph = phase.conj();
                let g = [[re(c), re(s)], [-ph * s, ph * c]];
                apply_rotation(&mut h, &mut vecs, p, q, &g);
                h[(p, p)] = re(app - t * mag);
                h[(q, q)] = re(aqq + t * mag);
                h[(p, q)] = re(T::zero());
                h[(q, p)] = re(T::zero());
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps >= max_sweeps {
            return Err(Error::NonConvergence { sweeps });
        }
    }

    let diag: Vec<T> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    Ok(HermitianEigen {
        values,
        vectors: vecs.permute_columns(&order),
    })
}

/// `H <- G^* H G` on rows/cols `p, q`; `V <- V G`.
fn apply_rotation<T: Real>(h: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize, g: &[[Cx<T>; 2]; 2]) {
    let n = h.rows();
    for k in 0..n {
        let (hp, hq) = (h[(k, p)], h[(k, q)]);
        h[(k, p)] = hp * g[0][0] + hq * g[1][0];
        h[(k, q)] = hp * g[0][1] + hq * g[1][1];
        let (vp, vq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vp * g[0][0] + vq * g[1][0];
        v[(k, q)] = vp * g[0][1] + vq * g[1][1];
    }
    for k in 0..n {
        let (hp, hq) = (h[(p, k)], h[(q, k)]);
        h[(p, k)] = g[0][0].conj() * hp + g[1][0].conj() * hq;
        h[(q, k)] = g[0][1].conj() * hp + g[1][1].conj() * hq;
    }
}

/// Positive semidefinite square root; eigenvalues in `[-tol, 0)` are floored
/// to zero, anything more negative is rejected. Eigenvalues at roundoff level
/// are also set to zero so they do not grow to `sqrt(eps)` in the root.
pub fn psd_sqrt<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let eig = hermitian_eig(a)?;
    let cut = T::tol(tol::HERM) * a.frobenius_norm().max(T::one());
    if let Some(&lo) = eig.values.last() {
        if lo < -cut {
            return Err(Error::NotPsd {
                min_eigenvalue: lo.as_f64(),
            });
        }
    }
    let top = eig.values.first().copied().unwrap_or_else(T::zero).abs();
    let noise = T::epsilon() * T::lit(4.0) * T::from_usize_lossy(a.rows()) * top;
    let roots: Vec<T> = eig
        .values
        .iter()
        .map(|&x| if x <= noise { T::zero() } else { x.sqrt() })
        .collect();
    Ok(&(&eig.vectors * &Matrix::from_real_diag(&roots)) * &eig.vectors.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_unitary;
    use crate::scalar::cx;

    #[test]
    fn diagonal_input() {
        let e = hermitian_eig(&Matrix::<f64>::from_real_diag(&[1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
    }

    #[test]
    fn pauli_x() {
        let x = Matrix::<f64>::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_complex_offdiagonal() {
        let y = Matrix::<f64>::new(
            2,
            2,
            vec![cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)],
        )
        .unwrap();
        let e = hermitian_eig(&y).unwrap();
        let rec = &(&e.vectors * &Matrix::from_real_diag(&e.values)) * &e.vectors.adjoint();
        assert!((&rec - &y).frobenius_norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = Matrix::<f64>::unit(2, 2, 0, 1);
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn constructed_spectrum_round_trip() {
        let d = [3.0, -1.5, 0.25, 0.0, -4.0];
        let q = random_unitary::<f64>(5, 21);
        let a = &(&q * &Matrix::from_real_diag(&d)) * &q.adjoint();
        let e = hermitian_eig(&a).unwrap();
        let mut sorted = d.to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (x, y) in e.values.iter().zip(&sorted) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(e.vectors.unitarity_residual() < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let q = random_unitary::<f64>(4, 3);
        let a = &(&q * &Matrix::from_real_diag(&[4.0, 1.0, 0.0, 0.0])) * &q.adjoint();
        let r = psd_sqrt(&a).unwrap();
        assert!((&(&r * &r) - &a).frobenius_norm() < 1e-12);
        let neg = Matrix::<f64>::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPsd { .. })));
    }
}
