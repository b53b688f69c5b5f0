//! Seeded random matrices.
//!
//! All samplers draw `f64` normals from a ChaCha8 stream seeded with the given
//! 64-bit seed, then convert, so a seed yields the same matrix (up to rounding)
//! at every precision and bit-identical output at a fixed precision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::Matrix;
use crate::scalar::{cx, Cx, Real};
use crate::svd::complete_basis;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn normal_cx<T: Real, R: Rng>(rng: &mut R) -> Cx<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    cx(T::lit(a * h), T::lit(b * h))
}

pub(crate) fn gaussian_with<T: Real, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| normal_cx(rng))
}

/// Complex Ginibre matrix: entries `(x + iy)/sqrt(2)` with `x, y` standard normal.
pub fn gaussian_matrix<T: Real>(rows: usize, cols: usize, seed: u64) -> Matrix<T> {
    gaussian_with(rows, cols, &mut rng(seed))
}

pub(crate) fn unitary_with<T: Real, R: Rng>(n: usize, rng: &mut R) -> Matrix<T> {
    let g: Matrix<T> = gaussian_with(n, n, rng);
    haar_qr(&g)
}

/// Haar-distributed unitary.
///
/// Gram–Schmidt QR of a Ginibre matrix; Gram–Schmidt leaves `R` with a
/// positive diagonal, which is the phase fixing that makes `Q` Haar.
pub fn random_unitary<T: Real>(n: usize, seed: u64) -> Matrix<T> {
    unitary_with(n, &mut rng(seed))
}

fn haar_qr<T: Real>(g: &Matrix<T>) -> Matrix<T> {
    let n = g.cols();
    let mut basis: Vec<Vec<Cx<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut col = g.column(j);
        // reorthogonalize once: "twice is enough"
        for _ in 0..2 {
            for b in &basis {
                let proj: Cx<T> = b.iter().zip(&col).map(|(x, y)| x.conj() * y).sum();
                for (c, &x) in col.iter_mut().zip(b) {
                    *c -= x * proj;
                }
            }
        }
        let nrm = col.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if nrm > T::epsilon() {
            let inv = T::one() / nrm;
            basis.push(col.into_iter().map(|z| z * inv).collect());
        }
    }
    // a rank-deficient draw has probability zero; complete it anyway
    complete_basis(basis, g.rows())
}

/// Random unimodular scalar.
pub(crate) fn unit_scalar<T: Real, R: Rng>(rng: &mut R) -> Cx<T> {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    crate::scalar::unit_phase(T::lit(theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_is_unimodular() {
        for seed in 0..10 {
            let u = random_unitary::<f64>(1, seed);
            assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unitary_up_to_16() {
        for n in 1..=16 {
            let u = random_unitary::<f64>(n, n as u64 * 31);
            assert!(u.unitarity_residual() <= 1e-10, "n = {n}");
        }
    }

    #[test]
    fn seeded_output_is_bit_identical() {
        let a = random_unitary::<f64>(6, 42);
        let b = random_unitary::<f64>(6, 42);
        assert_eq!(a.data(), b.data());
        assert_ne!(a.data(), random_unitary::<f64>(6, 43).data());
    }
}
