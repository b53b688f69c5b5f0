#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensorpres::{gaussian_matrix, random_unitary, ComplexMatrix as M, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_7e57)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `U diag(d) V^*` with Haar `U`, `V` drawn from `seed`.
pub fn with_singular_values(d: &[f64], seed: u64) -> M {
    let n = d.len();
    let u = random_unitary::<f64>(n, seed.wrapping_mul(2).wrapping_add(1));
    let v = random_unitary::<f64>(n, seed.wrapping_mul(2).wrapping_add(2));
    &(&u * &M::from_real_diag(d)) * &v.adjoint()
}

/// `A = W diag(da) Z^*`, `B = W diag(db) Z^*` for one pair of unitaries, so
/// `A` and `B` are orthogonal whenever the supports of `da`, `db` are disjoint.
pub fn shared_basis(da: &[f64], db: &[f64], seed: u64) -> (M, M) {
    let n = da.len();
    let w = random_unitary::<f64>(n, seed.wrapping_mul(3).wrapping_add(7));
    let z = random_unitary::<f64>(n, seed.wrapping_mul(3).wrapping_add(8));
    let a = &(&w * &M::from_real_diag(da)) * &z.adjoint();
    let b = &(&w * &M::from_real_diag(db)) * &z.adjoint();
    (a, b)
}

/// Orthogonal pair in `M_n` with the given ranks and random positive
/// singular values in `[0.5, 2]`.
pub fn orthogonal_pair(n: usize, rank_a: usize, rank_b: usize, seed: u64) -> (M, M) {
    assert!(rank_a + rank_b <= n);
    let mut g = rng(seed);
    let mut da = vec![0.0; n];
    let mut db = vec![0.0; n];
    for x in da.iter_mut().take(rank_a) {
        *x = g.random_range(0.5..2.0);
    }
    for x in db.iter_mut().skip(rank_a).take(rank_b) {
        *x = g.random_range(0.5..2.0);
    }
    shared_basis(&da, &db, seed)
}

/// Random rank-`r` matrix in `M_n`.
pub fn low_rank(n: usize, r: usize, seed: u64) -> M {
    let left = gaussian_matrix::<f64>(n, r, seed);
    let right = gaussian_matrix::<f64>(r, n, seed ^ 0xabcdef);
    &left * &right
}

/// Random psd matrix of rank `r`.
pub fn psd(n: usize, r: usize, seed: u64) -> M {
    let g = gaussian_matrix::<f64>(n, r, seed);
    &g * &g.adjoint()
}

pub fn hermitian(n: usize, seed: u64) -> M {
    let g = gaussian_matrix::<f64>(n, n, seed);
    (&g + &g.adjoint()).scale_re(0.5)
}

/// psd `A` of rank `r` and Hermitian `B` whose block facing the range of `A`
/// is zero, so `AB` is nilpotent.
pub fn nilpotent_pair(n: usize, r: usize, seed: u64) -> (M, M) {
    let q = random_unitary::<f64>(n, seed);
    let mut g = rng(seed);
    let d: Vec<f64> = (0..n).map(|i| if i < r { g.random_range(0.5..2.0) } else { 0.0 }).collect();
    let h = hermitian(n, seed ^ 0x77);
    let block = M::from_fn(n, n, |i, j| if i < r && j < r { c(0.0, 0.0) } else { h[(i, j)] });
    let a = &(&q * &M::from_real_diag(&d)) * &q.adjoint();
    let b = &(&q * &block) * &q.adjoint();
    (a, b)
}

pub fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Roots of the monic cubic `z^3 + c2 z^2 + c1 z + c0` by Durand–Kerner.
pub fn cubic_roots(c2: C64, c1: C64, c0: C64) -> [C64; 3] {
    let p = |z: C64| ((z + c2) * z + c1) * z + c0;
    let seed = c(0.4, 0.9);
    let mut z = [c(1.0, 0.0), seed, seed * seed];
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..3 {
            let mut denom = c(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = p(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// `(tr M, sum of principal 2x2 minors, det M)`; the characteristic
/// polynomial is `z^3 - c0 z^2 + c1 z - c2`.
pub fn char_poly_3x3(m: &M) -> [C64; 3] {
    let a = |i, j| m[(i, j)];
    let tr = a(0, 0) + a(1, 1) + a(2, 2);
    let minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)
        + a(1, 1) * a(2, 2)
        - a(1, 2) * a(2, 1);
    let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    [tr, minors, det]
}

/// Eigenvalues of a 3x3 matrix from its characteristic polynomial. Multiple
/// roots are ill-conditioned (error about `eps^(1/3)` for a triple root).
pub fn eigenvalues_3x3(m: &M) -> [C64; 3] {
    let [tr, minors, det] = char_poly_3x3(m);
    cubic_roots(-tr, minors, -det)
}
