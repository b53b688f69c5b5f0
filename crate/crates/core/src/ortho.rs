//! Matrix orthogonality (`A B^* = A^* B = 0`) and numerical checks of the
//! norm identities that characterize it.
//!
//! The oracles here take a claimed implication, test its hypotheses at a
//! tolerance, and report whether the conclusion followed. A conclusion that
//! fails after the hypotheses held is reported as [`OracleVerdict::ConclusionViolated`]
//! or as [`Error::PropertyViolation`], never silently.

use rand::Rng;

use crate::eig::{hermitian_eig, psd_sqrt};
use crate::error::{dim, Error, Result};
use crate::matrix::Matrix;
use crate::norms::{norm, schatten_pow, NormSpec};
use crate::random::{rng, unit_scalar};
use crate::scalar::{unit_phase, Cx, Real};
use crate::svd::{numerical_rank, singular_values, svd};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthoReport<T: Real> {
    pub orthogonal: bool,
    /// `max(||A B^*||_F, ||A^* B||_F)`.
    pub residual: T,
    pub rank_a: usize,
    pub rank_b: usize,
}

fn same_shape<T: Real>(op: &'static str, a: &Matrix<T>, b: &Matrix<T>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(dim(
            op,
            format!("{}x{} vs {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        ));
    }
    Ok(())
}

fn ortho_residual<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> T {
    let left = (a * &b.adjoint()).frobenius_norm();
    let right = (&a.adjoint() * b).frobenius_norm();
    left.max(right)
}

fn ortho_scale<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> T {
    (a.frobenius_norm() * b.frobenius_norm()).max(T::one())
}

pub fn is_orthogonal<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<OrthoReport<T>> {
    same_shape("is_orthogonal", a, b)?;
    let residual = ortho_residual(a, b);
    Ok(OrthoReport {
        orthogonal: residual <= T::tol(tol::ORTHO) * ortho_scale(a, b),
        residual,
        rank_a: numerical_rank(&singular_values(a)?),
        rank_b: numerical_rank(&singular_values(b)?),
    })
}

/// Unitaries `u, v` with `u A v = Diag(diag_a)` and `u B v = Diag(diag_b)`,
/// both nonnegative with disjoint supports.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousDiagonal<T: Real> {
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub diag_a: Vec<T>,
    pub diag_b: Vec<T>,
}

/// Diagonalizes an orthogonal pair.
///
/// Takes the SVD of `A`; orthogonality forces `B` to live on the complements
/// of `A`'s left and right singular subspaces, so an SVD of `B` compressed to
/// those complements finishes the job. Coinciding singular values of `A` and
/// `B` cause no mixing.
pub fn simultaneous_diagonalize<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<SimultaneousDiagonal<T>> {
    same_shape("simultaneous_diagonalize", a, b)?;
    if !a.is_square() {
        return Err(dim("simultaneous_diagonalize", "inputs must be square"));
    }
    let report = is_orthogonal(a, b)?;
    if !report.orthogonal {
        return Err(Error::NotOrthogonal {
            residual: report.residual.as_f64(),
        });
    }
    let n = a.rows();
    let sa = svd(a, true)?;
    let ua = sa.left.as_ref().expect("factors");
    let va = sa.right.as_ref().expect("factors");
    let r = report.rank_a;

    let (u_total, v_total) = if r == n {
        (ua.clone(), va.clone())
    } else {
        let uc = ua.columns(r..n);
        let vc = va.columns(r..n);
        let compressed = &(&uc.adjoint() * b) * &vc;
        let sk = svd(&compressed, true)?;
        let uk = &uc * sk.left.as_ref().expect("factors");
        let vk = &vc * sk.right.as_ref().expect("factors");
        let mut ut = Matrix::zeros(n, n);
        let mut vt = Matrix::zeros(n, n);
        for j in 0..r {
            ut.set_column(j, &ua.column(j));
            vt.set_column(j, &va.column(j));
        }
        for j in 0..n - r {
            ut.set_column(r + j, &uk.column(j));
            vt.set_column(r + j, &vk.column(j));
        }
        (ut, vt)
    };

    let u = u_total.adjoint();
    let da = &(&u * a) * &v_total;
    let db = &(&u * b) * &v_total;
    Ok(SimultaneousDiagonal {
        diag_a: (0..n).map(|i| da[(i, i)].re).collect(),
        diag_b: (0..n).map(|i| db[(i, i)].re).collect(),
        u,
        v: v_total,
    })
}

/// Sampled check of `||xA + yB||_(k) = |x| ||A||_(k) + |y| ||B||_(k)`.
///
/// Scalars are drawn as random radii in `[0.25, 2]` times random phases; the
/// pair `(1, 1)` is always included. The sampled answer must agree with the
/// structural prediction (`A` orthogonal to `B` and `rank A + rank B <= k`);
/// disagreement is returned as [`Error::PropertyViolation`].
pub fn additivity_check<T: Real>(a: &Matrix<T>, b: &Matrix<T>, k: usize, samples: usize, seed: u64) -> Result<bool> {
    same_shape("additivity_check", a, b)?;
    let spec = NormSpec::KyFan(k);
    let na = norm(a, spec)?;
    let nb = norm(b, spec)?;
    if na == T::zero() || nb == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    let mut g = rng(seed);
    let mut pairs: Vec<(Cx<T>, Cx<T>)> = vec![(Cx::new(T::one(), T::zero()), Cx::new(T::one(), T::zero()))];
    for _ in 0..samples {
        let ra = T::lit(g.random_range(0.25..2.0));
        let rb = T::lit(g.random_range(0.25..2.0));
        let pa: Cx<T> = unit_scalar(&mut g);
        let pb: Cx<T> = unit_scalar(&mut g);
        pairs.push((pa * ra, pb * rb));
    }
    let mut additive = true;
    for (x, y) in pairs {
        let lhs = norm(&a.combine(x, b, y)?, spec)?;
        let rhs = x.norm() * na + y.norm() * nb;
        if (lhs - rhs).abs() > T::tol(tol::NORM_IDENTITY) * rhs.max(T::one()) {
            additive = false;
            break;
        }
    }
    let report = is_orthogonal(a, b)?;
    let predicted = report.orthogonal && report.rank_a + report.rank_b <= k;
    if additive != predicted {
        return Err(Error::PropertyViolation(format!(
            "Ky Fan {k} additivity sampled as {additive} but orthogonality/rank predicts {predicted} \
             (residual {:e}, ranks {} + {})",
            report.residual.as_f64(),
            report.rank_a,
            report.rank_b
        )));
    }
    Ok(additive)
}

/// Result of [`psd_hermitian_spectrum_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCheck<T: Real> {
    /// Eigenvalues of `A^{1/2} B A^{1/2}`, which equal the spectrum of `AB`.
    pub spectrum: Vec<T>,
    /// When the spectrum is `{0}`: whether `B` compressed to the range of `A`
    /// vanishes. `None` otherwise.
    pub top_block_zero: Option<bool>,
}

/// For `A` positive semidefinite and `B` Hermitian, the spectrum of `AB` is
/// real (it is that of the Hermitian `A^{1/2} B A^{1/2}`); and if it is `{0}`,
/// then in an eigenbasis of `A` the block of `B` facing the range of `A` is zero.
pub fn psd_hermitian_spectrum_check<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<SpectrumCheck<T>> {
    same_shape("psd_hermitian_spectrum_check", a, b)?;
    let b_scale = b.frobenius_norm().max(T::one());
    let b_res = b.hermitian_residual();
    if b_res > T::tol(tol::HERM) * b_scale {
        return Err(Error::NotHermitian {
            residual: b_res.as_f64(),
        });
    }
    let root = psd_sqrt(a)?;
    let inner = &(&root * b) * &root;
    let half = T::lit(0.5);
    let inner = Matrix::from_fn(inner.rows(), inner.cols(), |i, j| {
        (inner[(i, j)] + inner[(j, i)].conj()) * half
    });
    let spectrum = hermitian_eig(&inner)?.values;

    let zero_cut = T::tol(tol::ORTHO) * (a.frobenius_norm() * b.frobenius_norm()).max(T::one());
    let nilpotent = spectrum.iter().all(|x| x.abs() <= zero_cut);
    let top_block_zero = if nilpotent {
        let ea = hermitian_eig(a)?;
        let r = numerical_rank(&ea.values.iter().map(|x| x.max(T::zero())).collect::<Vec<_>>());
        if r == 0 {
            Some(true)
        } else {
            let q = ea.vectors.columns(0..r);
            let block = &(&q.adjoint() * b) * &q;
            Some(block.frobenius_norm() <= T::tol(tol::ORTHO) * b_scale)
        }
    } else {
        None
    };
    Ok(SpectrumCheck {
        spectrum,
        top_block_zero,
    })
}

/// Outcome of an implication oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    /// The hypotheses were not met for the supplied scalars.
    HypothesesFailed,
    ConclusionHolds,
    /// Hypotheses held but the conclusion failed: a bug or a counterexample.
    ConclusionViolated,
}

/// Unimodular scalars for "for every unit alpha" hypotheses: 16 equally
/// spaced points on the circle, then 8 seeded random ones.
pub fn default_alphas<T: Real>(seed: u64) -> Vec<Cx<T>> {
    let mut out: Vec<Cx<T>> = (0..16)
        .map(|j| unit_phase(T::lit(std::f64::consts::TAU * j as f64 / 16.0)))
        .collect();
    let mut g = rng(seed);
    out.extend((0..8).map(|_| unit_scalar::<T, _>(&mut g)));
    out
}

fn approx_eq<T: Real>(x: T, y: T) -> bool {
    (x - y).abs() <= T::tol(tol::NORM_IDENTITY) * x.abs().max(y.abs()).max(T::one())
}

fn in_zero_one<T: Real>(values: &[T]) -> bool {
    let t = T::tol(tol::ZERO_ONE);
    values.iter().all(|&s| s.abs() <= t || (s - T::one()).abs() <= t)
}

/// Conclusion-side orthogonality, at the looser `1e-6` of the `{0, 1}` test.
fn loosely_orthogonal<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    ortho_residual(a, b) <= T::tol(tol::ZERO_ONE) * ortho_scale(a, b)
}

/// Ky Fan saturation oracle.
///
/// For `||A||, ||B|| <= 1` (spectral): if `rank A <= k`, `||A + aB||_(k) = k`
/// and `||2A + aB||_(k) = ||A||_(k) + ||A + aB||_(k)` for every supplied unit
/// `a`, then `A` is orthogonal to `B` and `A` is a partial isometry.
pub fn kyfan_saturation_oracle<T: Real>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    k: usize,
    alphas: &[Cx<T>],
) -> Result<OracleVerdict> {
    same_shape("kyfan_saturation_oracle", a, b)?;
    let slack = T::one() + T::tol(tol::NORM_IDENTITY);
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    if sa[0] > slack || sb[0] > slack {
        return Err(Error::Precondition(format!(
            "spectral norms must be at most 1 (got {:e}, {:e})",
            sa[0].as_f64(),
            sb[0].as_f64()
        )));
    }
    let spec = NormSpec::KyFan(k);
    let kk = T::from_usize_lossy(k);
    let na = norm(a, spec)?;
    let mut holds = numerical_rank(&sa) <= k;
    let two = Cx::new(T::lit(2.0), T::zero());
    let one = Cx::new(T::one(), T::zero());
    for &alpha in alphas {
        if !holds {
            break;
        }
        let sum = norm(&a.combine(one, b, alpha)?, spec)?;
        let doubled = norm(&a.combine(two, b, alpha)?, spec)?;
        holds = approx_eq(sum, kk) && approx_eq(doubled, na + sum);
    }
    if !holds {
        return Ok(OracleVerdict::HypothesesFailed);
    }
    Ok(if loosely_orthogonal(a, b) && in_zero_one(&sa) {
        OracleVerdict::ConclusionHolds
    } else {
        OracleVerdict::ConclusionViolated
    })
}

/// Partial-isometry oracle.
///
/// For `A` a partial isometry of rank at least `k`: if `||A + aB||_(k) = k`
/// for every supplied unit `a`, then `A` is orthogonal to `B`.
pub fn partial_isometry_oracle<T: Real>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    k: usize,
    alphas: &[Cx<T>],
) -> Result<OracleVerdict> {
    same_shape("partial_isometry_oracle", a, b)?;
    let sa = singular_values(a)?;
    let rank = numerical_rank(&sa);
    if rank < k {
        return Err(Error::Precondition(format!("rank A = {rank} < k = {k}")));
    }
    if !in_zero_one(&sa) {
        return Err(Error::Precondition(
            "singular values of A must lie in {0, 1}".into(),
        ));
    }
    let spec = NormSpec::KyFan(k);
    let kk = T::from_usize_lossy(k);
    let one = Cx::new(T::one(), T::zero());
    for &alpha in alphas {
        if !approx_eq(norm(&a.combine(one, b, alpha)?, spec)?, kk) {
            return Ok(OracleVerdict::HypothesesFailed);
        }
    }
    Ok(if loosely_orthogonal(a, b) {
        OracleVerdict::ConclusionHolds
    } else {
        OracleVerdict::ConclusionViolated
    })
}

/// Result of [`clarkson_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClarksonReport<T: Real> {
    /// `middle - lower bound`, nonnegative when the inequality holds.
    pub lower_gap: T,
    /// `upper bound - middle`, nonnegative when the inequality holds.
    pub upper_gap: T,
    pub equality_case: bool,
    /// `T = S` or `T = -S`: equality always holds on the `2^{p-1}` side and
    /// says nothing about orthogonality.
    pub degenerate: bool,
    /// Orthogonality of `T` and `S`, checked whenever equality holds.
    pub orthogonal: Option<bool>,
}

/// Clarkson–McCarthy two-sided inequality for Schatten `p != 2`:
///
/// with `a = ||T||_p^p + ||S||_p^p` and `mid = ||T+S||_p^p + ||T-S||_p^p`,
/// `2^{p-1} a <= mid <= 2a` for `p < 2` and `2a <= mid <= 2^{p-1} a` for
/// `p > 2`. Equality in either bound forces `T^*T S^*S = 0 = S^*S T^*T`, hence
/// `T` orthogonal to `S`, unless the pair is degenerate.
pub fn clarkson_check<T: Real>(t: &Matrix<T>, s: &Matrix<T>, p: f64) -> Result<ClarksonReport<T>> {
    same_shape("clarkson_check", t, s)?;
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidNorm(format!("Schatten p = {p} must be finite and >= 1")));
    }
    if p == 2.0 {
        return Err(Error::Precondition(
            "p = 2 makes every inequality an identity".into(),
        ));
    }
    let pt = T::lit(p);
    let sum = t.try_add(s)?;
    let diff = t.try_sub(s)?;
    let a = schatten_pow(t, pt)? + schatten_pow(s, pt)?;
    let mid = schatten_pow(&sum, pt)? + schatten_pow(&diff, pt)?;
    let two = T::lit(2.0);
    let pow_side = T::lit(2f64.powf(p - 1.0)) * a;
    let (lower, upper) = if p < 2.0 { (pow_side, two * a) } else { (two * a, pow_side) };
    let lower_gap = mid - lower;
    let upper_gap = upper - mid;

    let scale = upper.max(T::one());
    let eq_tol = T::tol(tol::NORM_IDENTITY) * scale;
    if lower_gap < -eq_tol || upper_gap < -eq_tol {
        return Err(Error::PropertyViolation(format!(
            "Clarkson–McCarthy inequality fails at p = {p}: gaps {:e}, {:e}",
            lower_gap.as_f64(),
            upper_gap.as_f64()
        )));
    }
    let equality_case = lower_gap <= eq_tol || upper_gap <= eq_tol;
    let size = t.frobenius_norm().max(s.frobenius_norm()).max(T::one());
    let degen_cut = T::tol(tol::NORM_IDENTITY) * size;
    let degenerate = sum.frobenius_norm() <= degen_cut || diff.frobenius_norm() <= degen_cut;

    let orthogonal = if equality_case {
        let ok = loosely_orthogonal(t, s);
        if !ok && !degenerate {
            return Err(Error::PropertyViolation(format!(
                "equality at p = {p} without orthogonality (residual {:e})",
                ortho_residual(t, s).as_f64()
            )));
        }
        Some(ok)
    } else {
        None
    };
    Ok(ClarksonReport {
        lower_gap,
        upper_gap,
        equality_case,
        degenerate,
        orthogonal,
    })
}
