//! Linear maps on `M_N`, `N = n_1 ... n_m`, as superoperators, and recovery of
//! the standard form `U (phi_1(A_1) kron ... kron phi_m(A_m)) V`.
//!
//! A superoperator is stored as the `N^2 x N^2` matrix `S` with
//! `vec(phi(X)) = S vec(X)` under column stacking. For the standard form,
//! `S = (V^T kron U) P_F`, where `P_F` is the permutation that transposes the
//! flagged tensor factors.
//!
//! Recovery enumerates the `2^m` flag assignments `F`. For the right `F`,
//! `S P_F` is an exact Kronecker product `V^T kron U`, so its rearrangement
//! `vec(V^T) vec(U)^T` has rank one and the leading singular pair gives both
//! factors up to a scalar. Unitarity fixes the modulus of that scalar; the
//! phase is fixed by making the largest-magnitude entry of `U` real positive.

use std::fmt;

use rand::Rng;

use crate::error::{dim, Error, Result};
use crate::gallery::random_product_matrix;
use crate::matrix::Matrix;
use crate::norms::{norm, NormSpec};
use crate::ortho::is_orthogonal;
use crate::random::{rng, unitary_with};
use crate::scalar::{re, Cx, Real};
use crate::shape::TensorShape;
use crate::svd::singular_values;
use crate::tol;

/// Per-factor map in the standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    Identity,
    Transpose,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Identity => "Id",
            Flag::Transpose => "T",
        })
    }
}

/// Flag assignment number `mask` (bit `s` set means factor `s` is transposed).
pub fn flags_from_mask(mask: usize, m: usize) -> Vec<Flag> {
    (0..m)
        .map(|s| {
            if mask >> s & 1 == 1 {
                Flag::Transpose
            } else {
                Flag::Identity
            }
        })
        .collect()
}

fn transposed_factors(flags: &[Flag]) -> Vec<usize> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &f)| f == Flag::Transpose)
        .map(|(s, _)| s)
        .collect()
}

/// Index map of the partial-transpose permutation: `(P_F v)[a] = v[perm[a]]`.
/// It is an involution, so `S P_F` is `S` with columns permuted by `perm`.
pub fn flag_permutation(shape: &TensorShape, flags: &[Flag]) -> Vec<usize> {
    let n = shape.total();
    let factors = transposed_factors(flags);
    let mut perm = vec![0; n * n];
    for c in 0..n {
        for r in 0..n {
            let (r2, c2) = shape.swap_factors(r, c, &factors);
            perm[c * n + r] = c2 * n + r2;
        }
    }
    perm
}

/// A linear map on `M_N` in column-stacked coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator<T: Real> {
    shape: TensorShape,
    matrix: Matrix<T>,
}

impl<T: Real> SuperOperator<T> {
    pub fn new(shape: TensorShape, matrix: Matrix<T>) -> Result<Self> {
        let n2 = shape.total() * shape.total();
        if matrix.shape() != (n2, n2) {
            return Err(dim(
                "SuperOperator::new",
                format!(
                    "shape {shape} needs a {n2}x{n2} matrix, got {}x{}",
                    matrix.rows(),
                    matrix.cols()
                ),
            ));
        }
        Ok(SuperOperator { shape, matrix })
    }

    pub fn identity(shape: TensorShape) -> Self {
        let n2 = shape.total() * shape.total();
        SuperOperator {
            shape,
            matrix: Matrix::identity(n2),
        }
    }

    /// Tabulates a linear map by its action on the matrix units.
    pub fn from_map(shape: TensorShape, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Result<Self> {
        let n = shape.total();
        let mut matrix = Matrix::zeros(n * n, n * n);
        for c in 0..n {
            for r in 0..n {
                let image = f(&Matrix::unit(n, n, r, c));
                if image.shape() != (n, n) {
                    return Err(dim("SuperOperator::from_map", "image has wrong size"));
                }
                matrix.set_column(c * n + r, image.vec().data());
            }
        }
        Ok(SuperOperator { shape, matrix })
    }

    /// Transposition of the flagged factors, `X -> (phi_1 kron ... kron phi_m)(X)`.
    pub fn partial_transpose(shape: TensorShape, flags: &[Flag]) -> Result<Self> {
        check_flags(&shape, flags)?;
        let perm = flag_permutation(&shape, flags);
        let n2 = perm.len();
        let mut matrix = Matrix::zeros(n2, n2);
        for (a, &b) in perm.iter().enumerate() {
            matrix[(a, b)] = re(T::one());
        }
        Ok(SuperOperator { shape, matrix })
    }

    pub fn shape(&self) -> &TensorShape {
        &self.shape
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.shape.total()
    }

    /// `unvec(S vec(X))`.
    pub fn apply(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.dim();
        if x.shape() != (n, n) {
            return Err(dim(
                "apply",
                format!("map on M_{n} applied to {}x{}", x.rows(), x.cols()),
            ));
        }
        Matrix::unvec(&(&self.matrix * &x.vec()), n, n)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape {
            return Err(dim("compose", format!("{} vs {}", self.shape, other.shape)));
        }
        Ok(SuperOperator {
            shape: self.shape.clone(),
            matrix: self.matrix.try_matmul(&other.matrix)?,
        })
    }
}

fn check_flags(shape: &TensorShape, flags: &[Flag]) -> Result<()> {
    if flags.len() != shape.len() {
        return Err(dim(
            "flags",
            format!("{} flags for {} factors", flags.len(), shape.len()),
        ));
    }
    Ok(())
}

/// `X -> U (phi_1 kron ... kron phi_m)(X) V`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardForm<T: Real> {
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub flags: Vec<Flag>,
}

impl<T: Real> StandardForm<T> {
    /// Checks that `u`, `v` are unitary of equal size.
    pub fn new(u: Matrix<T>, v: Matrix<T>, flags: Vec<Flag>) -> Result<Self> {
        if !u.is_square() || u.shape() != v.shape() {
            return Err(dim("StandardForm::new", "U and V must be square of equal size"));
        }
        let cut = T::tol(tol::UNITARY);
        for (name, w) in [("U", &u), ("V", &v)] {
            let r = w.unitarity_residual();
            if r > cut {
                return Err(Error::Precondition(format!(
                    "{name} is not unitary (residual {:e})",
                    r.as_f64()
                )));
            }
        }
        Ok(StandardForm { u, v, flags })
    }

    /// Haar-random `U`, `V` and uniformly random flags.
    pub fn random(shape: &TensorShape, seed: u64) -> Self {
        let mut g = rng(seed);
        let n = shape.total();
        let u = unitary_with(n, &mut g);
        let v = unitary_with(n, &mut g);
        let flags = (0..shape.len())
            .map(|_| if g.random::<bool>() { Flag::Transpose } else { Flag::Identity })
            .collect();
        StandardForm { u, v, flags }
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }
}

/// Superoperator `(V^T kron U) P_F` of a standard form.
pub fn build_standard_form<T: Real>(form: &StandardForm<T>, shape: &TensorShape) -> Result<SuperOperator<T>> {
    check_flags(shape, &form.flags)?;
    if form.dim() != shape.total() {
        return Err(dim(
            "build_standard_form",
            format!("unitaries of size {} on shape {shape}", form.dim()),
        ));
    }
    let kron = form.v.transpose().kron(&form.u);
    let perm = flag_permutation(shape, &form.flags);
    SuperOperator::new(shape.clone(), kron.permute_columns(&perm))
}

/// Result of [`verify_on_products`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport<T: Real> {
    /// `max |norm(phi(X)) - norm(X)|` over every tested product `X`.
    pub max_deviation: T,
    /// `max(1, max norm(X))`.
    pub scale: T,
    pub pass: bool,
    /// Number of product matrices tested (random plus structured).
    pub tested: usize,
}

/// The structured product family: every product of matrix units
/// `E_{a_1 b_1} kron ... kron E_{a_m b_m}`, and every product of two-term
/// diagonal sums `(E_{aa} + E_{bb})` with `a < b` per factor.
pub fn structured_products<T: Real>(shape: &TensorShape) -> Vec<Matrix<T>> {
    let n = shape.total();
    let mut out: Vec<Matrix<T>> = Vec::new();
    for c in 0..n {
        for r in 0..n {
            out.push(Matrix::unit(n, n, r, c));
        }
    }
    let pair_lists: Vec<Vec<Matrix<T>>> = shape
        .dims()
        .iter()
        .map(|&d| {
            let mut v = Vec::new();
            for a in 0..d {
                for b in a + 1..d {
                    v.push(&Matrix::unit(d, d, a, a) + &Matrix::unit(d, d, b, b));
                }
            }
            v
        })
        .collect();
    let mut partial: Vec<Matrix<T>> = vec![Matrix::identity(1)];
    for list in &pair_lists {
        partial = partial
            .iter()
            .flat_map(|p| list.iter().map(move |f| p.kron(f)))
            .collect();
    }
    out.extend(partial);
    out
}

/// Checks `norm(phi(X)) = norm(X)` on `trials` seeded random products of
/// complex Gaussian factors plus the [`structured_products`] family.
/// Passes when the largest deviation is at most `1e-6 * scale`.
pub fn verify_on_products<T: Real>(
    phi: &SuperOperator<T>,
    spec: NormSpec,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport<T>> {
    let n = phi.dim();
    spec.validate(n, n)?;
    let mut g = rng(seed);
    let mut inputs: Vec<Matrix<T>> = (0..trials)
        .map(|_| random_product_matrix(phi.shape(), g.random::<u64>()))
        .collect();
    inputs.extend(structured_products(phi.shape()));

    let mut max_deviation = T::zero();
    let mut scale = T::one();
    for x in &inputs {
        let before = norm(x, spec)?;
        let after = norm(&phi.apply(x)?, spec)?;
        max_deviation = max_deviation.max((after - before).abs());
        scale = scale.max(before);
    }
    Ok(VerifyReport {
        pass: max_deviation <= T::tol(tol::VERIFY) * scale,
        max_deviation,
        scale,
        tested: inputs.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    StandardFormFound,
    NotStandardForm,
}

/// Result of [`recover`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport<T: Real> {
    pub form: Option<StandardForm<T>>,
    /// `||S - (V^T kron U) P_F||_F` for the accepted form, otherwise the
    /// smallest distance from any `S P_F` to a Kronecker product.
    pub residual: T,
    pub flags_tested: usize,
    pub verdict: Verdict,
}

/// An accepted flag assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T: Real> {
    pub form: StandardForm<T>,
    pub residual: T,
}

/// Default recovery tolerance `1e-6 * N`.
pub fn default_recover_tol<T: Real>(shape: &TensorShape) -> T {
    T::tol(tol::RECOVER_PER_DIM) * T::from_usize_lossy(shape.total())
}

/// Largest number of tensor factors accepted by [`recover`].
pub const MAX_FACTORS: usize = 8;

/// Leading singular triple `(sigma, x, y)` with `R y = sigma x`, by power
/// iteration on `R^* R` started from the largest column.
fn leading_triple<T: Real>(r: &Matrix<T>) -> (T, Vec<Cx<T>>, Vec<Cx<T>>) {
    let (rows, cols) = r.shape();
    let zero = re(T::zero());
    let best_col = (0..cols)
        .map(|j| (j, (0..rows).map(|i| r[(i, j)].norm_sqr()).sum::<T>()))
        .fold((0, T::zero()), |acc, (j, s)| if s > acc.1 { (j, s) } else { acc });
    if best_col.1 == T::zero() {
        return (T::zero(), vec![zero; rows], vec![zero; cols]);
    }
    let mut x = r.column(best_col.0);
    normalize(&mut x);
    let mut y = vec![zero; cols];
    let mut sigma = T::zero();
    for _ in 0..500 {
        // y = R^* x
        for (j, yj) in y.iter_mut().enumerate() {
            *yj = (0..rows).map(|i| r[(i, j)].conj() * x[i]).sum();
        }
        normalize(&mut y);
        // x = R y
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (0..cols).map(|j| r[(i, j)] * y[j]).sum();
        }
        let next = normalize(&mut x);
        let done = (next - sigma).abs() <= T::epsilon() * T::lit(4.0) * next;
        sigma = next;
        if done {
            break;
        }
    }
    (sigma, x, y)
}

fn normalize<T: Real>(v: &mut [Cx<T>]) -> T {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if n > T::zero() {
        let inv = T::one() / n;
        v.iter_mut().for_each(|z| *z *= inv);
    }
    n
}

/// Every flag assignment that reproduces `phi` as a standard form within
/// `tol_recover`, with the smallest Kronecker distance seen.
pub fn recover_candidates<T: Real>(phi: &SuperOperator<T>, tol_recover: T) -> Result<(Vec<Candidate<T>>, T, usize)> {
    let shape = phi.shape();
    let m = shape.len();
    if m > MAX_FACTORS {
        return Err(Error::Precondition(format!(
            "{m} factors exceeds the enumeration cap of {MAX_FACTORS}"
        )));
    }
    let n = shape.total();
    let root_n = T::from_usize_lossy(n).sqrt();
    let unitary_cut = T::tol(tol::UNITARY);
    let mut accepted = Vec::new();
    let mut best = T::infinity();
    let masks = 1usize << m;
    for mask in 0..masks {
        let flags = flags_from_mask(mask, m);
        let perm = flag_permutation(shape, &flags);
        let mf = phi.matrix().permute_columns(&perm);
        let r = mf.rearrange((n, n), (n, n))?;
        let (sigma, x, y) = leading_triple(&r);

        // distance from mf to the nearest Kronecker product
        let mut tail = T::zero();
        for i in 0..r.rows() {
            for j in 0..r.cols() {
                tail += (r[(i, j)] - x[i] * y[j].conj() * sigma).norm_sqr();
            }
        }
        let tail = tail.sqrt();
        best = best.min(tail);
        if tail > tol_recover || sigma == T::zero() {
            continue;
        }

        let vt_vec: Vec<Cx<T>> = x.iter().map(|&z| z * root_n).collect();
        let u_vec: Vec<Cx<T>> = y.iter().map(|&z| z.conj() * root_n).collect();
        let mut vt = Matrix::unvec(&Matrix::column_vector(&vt_vec), n, n)?;
        let mut u = Matrix::unvec(&Matrix::column_vector(&u_vec), n, n)?;

        let pivot = u
            .data()
            .iter()
            .copied()
            .fold(re(T::zero()), |acc, z| if z.norm() > acc.norm() { z } else { acc });
        let phase = pivot / pivot.norm();
        u = u.scale(phase.conj());
        vt = vt.scale(phase);
        let v = vt.transpose();

        if u.unitarity_residual() > unitary_cut || v.unitarity_residual() > unitary_cut {
            continue;
        }
        let form = StandardForm { u, v, flags };
        let rebuilt = build_standard_form(&form, shape)?;
        let residual = (phi.matrix() - rebuilt.matrix()).frobenius_norm();
        if residual <= tol_recover {
            accepted.push(Candidate { form, residual });
        }
    }
    Ok((accepted, best, masks))
}

/// Decides whether `phi` has the standard form and, if so, recovers it.
///
/// Fails with [`Error::AmbiguousRecovery`] when more than one flag assignment
/// is accepted.
pub fn recover<T: Real>(phi: &SuperOperator<T>, tol_recover: T) -> Result<RecoveryReport<T>> {
    let (mut accepted, best, flags_tested) = recover_candidates(phi, tol_recover)?;
    match accepted.len() {
        0 => Ok(RecoveryReport {
            form: None,
            residual: best,
            flags_tested,
            verdict: Verdict::NotStandardForm,
        }),
        1 => {
            let c = accepted.pop().expect("one candidate");
            Ok(RecoveryReport {
                form: Some(c.form),
                residual: c.residual,
                flags_tested,
                verdict: Verdict::StandardFormFound,
            })
        }
        _ => Err(Error::AmbiguousRecovery {
            flag_sets: accepted.into_iter().map(|c| c.form.flags).collect(),
        }),
    }
}

/// Images of the diagonal matrix-unit products with their diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitProbe<T: Real> {
    /// `(j_1, ..., j_m)` and `phi(E_{j_1 j_1} kron ... kron E_{j_m j_m})`, in
    /// lexicographic order.
    pub images: Vec<(Vec<usize>, Matrix<T>)>,
    pub spectral_norms: Vec<T>,
    /// Largest pairwise orthogonality residual between distinct images.
    pub max_orthogonality_residual: T,
    pub pairwise_orthogonal: bool,
    /// Every image has spectral norm 1 within `1e-8`.
    pub unit_norms: bool,
}

/// Evaluates `phi` on every product of diagonal matrix units.
///
/// A standard-form map sends these to `U E_JJ V`: pairwise orthogonal with
/// unit spectral norm. The converse fails (any Frobenius isometry fixing the
/// diagonal units passes), so this is a diagnostic, not a recovery.
pub fn matrix_unit_probe<T: Real>(phi: &SuperOperator<T>) -> Result<UnitProbe<T>> {
    let shape = phi.shape();
    let n = shape.total();
    let mut images = Vec::with_capacity(n);
    let mut spectral_norms = Vec::with_capacity(n);
    for digits in shape.multi_indices() {
        let flat = shape.flat(&digits);
        let img = phi.apply(&Matrix::unit(n, n, flat, flat))?;
        spectral_norms.push(singular_values(&img)?[0]);
        images.push((digits, img));
    }
    let mut max_res = T::zero();
    let mut all = true;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let r = is_orthogonal(&images[i].1, &images[j].1)?;
            max_res = max_res.max(r.residual);
            all &= r.orthogonal;
        }
    }
    let cut = T::tol(tol::NORM_IDENTITY);
    let unit_norms = spectral_norms.iter().all(|&s| (s - T::one()).abs() <= cut);
    Ok(UnitProbe {
        images,
        spectral_norms,
        max_orthogonality_residual: max_res,
        pairwise_orthogonal: all,
        unit_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<f64>;

    fn shape(d: &[usize]) -> TensorShape {
        TensorShape::new(d.to_vec()).unwrap()
    }

    #[test]
    fn identity_superoperator_applies_as_identity() {
        let phi = SuperOperator::<f64>::identity(shape(&[2, 2]));
        let x = crate::random::gaussian_matrix(4, 4, 5);
        assert_eq!(phi.apply(&x).unwrap(), x);
        assert!(phi.apply(&M::zeros(3, 3)).is_err());
    }

    #[test]
    fn superoperator_rejects_wrong_size() {
        assert!(SuperOperator::new(shape(&[2, 2]), M::identity(15)).is_err());
    }

    #[test]
    fn build_with_identities_is_identity() {
        let s = shape(&[2, 3]);
        let form = StandardForm::new(M::identity(6), M::identity(6), vec![Flag::Identity; 2]).unwrap();
        assert_eq!(build_standard_form(&form, &s).unwrap().matrix(), &M::identity(36));
    }

    #[test]
    fn build_then_apply_is_uxv() {
        let s = shape(&[2, 2]);
        let mut form = StandardForm::<f64>::random(&s, 3);
        form.flags = vec![Flag::Identity, Flag::Identity];
        let phi = build_standard_form(&form, &s).unwrap();
        let x = crate::random::gaussian_matrix(4, 4, 8);
        let direct = &(&form.u * &x) * &form.v;
        assert!((&phi.apply(&x).unwrap() - &direct).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn transpose_flag_on_second_factor() {
        let s = shape(&[2, 2]);
        let phi = SuperOperator::<f64>::partial_transpose(s, &[Flag::Identity, Flag::Transpose]).unwrap();
        let e12 = M::unit(2, 2, 0, 1);
        let e21 = M::unit(2, 2, 1, 0);
        assert_eq!(phi.apply(&e12.kron(&e12)).unwrap(), e12.kron(&e21));
    }

    #[test]
    fn from_map_matches_direct_construction() {
        let s = shape(&[2, 3]);
        let flags = [Flag::Transpose, Flag::Identity];
        let direct = SuperOperator::<f64>::partial_transpose(s.clone(), &flags).unwrap();
        let tabulated = SuperOperator::from_map(s.clone(), |x| x.partial_transpose(&s, 0).unwrap()).unwrap();
        assert_eq!(direct, tabulated);
    }

    #[test]
    fn recover_identity() {
        let s = shape(&[2, 2]);
        let report = recover(&SuperOperator::<f64>::identity(s.clone()), default_recover_tol(&s)).unwrap();
        assert_eq!(report.verdict, Verdict::StandardFormFound);
        assert_eq!(report.flags_tested, 4);
        let form = report.form.unwrap();
        assert_eq!(form.flags, vec![Flag::Identity, Flag::Identity]);
        assert!(report.residual <= 1e-10);
        assert!((&form.u - &M::identity(4)).frobenius_norm() <= 1e-10);
        assert!((&form.v - &M::identity(4)).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn recover_round_trip_2x3() {
        let s = shape(&[2, 3]);
        for seed in 0..8 {
            let form = StandardForm::<f64>::random(&s, seed);
            let phi = build_standard_form(&form, &s).unwrap();
            let report = recover(&phi, default_recover_tol(&s)).unwrap();
            let got = report.form.expect("found");
            assert_eq!(got.flags, form.flags);
            let rebuilt = build_standard_form(&got, &s).unwrap();
            assert!((phi.matrix() - rebuilt.matrix()).frobenius_norm() <= 1e-8);
        }
    }

    #[test]
    fn scaled_isometry_is_rejected() {
        let s = shape(&[2, 2]);
        let form = StandardForm::<f64>::random(&s, 2);
        let phi = build_standard_form(&form, &s).unwrap();
        let scaled = SuperOperator::new(s.clone(), phi.matrix().scale_re(1.5)).unwrap();
        let report = recover(&scaled, default_recover_tol(&s)).unwrap();
        assert_eq!(report.verdict, Verdict::NotStandardForm);
    }

    #[test]
    fn too_many_factors() {
        let s = shape(&[2; 9]);
        // never materialized: the cap is checked first
        let phi = SuperOperator::<f64> {
            shape: s,
            matrix: M::zeros(1, 1),
        };
        assert!(matches!(recover(&phi, 1e-6), Err(Error::Precondition(_))));
    }

    #[test]
    fn probe_of_identity() {
        let s = shape(&[2, 2]);
        let p = matrix_unit_probe(&SuperOperator::<f64>::identity(s)).unwrap();
        assert_eq!(p.images.len(), 4);
        for (digits, img) in &p.images {
            let k = digits[0] * 2 + digits[1];
            assert_eq!(img, &M::unit(4, 4, k, k));
        }
        assert!(p.pairwise_orthogonal && p.unit_norms);
    }

    #[test]
    fn structured_family_size() {
        let fam = structured_products::<f64>(&shape(&[3, 3]));
        // 81 matrix units and 3 * 3 products of diagonal pairs
        assert_eq!(fam.len(), 81 + 9);
    }
}
