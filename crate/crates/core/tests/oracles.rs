mod common;

use common::*;
use tensorpres::eig::{hermitian_eig, psd_sqrt};
use tensorpres::gallery::{
    c_r_matrix, ccnr_check, maximally_entangled_state, random_product_matrix, swap_corner_map,
};
use tensorpres::norms::norm;
use tensorpres::ortho::{is_orthogonal, psd_hermitian_spectrum_check};
use tensorpres::preserver::{
    build_standard_form, default_recover_tol, matrix_unit_probe, recover, verify_on_products, Flag,
    SuperOperator, Verdict,
};
use tensorpres::svd::singular_values;
use tensorpres::{gaussian_matrix, ComplexMatrix as M, Form, NormSpec, TensorShape};

/// For 2x2, `s_1^2` and `s_2^2` solve `x^2 - ||A||_F^2 x + |det A|^2 = 0`.
#[test]
fn two_by_two_singular_values_match_closed_form() {
    for seed in 0..50 {
        let a = gaussian_matrix::<f64>(2, 2, seed);
        let f2 = a.frobenius_norm().powi(2);
        let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm_sqr();
        let disc = (f2 * f2 - 4.0 * det).max(0.0).sqrt();
        let expected = [((f2 + disc) / 2.0).sqrt(), ((f2 - disc) / 2.0).max(0.0).sqrt()];
        let got = singular_values(&a).unwrap();
        assert!(max_abs_diff(&got, &expected) <= 1e-10, "{got:?} vs {expected:?}");
    }
}

/// Trace norm through the Hermitian eigensolver: `tr (A^*A)^{1/2}`.
#[test]
fn trace_norm_matches_psd_square_root() {
    for seed in 0..20 {
        let a = gaussian_matrix::<f64>(5, 5, seed);
        let root = psd_sqrt(&(&a.adjoint() * &a)).unwrap();
        let via_eig = root.trace().re;
        assert!((norm(&a, NormSpec::TraceNorm).unwrap() - via_eig).abs() <= 1e-9);
    }
}

/// Squared singular values are the eigenvalues of `A^* A`.
#[test]
fn singular_values_square_to_gram_eigenvalues() {
    for seed in 0..20 {
        let a = gaussian_matrix::<f64>(6, 4, seed);
        let eig = hermitian_eig(&(&a.adjoint() * &a)).unwrap().values;
        let sq: Vec<f64> = singular_values(&a).unwrap().iter().map(|s| s * s).collect();
        assert!(max_abs_diff(&sq, &eig) <= 1e-9 * eig[0]);
    }
}

#[test]
fn nilpotent_products_have_zero_top_block() {
    for seed in 0..20 {
        let (a, b) = nilpotent_pair(3, 1 + (seed as usize % 2), seed);
        let check = psd_hermitian_spectrum_check(&a, &b).unwrap();
        let coeffs = char_poly_3x3(&(&a * &b));
        assert!(coeffs.iter().all(|z| z.norm() <= 1e-10), "{coeffs:?}");
        assert!(check.spectrum.iter().all(|x| x.abs() <= 1e-8));
        assert_eq!(check.top_block_zero, Some(true));
    }
}

#[test]
fn realignment_of_maximally_entangled_state_is_half_identity() {
    let rho = maximally_entangled_state::<f64>();
    let r = rho.rearrange((2, 2), (2, 2)).unwrap();
    assert_eq!(r, M::identity(4).scale_re(0.5));
    let report = ccnr_check(&rho, (2, 2)).unwrap();
    assert!((report.realignment_trace_norm - 2.0).abs() <= 1e-12);
    assert!(report.flagged_entangled);
}

/// For a product `A kron B`, the realignment trace norm is `||A||_F ||B||_F`.
#[test]
fn realignment_of_product_is_product_of_frobenius_norms() {
    for seed in 0..10 {
        let a = gaussian_matrix::<f64>(2, 2, seed);
        let b = gaussian_matrix::<f64>(3, 3, seed + 100);
        let r = a.kron(&b).rearrange((2, 2), (3, 3)).unwrap();
        let expected = a.frobenius_norm() * b.frobenius_norm();
        assert!((norm(&r, NormSpec::TraceNorm).unwrap() - expected).abs() <= 1e-10 * expected);
    }
}

/// Search over product inputs for a spectral-norm deviation of the swap map.
#[test]
fn swap_map_changes_spectral_norm_of_some_product() {
    let phi = swap_corner_map::<f64>(2, 2).unwrap();
    let shape = TensorShape::bipartite(2, 2).unwrap();
    let worst = (0..200)
        .map(|seed| {
            let x = random_product_matrix::<f64>(&shape, seed);
            let y = phi.apply(&x).unwrap();
            (norm(&y, NormSpec::Spectral).unwrap() - norm(&x, NormSpec::Spectral).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 0.1, "largest deviation {worst}");
}

#[test]
fn swap_map_fails_recovery_but_passes_unit_probe() {
    let phi = swap_corner_map::<f64>(2, 2).unwrap();
    let shape = phi.shape().clone();
    let report = recover(&phi, default_recover_tol(&shape)).unwrap();
    assert_eq!(report.verdict, Verdict::NotStandardForm);
    assert!(report.residual > 0.5);

    let probe = matrix_unit_probe(&phi).unwrap();
    assert!(probe.pairwise_orthogonal && probe.unit_norms);
}

/// Every flag assignment leaves a rearranged matrix of numerical rank >= 2
/// for the swap map.
#[test]
fn swap_map_is_far_from_every_kronecker_product() {
    let phi = swap_corner_map::<f64>(2, 2).unwrap();
    let shape = phi.shape().clone();
    for mask in 0..4 {
        let flags = tensorpres::preserver::flags_from_mask(mask, 2);
        let perm = tensorpres::preserver::flag_permutation(&shape, &flags);
        let r = phi.matrix().permute_columns(&perm).rearrange((4, 4), (4, 4)).unwrap();
        let s = singular_values(&r).unwrap();
        assert!(s[1] > 0.5, "flags {flags:?}: {s:?}");
    }
}

/// A partial transpose preserves every norm on products but not on `C_2`.
#[test]
fn partial_transpose_separates_products_from_all_matrices() {
    let shape = TensorShape::bipartite(2, 2).unwrap();
    let phi = SuperOperator::<f64>::partial_transpose(shape.clone(), &[Flag::Identity, Flag::Transpose]).unwrap();
    let c2 = c_r_matrix(2.0f64).unwrap();
    let image = phi.apply(&c2).unwrap();
    for spec in [
        NormSpec::Spectral,
        NormSpec::KyFan(2),
        NormSpec::TraceNorm,
        NormSpec::Schatten(1.0),
        NormSpec::Schatten(3.0),
    ] {
        assert!(verify_on_products(&phi, spec, 20, 1).unwrap().pass);
        let gap = (norm(&c2, spec).unwrap() - norm(&image, spec).unwrap()).abs();
        assert!(gap > 1e-3, "{spec}: {gap}");
    }
    let gap = (norm(&c2, NormSpec::Frobenius).unwrap() - norm(&image, NormSpec::Frobenius).unwrap()).abs();
    assert!(gap <= 1e-10);

    let report = recover(&phi, default_recover_tol(&shape)).unwrap();
    assert_eq!(report.form.unwrap().flags, vec![Flag::Identity, Flag::Transpose]);
}

/// `r = 0` is left out: `C_0 = E22 kron E22` is fixed by the partial transpose.
#[test]
fn c_r_norm_gaps_on_grid() {
    let shape = TensorShape::bipartite(2, 2).unwrap();
    for r in [0.5f64, 2.0, 5.0] {
        let c = c_r_matrix(r).unwrap();
        let pt = c.partial_transpose(&shape, 1).unwrap();
        for spec in [
            NormSpec::Spectral,
            NormSpec::KyFan(2),
            NormSpec::TraceNorm,
            NormSpec::Schatten(1.0),
            NormSpec::Schatten(3.0),
        ] {
            let gap = (norm(&c, spec).unwrap() - norm(&pt, spec).unwrap()).abs();
            assert!(gap > 1e-3, "r = {r}, {spec}: {gap}");
        }
        let f = (norm(&c, NormSpec::Frobenius).unwrap() - norm(&pt, NormSpec::Frobenius).unwrap()).abs();
        assert!(f <= 1e-10);
    }
}

/// Standard forms send diagonal matrix units to pairwise orthogonal images.
#[test]
fn standard_form_images_of_diagonal_units_are_orthogonal() {
    let shape = TensorShape::new(vec![2, 3]).unwrap();
    let form = Form::random(&shape, 11);
    let phi = build_standard_form(&form, &shape).unwrap();
    let probe = matrix_unit_probe(&phi).unwrap();
    assert!(probe.pairwise_orthogonal && probe.unit_norms);
    let (_, first) = &probe.images[0];
    let (_, last) = &probe.images[5];
    assert!(is_orthogonal(first, last).unwrap().orthogonal);
}
