//! Ky Fan k-norms, Schatten p-norms and their special cases.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Cx, Real};
use crate::svd::{singular_values, svd};

/// Which unitarily invariant norm to evaluate.
///
/// `Spectral` stands in for both `KyFan(1)` and Schatten `p = infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    KyFan(usize),
    Schatten(f64),
    Spectral,
    TraceNorm,
    Frobenius,
}

impl NormSpec {
    /// Checks the spec against a matrix of the given shape. Ky Fan `k` may go
    /// up to the larger side, summing zero-padded singular values.
    pub fn validate(&self, rows: usize, cols: usize) -> Result<()> {
        let ambient = rows.max(cols);
        match *self {
            NormSpec::KyFan(k) if k < 1 || k > ambient => Err(Error::InvalidNorm(format!(
                "Ky Fan k = {k} outside 1..={ambient}"
            ))),
            NormSpec::Schatten(p) if !p.is_finite() || p < 1.0 => Err(Error::InvalidNorm(
                format!("Schatten p = {p} must be finite and >= 1 (use Spectral for p = inf)"),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::KyFan(k) => write!(f, "ky-fan:{k}"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::Spectral => write!(f, "spectral"),
            NormSpec::TraceNorm => write!(f, "trace-norm"),
            NormSpec::Frobenius => write!(f, "frobenius"),
        }
    }
}

impl std::str::FromStr for NormSpec {
    type Err = Error;

    /// Parses `spectral`, `trace-norm`, `frobenius`, `ky-fan:K`, `schatten:P`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidNorm(format!("unrecognized norm '{s}'"));
        match s {
            "spectral" => Ok(NormSpec::Spectral),
            "trace-norm" | "trace" => Ok(NormSpec::TraceNorm),
            "frobenius" => Ok(NormSpec::Frobenius),
            _ => {
                let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
                match kind {
                    "ky-fan" => arg.parse().map(NormSpec::KyFan).map_err(|_| bad()),
                    "schatten" => arg.parse().map(NormSpec::Schatten).map_err(|_| bad()),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// Evaluates `spec` on `values`, already sorted non-increasing.
pub fn norm_from_singular_values<T: Real>(values: &[T], spec: NormSpec) -> T {
    match spec {
        NormSpec::KyFan(k) => values.iter().take(k).copied().sum(),
        NormSpec::Spectral => values.first().copied().unwrap_or_else(T::zero),
        NormSpec::TraceNorm => values.iter().copied().sum(),
        NormSpec::Frobenius => values.iter().map(|&s| s * s).sum::<T>().sqrt(),
        NormSpec::Schatten(p) => schatten(values, T::lit(p)),
    }
}

fn schatten<T: Real>(values: &[T], p: T) -> T {
    let top = values.first().copied().unwrap_or_else(T::zero);
    if top == T::zero() {
        return T::zero();
    }
    // scale by s_1 so large p cannot overflow
    let sum: T = values.iter().map(|&s| (s / top).powf(p)).sum();
    top * sum.powf(T::one() / p)
}

/// `||A||` for the given spec.
pub fn norm<T: Real>(a: &Matrix<T>, spec: NormSpec) -> Result<T> {
    spec.validate(a.rows(), a.cols())?;
    if spec == NormSpec::Frobenius {
        return Ok(a.frobenius_norm());
    }
    Ok(norm_from_singular_values(&singular_values(a)?, spec))
}

/// `||A||_p^p`, the quantity appearing in Clarkson–McCarthy inequalities.
pub fn schatten_pow<T: Real>(a: &Matrix<T>, p: T) -> Result<T> {
    let values = singular_values(a)?;
    Ok(values.iter().map(|&s| s.powf(p)).sum())
}

/// Leading singular vectors `(x, y)` with `x^* A y = s_1(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormAttaining<T: Real> {
    pub left: Vec<Cx<T>>,
    pub right: Vec<Cx<T>>,
    pub value: T,
}

pub fn norm_attaining_vectors<T: Real>(a: &Matrix<T>) -> Result<NormAttaining<T>> {
    let s = svd(a, true)?;
    let value = s.largest();
    if value <= T::epsilon() * a.max_abs() || value == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    let (u, v) = (s.left.expect("factors requested"), s.right.expect("factors requested"));
    Ok(NormAttaining {
        left: u.column(0),
        right: v.column(0),
        value,
    })
}

/// `x^* A y`.
pub fn bilinear<T: Real>(x: &[Cx<T>], a: &Matrix<T>, y: &[Cx<T>]) -> Cx<T> {
    let ay = a * &Matrix::column_vector(y);
    x.iter().zip(ay.data()).map(|(xi, yi)| xi.conj() * yi).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, random_unitary};

    type M = Matrix<f64>;

    #[test]
    fn ky_fan_on_diagonal() {
        let a = M::from_real_diag(&[3.0, 2.0, 1.0]);
        assert_eq!(norm(&a, NormSpec::KyFan(2)).unwrap(), 5.0);
    }

    #[test]
    fn schatten_three_of_2i() {
        let a = M::from_real_diag(&[2.0, 2.0]);
        let v = norm(&a, NormSpec::Schatten(3.0)).unwrap();
        assert!((v - 16f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((v - 2.5198421).abs() < 1e-7);
    }

    #[test]
    fn invalid_specs() {
        let a = M::identity(3);
        assert!(norm(&a, NormSpec::KyFan(0)).is_err());
        assert!(norm(&a, NormSpec::KyFan(4)).is_err());
        assert!(norm(&a, NormSpec::Schatten(0.5)).is_err());
        assert!(norm(&a, NormSpec::Schatten(f64::INFINITY)).is_err());
        assert!(norm(&a, NormSpec::KyFan(3)).is_ok());
    }

    #[test]
    fn ky_fan_pads_rectangular() {
        let a = M::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0]).unwrap();
        assert_eq!(norm(&a, NormSpec::KyFan(3)).unwrap(), 3.0);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["spectral", "trace-norm", "frobenius", "ky-fan:2", "schatten:1.5"] {
            let spec: NormSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("ky-fan:x".parse::<NormSpec>().is_err());
    }

    #[test]
    fn attaining_vectors_of_diag() {
        let r = norm_attaining_vectors(&M::from_real_diag(&[3.0, 1.0])).unwrap();
        assert_eq!(r.value, 3.0);
        assert!((r.left[0].norm() - 1.0).abs() < 1e-15 && r.left[1].norm() < 1e-15);
        assert!((r.right[0].norm() - 1.0).abs() < 1e-15 && r.right[1].norm() < 1e-15);
    }

    #[test]
    fn attaining_vectors_of_e12() {
        let r = norm_attaining_vectors(&M::unit(2, 2, 0, 1)).unwrap();
        assert!((r.left[0].norm() - 1.0).abs() < 1e-15);
        assert!((r.right[1].norm() - 1.0).abs() < 1e-15);
        assert!((bilinear(&r.left, &M::unit(2, 2, 0, 1), &r.right).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn attaining_vectors_of_random_product() {
        let u = random_unitary::<f64>(5, 1);
        let v = random_unitary::<f64>(5, 2);
        let a = &(&u * &M::from_real_diag(&[4.0, 2.0, 1.0, 0.5, 0.1])) * &v.adjoint();
        let r = norm_attaining_vectors(&a).unwrap();
        let val = bilinear(&r.left, &a, &r.right);
        assert!((val.re - 4.0).abs() <= 1e-10 && val.im.abs() <= 1e-10);
    }

    #[test]
    fn zero_matrix_has_no_attaining_vectors() {
        assert_eq!(norm_attaining_vectors(&M::zeros(2, 2)), Err(Error::ZeroMatrix));
    }

    #[test]
    fn consistency_between_families() {
        let a = gaussian_matrix::<f64>(5, 5, 77);
        let n = |s| norm(&a, s).unwrap();
        assert!((n(NormSpec::KyFan(1)) - n(NormSpec::Spectral)).abs() <= 1e-10);
        assert!((n(NormSpec::KyFan(5)) - n(NormSpec::TraceNorm)).abs() <= 1e-10);
        assert!((n(NormSpec::Schatten(1.0)) - n(NormSpec::TraceNorm)).abs() <= 1e-10);
        assert!((n(NormSpec::Schatten(2.0)) - n(NormSpec::Frobenius)).abs() <= 1e-10);
    }
}
