use std::fmt;

use crate::error::{Error, Result};

/// Factor dimensions `(n_1, ..., n_m)` of a tensor space `M_{n_1} kron ... kron M_{n_m}`.
///
/// Flat indices follow the Kronecker convention: the first factor is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorShape {
    dims: Vec<usize>,
    total: usize,
}

impl TensorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("no factors".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidShape(format!("factor dimension {d} < 2")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidShape("dimension overflow".into()))?;
        Ok(TensorShape { dims, total })
    }

    pub fn bipartite(m: usize, n: usize) -> Result<Self> {
        Self::new(vec![m, n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of factors `m`.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// `N = n_1 * ... * n_m`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Splits a flat index into per-factor digits.
    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    pub fn flat(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Exchanges the row and column digits of the listed factors.
    pub(crate) fn swap_factors(&self, row: usize, col: usize, factors: &[usize]) -> (usize, usize) {
        if factors.is_empty() {
            return (row, col);
        }
        let mut r = self.digits(row);
        let mut c = self.digits(col);
        for &f in factors {
            std::mem::swap(&mut r[f], &mut c[f]);
        }
        (self.flat(&r), self.flat(&c))
    }

    /// Every multi-index in lexicographic order.
    pub fn multi_indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.total).map(|k| self.digits(k))
    }
}

impl fmt::Display for TensorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_is_product() {
        let s = TensorShape::new(vec![2, 3, 2]).unwrap();
        assert_eq!(s.total(), 12);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn rejects_degenerate_factors() {
        assert!(TensorShape::new(vec![]).is_err());
        assert!(TensorShape::new(vec![2, 1]).is_err());
    }

    #[test]
    fn digits_round_trip() {
        let s = TensorShape::new(vec![2, 3, 4]).unwrap();
        for k in 0..s.total() {
            assert_eq!(s.flat(&s.digits(k)), k);
        }
        assert_eq!(s.digits(23), vec![1, 2, 3]);
    }
}
