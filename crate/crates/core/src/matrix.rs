//! Square distance arrays on `n` ordered points and the sup-metric between
//! them.

use crate::error::{Error, Result};

/// An `n x n` array of finite binary64 distances, stored row-major.
///
/// Construction only checks structure (square shape, finite entries). The
/// pseudometric axioms (symmetry, zero diagonal, nonnegativity, triangle
/// inequality) are checked by [`crate::validate`], which reports each
/// failure instead of refusing the value.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Malformed(format!(
                "{} entries cannot fill a {n}x{n} matrix",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::Malformed(format!(
                "entry ({}, {}) is not finite",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    /// The discrete metric scaled by `scale`: every off-diagonal entry equals
    /// `scale`.
    pub fn discrete(n: usize, scale: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.entries[i * n + j] = scale;
                }
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Writes `value` at `(i, j)` and `(j, i)`.
    #[inline]
    pub(crate) fn set_pair(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.n + j] = value;
        self.entries[j * self.n + i] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest strictly positive off-diagonal entry, if any.
    pub fn min_positive_off_diagonal(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if i != j && v > 0.0 && best.is_none_or(|b| v < b) {
                    best = Some(v);
                }
            }
        }
        best
    }

    /// The submatrix on `indices`, in the order given.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::domain(format!(
                "index {bad} out of range for {} points",
                self.n
            )));
        }
        let k = indices.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in indices {
            for &j in indices {
                entries.push(self.get(i, j));
            }
        }
        Ok(Self { n: k, entries })
    }

    /// Entrywise maximum of two same-size matrices.
    pub fn pointwise_max(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_same_size(self, other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self { n: self.n, entries })
    }

    /// True when every entry of `self` is `<=` the matching entry of `other`.
    pub fn le_entrywise(&self, other: &Self) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }
}

fn check_same_size(a: &DistanceMatrix, b: &DistanceMatrix) -> Result<()> {
    if a.n != b.n {
        return Err(Error::Dimension {
            expected: a.n,
            actual: b.n,
        });
    }
    Ok(())
}

/// Sup-metric between two distance functions on the same point set: the
/// largest absolute entrywise difference.
pub fn sup_distance(a: &DistanceMatrix, b: &DistanceMatrix) -> Result<f64> {
    check_same_size(a, b)?;
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Absolute slack allowed in triangle-inequality checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps_abs: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-12;

    pub fn new(eps_abs: f64) -> Result<Self> {
        if !(eps_abs >= 0.0 && eps_abs.is_finite()) {
            return Err(Error::domain(format!(
                "tolerance must be finite and nonnegative, got {eps_abs}"
            )));
        }
        Ok(Self { eps_abs })
    }

    pub const fn exact() -> Self {
        Self { eps_abs: 0.0 }
    }

    #[inline]
    pub fn eps_abs(&self) -> f64 {
        self.eps_abs
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_abs: Self::DEFAULT_EPS,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matches!(
            DistanceMatrix::new(2, vec![0.0; 3]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            DistanceMatrix::new(2, vec![0.0, f64::NAN, 1.0, 0.0]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            DistanceMatrix::from_rows(&[vec![0.0, f64::INFINITY], vec![1.0, 0.0]]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            DistanceMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0]]),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn empty_and_singleton_are_fine() {
        assert_eq!(DistanceMatrix::zeros(0).n(), 0);
        assert_eq!(DistanceMatrix::new(1, vec![0.0]).unwrap().n(), 1);
        assert_eq!(DistanceMatrix::zeros(0).rows().count(), 0);
    }

    #[test]
    fn sup_distance_examples() {
        let d = DistanceMatrix::discrete(3, 1.0);
        assert_eq!(sup_distance(&d, &d).unwrap(), 0.0);
        assert_eq!(sup_distance(&DistanceMatrix::zeros(3), &d).unwrap(), 1.0);
    }

    #[test]
    fn sup_distance_size_mismatch() {
        let err = sup_distance(&DistanceMatrix::zeros(2), &DistanceMatrix::zeros(3)).unwrap_err();
        assert_eq!(
            err,
            Error::Dimension {
                expected: 2,
                actual: 3
            }
        );
    }

    #[test]
    fn restrict_keeps_order() {
        let m = DistanceMatrix::from_rows(&[
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 3.0],
            vec![2.0, 3.0, 0.0],
        ])
        .unwrap();
        let r = m.restrict(&[2, 0]).unwrap();
        assert_eq!(r.as_slice(), &[0.0, 2.0, 2.0, 0.0]);
        assert!(m.restrict(&[3]).is_err());
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
        assert_eq!(Tolerance::default().eps_abs(), 1e-12);
    }

    #[test]
    fn min_positive_skips_zeros() {
        let m = DistanceMatrix::from_rows(&[
            vec![0.0, 0.0, 2.0],
            vec![0.0, 0.0, 0.5],
            vec![2.0, 0.5, 0.0],
        ])
        .unwrap();
        assert_eq!(m.min_positive_off_diagonal(), Some(0.5));
        assert_eq!(DistanceMatrix::zeros(3).min_positive_off_diagonal(), None);
    }
}
