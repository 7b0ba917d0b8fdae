//! Dense `K×n` real matrices: codewords, jam sequences, noise and outputs.

use std::ops::{Add, Sub};

use crate::error::{contract, Result};

/// A `K×n` matrix whose `i`-th column is the channel vector at time `i`.
///
/// Storage is row-major, so a band's time series is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    bands: usize,
    n: usize,
    entries: Vec<f64>,
}

impl BlockMatrix {
    pub fn zeros(bands: usize, n: usize) -> Self {
        Self {
            bands,
            n,
            entries: vec![0.0; bands * n],
        }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(bands: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        contract!(
            entries.len() == bands * n,
            "expected {}x{} = {} entries, got {}",
            bands,
            n,
            bands * n,
            entries.len()
        );
        contract!(
            entries.iter().all(|v| v.is_finite()),
            "matrix entries must be finite"
        );
        Ok(Self { bands, n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        contract!(
            rows.iter().all(|r| r.len() == n),
            "rows must have equal length"
        );
        Self::from_row_major(rows.len(), n, rows.concat())
    }

    /// Number of bands `K` (rows).
    pub fn bands(&self) -> usize {
        self.bands
    }

    /// Blocklength `n` (columns).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.bands, self.n)
    }

    #[inline]
    pub fn get(&self, band: usize, col: usize) -> f64 {
        self.entries[band * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, band: usize, col: usize, value: f64) {
        self.entries[band * self.n + col] = value;
    }

    pub fn row(&self, band: usize) -> &[f64] {
        &self.entries[band * self.n..(band + 1) * self.n]
    }

    pub fn row_mut(&mut self, band: usize) -> &mut [f64] {
        &mut self.entries[band * self.n..(band + 1) * self.n]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.bands).map(|b| self.get(b, col)).collect()
    }

    pub fn row_major(&self) -> &[f64] {
        &self.entries
    }

    /// Sum of squared entries, i.e. `Σ_i ‖column_i‖²`.
    pub fn power(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum()
    }

    /// Number of nonzero entries in column `col`.
    pub fn column_support(&self, col: usize) -> usize {
        (0..self.bands).filter(|&b| self.get(b, col) != 0.0).count()
    }

    pub fn scale(&mut self, factor: f64) {
        self.entries.iter_mut().for_each(|v| *v *= factor);
    }

    /// Squared Frobenius distance `‖self − other‖²`.
    pub fn distance_squared(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self + other)
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        contract!(
            self.shape() == other.shape(),
            "shape mismatch: {:?} vs {:?}",
            self.shape(),
            other.shape()
        );
        Ok(())
    }
}

impl Add for &BlockMatrix {
    type Output = BlockMatrix;

    /// Panics on shape mismatch; use [`BlockMatrix::try_add`] for a checked sum.
    fn add(self, rhs: &BlockMatrix) -> BlockMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        BlockMatrix {
            bands: self.bands,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &BlockMatrix {
    type Output = BlockMatrix;

    fn sub(self, rhs: &BlockMatrix) -> BlockMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        BlockMatrix {
            bands: self.bands,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_and_support() {
        let m = BlockMatrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, 3.0, 1.0]]).unwrap();
        assert_eq!(m.power(), 15.0);
        assert_eq!(m.column_support(0), 1);
        assert_eq!(m.column_support(2), 2);
        assert_eq!(m.column(1), vec![0.0, 3.0]);
    }

    #[test]
    fn rejects_ragged_and_nonfinite() {
        assert!(BlockMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(BlockMatrix::from_row_major(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(BlockMatrix::from_row_major(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn checked_arithmetic() {
        let a = BlockMatrix::zeros(2, 3);
        let b = BlockMatrix::zeros(3, 2);
        assert!(a.try_add(&b).is_err());
        assert!(a.distance_squared(&b).is_err());
    }
}
