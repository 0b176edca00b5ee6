//! Fraction-free exact linear algebra over the coefficient ring.
//!
//! Rank is computed by Bareiss elimination: the two-step determinant
//! identity keeps every intermediate entry inside the Laurent ring, and the
//! divisions it performs are exact by construction.  Kernels of the
//! coinvariance and equalizer computations are handled through ranks alone.

use alloc::vec::Vec;
use alloc::{format, vec};

use crate::coeff::Scalar;
use crate::{Error, Result};

/// Dense matrix of scalars, row major.
#[derive(Clone, Debug)]
pub struct ScalarMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ScalarMat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let cur = &self.data[r * self.cols + c];
        self.data[r * self.cols + c] = cur + v;
    }

    /// Stack `other` below `self` (column counts must agree).
    pub fn vstack(&self, other: &ScalarMat) -> ScalarMat {
        assert_eq!(self.cols, other.cols);
        let mut out = ScalarMat::zero(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].clone_from_slice(&self.data);
        out.data[self.data.len()..].clone_from_slice(&other.data);
        out
    }

    /// Rank over the fraction field, by fraction-free Bareiss elimination
    /// with full pivoting.
    pub fn rank(&self) -> Result<usize> {
        let mut m = self.clone();
        let mut rank = 0usize;
        let mut prev = Scalar::one();
        let mut row = 0usize;
        let mut live_cols: Vec<usize> = (0..m.cols).collect();
        while row < m.rows && !live_cols.is_empty() {
            // find a pivot among the remaining rows/cols
            let mut pivot: Option<(usize, usize)> = None;
            'search: for r in row..m.rows {
                for (ci, &c) in live_cols.iter().enumerate() {
                    if !m.get(r, c).is_zero() {
                        pivot = Some((r, ci));
                        break 'search;
                    }
                }
            }
            let Some((pr, pci)) = pivot else { break };
            let pc = live_cols[pci];
            if pr != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let piv = m.get(row, pc).clone();
            for r in (row + 1)..m.rows {
                let factor = m.get(r, pc).clone();
                for &c in live_cols.iter() {
                    if c == pc {
                        continue;
                    }
                    let num = &(&piv * m.get(r, c)) - &(&factor * m.get(row, c));
                    let val = num.divide_exact(&prev).ok_or_else(|| {
                        Error::CompletionFailure(format!(
                            "inexact Bareiss division by {prev}"
                        ))
                    })?;
                    m.set(r, c, val);
                }
                m.set(r, pc, Scalar::zero());
            }
            prev = piv;
            live_cols.remove(pci);
            row += 1;
            rank += 1;
        }
        Ok(rank)
    }
}
