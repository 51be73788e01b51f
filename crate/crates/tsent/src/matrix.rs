//! Dense binary matrices, shared by the relation matrix `K` and the
//! transition matrices `A_i`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square: {rows} rows but row {row} has {cols} columns")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("entry ({row},{col}) is {value}, expected 0 or 1")]
    NonBinaryEntry { row: usize, col: usize, value: u8 },
    #[error("matrix has no rows")]
    Empty,
}

/// A square 0/1 matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct BinaryMatrix {
    dim: usize,
    bits: Vec<u8>,
}

impl BinaryMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let mut bits = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(MatrixError::NonSquare {
                    rows: dim,
                    row: i,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(MatrixError::NonBinaryEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                bits.push(v);
            }
        }
        Ok(Self { dim, bits })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                bits.push(f(i, j) as u8);
            }
        }
        Self { dim, bits }
    }

    pub fn all_ones(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| true)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.dim + j] == 1
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.bits[i * self.dim..(i + 1) * self.dim]
            .iter()
            .map(|&b| b as usize)
            .sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    /// Boolean matrix product (AND/OR semiring).
    pub fn bool_mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).any(|l| self.get(i, l) && other.get(l, j))
        })
    }

    pub fn is_positive(&self) -> bool {
        self.bits.iter().all(|&b| b == 1)
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.dim)
            .map(|i| self.bits[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }
}

impl TryFrom<Vec<Vec<u8>>> for BinaryMatrix {
    type Error = MatrixError;

    fn try_from(rows: Vec<Vec<u8>>) -> Result<Self, Self::Error> {
        Self::from_rows(&rows)
    }
}

impl From<BinaryMatrix> for Vec<Vec<u8>> {
    fn from(m: BinaryMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix{:?}", self.rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square() {
        let err = BinaryMatrix::from_rows(&[vec![1, 0], vec![1]]).unwrap_err();
        assert!(matches!(err, MatrixError::NonSquare { row: 1, cols: 1, .. }));
    }

    #[test]
    fn rejects_non_binary() {
        let err = BinaryMatrix::from_rows(&[vec![1, 2], vec![0, 1]]).unwrap_err();
        assert!(matches!(
            err,
            MatrixError::NonBinaryEntry {
                row: 0,
                col: 1,
                value: 2
            }
        ));
    }

    #[test]
    fn bool_mul_matches_reachability() {
        let m = BinaryMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
        let sq = m.bool_mul(&m);
        assert!(sq.is_positive());
    }
}
