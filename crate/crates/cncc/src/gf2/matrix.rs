//! Dense GF(2) matrices packed one row per machine word.
//!
//! Sized for the realization and termination solves in this crate: at most
//! 64 columns, any row count. Vectors are `u64` bitmasks (bit `j` =
//! component `j`).

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if cols > 64 {
            return Err(Error::TooLarge(format!("{cols} columns exceed word width")));
        }
        Ok(BitMatrix { rows, cols, data: vec![0; rows] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i] = 1 << i;
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Result<Self> {
        if cols > 64 {
            return Err(Error::TooLarge(format!("{cols} columns exceed word width")));
        }
        let mask = mask(cols);
        debug_assert!(rows.iter().all(|&r| r & !mask == 0));
        Ok(BitMatrix { rows: rows.len(), cols, data: rows })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    /// Matrix-vector product; `v` is a bitmask over columns, the result a
    /// bitmask over rows.
    pub fn mul_vec(&self, v: u64) -> u64 {
        let mut out = 0u64;
        for (i, &row) in self.data.iter().enumerate() {
            out |= parity(row & v) << i;
        }
        out
    }

    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "matrix product {}x{} . {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            let mut acc = 0u64;
            let mut row = self.data[i];
            while row != 0 {
                let k = row.trailing_zeros() as usize;
                acc ^= rhs.data[k];
                row &= row - 1;
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    /// Square-matrix power by repeated multiplication.
    pub fn pow(&self, mut k: usize) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::Shape("matrix power of a non-square matrix".into()));
        }
        let mut acc = BitMatrix::identity(self.rows)?;
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn select_rows(&self, indices: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: indices.len(),
            cols: self.cols,
            data: indices.iter().map(|&i| self.data[i]).collect(),
        }
    }

    pub fn select_cols(&self, indices: &[usize]) -> Result<BitMatrix> {
        let mut out = BitMatrix::zeros(self.rows, indices.len())?;
        for i in 0..self.rows {
            let mut v = 0u64;
            for (k, &j) in indices.iter().enumerate() {
                v |= ((self.data[i] >> j) & 1) << k;
            }
            out.data[i] = v;
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::Shape("hstack row mismatch".into()));
        }
        let cols = self.cols + rhs.cols;
        if cols > 64 {
            return Err(Error::TooLarge(format!("{cols} columns exceed word width")));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a | (b << self.cols))
            .collect();
        Ok(BitMatrix { rows: self.rows, cols, data })
    }

    /// Rank and the column indices of the pivots, by row reduction.
    pub fn rank_profile(&self) -> (usize, Vec<usize>) {
        let mut work = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(sel) = (r..work.len()).find(|&i| (work[i] >> c) & 1 == 1) else {
                continue;
            };
            work.swap(r, sel);
            let pivot_row = work[r];
            for (i, row) in work.iter_mut().enumerate() {
                if i != r && (*row >> c) & 1 == 1 {
                    *row ^= pivot_row;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (r, pivots)
    }

    /// Indices of a maximal set of linearly independent rows, scanning
    /// top-down (first independent set wins).
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut basis: Vec<u64> = Vec::new();
        let mut picked = Vec::new();
        for (i, &row) in self.data.iter().enumerate() {
            let mut cur = row;
            for &b in &basis {
                let hb = 63 - b.leading_zeros();
                if cur != 0 && 63 - cur.leading_zeros() == hb {
                    cur ^= b;
                }
            }
            // full reduction: repeat until stable
            let mut changed = true;
            while changed && cur != 0 {
                changed = false;
                for &b in &basis {
                    if cur != 0 && 63 - cur.leading_zeros() == 63 - b.leading_zeros() {
                        cur ^= b;
                        changed = true;
                    }
                }
            }
            if cur != 0 {
                basis.push(cur);
                picked.push(i);
            }
        }
        picked
    }

    /// Solves `self * X = rhs`, returning one solution with all free
    /// variables set to zero. Fails on an inconsistent system.
    pub fn solve(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::Shape("solve row mismatch".into()));
        }
        let aug = self.hstack(rhs)?;
        let mut work = aug.data;
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(sel) = (r..work.len()).find(|&i| (work[i] >> c) & 1 == 1) else {
                continue;
            };
            work.swap(r, sel);
            let pivot_row = work[r];
            for (i, row) in work.iter_mut().enumerate() {
                if i != r && (*row >> c) & 1 == 1 {
                    *row ^= pivot_row;
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        // consistency: no row of the form [0 | nonzero]
        let lhs_mask = mask(self.cols);
        for &row in &work[r..] {
            if row & !lhs_mask != 0 {
                return Err(Error::Shape("inconsistent linear system".into()));
            }
        }
        let mut x = BitMatrix::zeros(self.cols, rhs.cols)?;
        for &(row, col) in &pivots {
            x.data[col] = (work[row] & !lhs_mask) >> self.cols;
        }
        Ok(x)
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let inv = self.solve(&BitMatrix::identity(self.rows)?)?;
        // invertibility check: solve() succeeds for any consistent system,
        // so confirm the product.
        if self.mul(&inv)? != BitMatrix::identity(self.rows)? {
            return Err(Error::Shape("matrix is singular".into()));
        }
        Ok(inv)
    }
}

fn mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

fn parity(x: u64) -> u64 {
    (x.count_ones() & 1) as u64
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_product() {
        let a = BitMatrix::from_rows(vec![0b011, 0b110, 0b101, 0b111], 3).unwrap();
        let x = BitMatrix::from_rows(vec![0b01, 0b11, 0b10], 2).unwrap();
        let b = a.mul(&x).unwrap();
        let solved = a.solve(&b).unwrap();
        assert_eq!(a.mul(&solved).unwrap(), b);
    }

    #[test]
    fn rank_of_identity() {
        let id = BitMatrix::identity(5).unwrap();
        let (rank, pivots) = id.rank_profile();
        assert_eq!(rank, 5);
        assert_eq!(pivots, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn inverse_round_trips() {
        let a = BitMatrix::from_rows(vec![0b101, 0b011, 0b001], 3).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), BitMatrix::identity(3).unwrap());
        assert_eq!(inv.mul(&a).unwrap(), BitMatrix::identity(3).unwrap());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = BitMatrix::from_rows(vec![0b11, 0b11], 2).unwrap();
        assert!(a.inverse().is_err());
    }

    #[test]
    fn independent_rows_skips_dependent() {
        let a = BitMatrix::from_rows(vec![0b011, 0b011, 0b101], 3).unwrap();
        assert_eq!(a.independent_rows(), vec![0, 2]);
    }
}
