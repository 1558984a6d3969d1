//! Dense bit-packed linear algebra over the two-element field.
//!
//! Rows are stored as 64-bit words; row operations are word-wise XOR.
//! Everything is exact and deterministic.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
}

/// A vector over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl std::fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F2Vec[{}; {:?}]", self.len, self.ones())
    }
}

/// A dense matrix over F2, stored row-major in 64-bit words.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    bits: Vec<u64>,
}

/// Result of `rref`: `r = u * m` with `u` invertible and `r` in reduced
/// row echelon form.
pub struct Rref {
    pub r: F2Matrix,
    pub u: F2Matrix,
    pub pivot_cols: Vec<usize>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64);
        Self {
            rows,
            cols,
            wpr,
            bits: vec![0; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from its columns. All columns must have length `rows`.
    pub fn from_cols(rows: usize, cols: &[F2Vec]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        (self.bits[i * self.wpr + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let w = &mut self.bits[i * self.wpr + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> F2Vec {
        F2Vec {
            len: self.cols,
            words: self.bits[i * self.wpr..(i + 1) * self.wpr].to_vec(),
        }
    }

    pub fn col(&self, j: usize) -> F2Vec {
        let mut v = F2Vec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.wpr, dst * self.wpr);
        for k in 0..self.wpr {
            let w = self.bits[s + k];
            self.bits[d + k] ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.bits.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    /// Entrywise sum.
    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(F2Error::DimensionMismatch(format!(
                "add {}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w ^= o;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != other.rows {
            return Err(F2Error::DimensionMismatch(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let base = i * self.wpr;
            for (wi, &w) in self.bits[base..base + self.wpr].iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let (s, d) = (k * other.wpr, i * out.wpr);
                    for t in 0..other.wpr {
                        out.bits[d + t] ^= other.bits[s + t];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &F2Vec) -> Result<F2Vec, F2Error> {
        if self.cols != v.len {
            return Err(F2Error::DimensionMismatch(format!(
                "mul {}x{} * vec {}",
                self.rows, self.cols, v.len
            )));
        }
        let mut out = F2Vec::zeros(self.rows);
        for k in v.ones() {
            out.xor_assign(&self.col(k));
        }
        Ok(out)
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Reduced row echelon form together with the basis change:
    /// `u * self = r`, `u` invertible.
    pub fn rref(&self) -> Rref {
        let mut r = self.clone();
        let mut u = F2Matrix::identity(self.rows);
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| r.get(i, c)) else {
                continue;
            };
            r.swap_rows(rank, p);
            u.swap_rows(rank, p);
            for i in 0..self.rows {
                if i != rank && r.get(i, c) {
                    r.xor_row_into(rank, i);
                    u.xor_row_into(rank, i);
                }
            }
            pivot_cols.push(c);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        Rref { r, u, pivot_cols }
    }

    pub fn rank(&self) -> usize {
        // Plain elimination without tracking the transform.
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for i in rank + 1..m.rows {
                if m.get(i, c) {
                    m.xor_row_into(rank, i);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Columns form a basis of the kernel; the result is `cols x nullity`.
    pub fn kernel_basis(&self) -> F2Matrix {
        let Rref { r, pivot_cols, .. } = self.rref();
        let pivot_of_col: std::collections::BTreeMap<usize, usize> = pivot_cols
            .iter()
            .enumerate()
            .map(|(row, &col)| (col, row))
            .collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_of_col.contains_key(c)).collect();
        let mut out = F2Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, true);
            for (&pc, &pr) in &pivot_of_col {
                if r.get(pr, f) {
                    out.set(pc, k, true);
                }
            }
        }
        out
    }

    /// Columns form a basis of the column space; the result is `rows x rank`.
    pub fn image_basis(&self) -> F2Matrix {
        let Rref { pivot_cols, .. } = self.rref();
        let cols: Vec<F2Vec> = pivot_cols.iter().map(|&c| self.col(c)).collect();
        F2Matrix::from_cols(self.rows, &cols)
    }

    pub fn inverse(&self) -> Result<F2Matrix, F2Error> {
        if self.rows != self.cols {
            return Err(F2Error::DimensionMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let Rref { r, u, pivot_cols } = self.rref();
        if pivot_cols.len() != self.rows {
            return Err(F2Error::Singular);
        }
        debug_assert!(r == F2Matrix::identity(self.rows));
        Ok(u)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Any solution `x` of `self * x = rhs`, or `None` if inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &F2Matrix) -> Option<F2Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let Rref { u, pivot_cols, .. } = self.rref();
        let c = u.mul(rhs).expect("shape");
        let rank = pivot_cols.len();
        for i in rank..self.rows {
            if !c.row(i).is_zero() {
                return None;
            }
        }
        let mut x = F2Matrix::zeros(self.cols, rhs.cols);
        for (row, &pc) in pivot_cols.iter().enumerate() {
            for j in 0..rhs.cols {
                if c.get(row, j) {
                    x.set(pc, j, true);
                }
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, rhs: &F2Vec) -> Option<F2Vec> {
        let b = F2Matrix::from_cols(rhs.len(), std::slice::from_ref(rhs));
        self.solve(&b).map(|x| x.col(0))
    }

    /// The block `self[r0..r1, c0..c1]`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> F2Matrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        F2Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        F2Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        F2Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                other.get(i - self.rows, j)
            }
        })
    }

    /// Extends the (independent) columns of `self` to an invertible matrix
    /// by appending unit vectors.
    pub fn complete_basis(&self) -> F2Matrix {
        let n = self.rows;
        assert!(self.cols <= n, "more columns than dimensions");
        let mut cols: Vec<F2Vec> = (0..self.cols).map(|j| self.col(j)).collect();
        let mut current = self.clone();
        for i in 0..n {
            if current.rank() == n {
                break;
            }
            let candidate = current.hstack(&F2Matrix::from_cols(n, &[F2Vec::unit(n, i)]));
            if candidate.rank() > current.rank() {
                cols.push(F2Vec::unit(n, i));
                current = candidate;
            }
        }
        let out = F2Matrix::from_cols(n, &cols);
        assert!(out.is_invertible(), "complete_basis: input columns dependent");
        out
    }

    /// True iff every row and every column contains at most one set bit.
    pub fn is_partial_permutation(&self) -> bool {
        let mut col_seen = vec![false; self.cols];
        for i in 0..self.rows {
            let ones = self.row(i).ones();
            if ones.len() > 1 {
                return false;
            }
            if let Some(&j) = ones.first() {
                if col_seen[j] {
                    return false;
                }
                col_seen[j] = true;
            }
        }
        true
    }
}

impl std::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", if self.get(i, j) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn random_matrix(state: &mut u64, rows: usize, cols: usize) -> F2Matrix {
        F2Matrix::from_fn(rows, cols, |_, _| splitmix(state) & 1 == 1)
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(F2Matrix::identity(7).rank(), 7);
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let k = F2Matrix::zeros(3, 3).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (3, 3));
        assert!(k.is_invertible());
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let mut state = 17;
        for _ in 0..1000 {
            let r = 1 + (splitmix(&mut state) % 12) as usize;
            let c = 1 + (splitmix(&mut state) % 12) as usize;
            let m = random_matrix(&mut state, r, c);
            assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
        }
    }

    #[test]
    fn rref_transform_is_invertible_and_consistent() {
        let mut state = 5;
        for _ in 0..200 {
            let m = random_matrix(&mut state, 6, 9);
            let Rref { r, u, .. } = m.rref();
            assert!(u.is_invertible());
            assert_eq!(u.mul(&m).unwrap(), r);
        }
    }

    #[test]
    fn kernel_and_image_contracts() {
        let mut state = 99;
        for _ in 0..200 {
            let m = random_matrix(&mut state, 5, 8);
            let k = m.kernel_basis();
            if k.cols() > 0 {
                assert!(m.mul(&k).unwrap().is_zero());
            }
            let im = m.image_basis();
            assert_eq!(im.rank(), m.rank());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut state = 1;
        let mut found = 0;
        while found < 50 {
            let m = random_matrix(&mut state, 6, 6);
            match m.inverse() {
                Ok(inv) => {
                    assert_eq!(inv.mul(&m).unwrap(), F2Matrix::identity(6));
                    assert_eq!(m.mul(&inv).unwrap(), F2Matrix::identity(6));
                    found += 1;
                }
                Err(F2Error::Singular) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn singular_matrix_reports_singular() {
        let m = F2Matrix::zeros(4, 4);
        assert_eq!(m.inverse().unwrap_err(), F2Error::Singular);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = F2Matrix::zeros(2, 3);
        let b = F2Matrix::zeros(2, 3);
        assert!(matches!(a.mul(&b), Err(F2Error::DimensionMismatch(_))));
    }

    #[test]
    fn solve_finds_solutions() {
        let mut state = 31;
        for _ in 0..200 {
            let m = random_matrix(&mut state, 6, 7);
            let x = random_matrix(&mut state, 7, 2);
            let b = m.mul(&x).unwrap();
            let sol = m.solve(&b).expect("consistent by construction");
            assert_eq!(m.mul(&sol).unwrap(), b);
        }
    }

    #[test]
    fn partial_permutation_detection() {
        let mut m = F2Matrix::zeros(3, 3);
        m.set(0, 1, true);
        m.set(2, 0, true);
        assert!(m.is_partial_permutation());
        m.set(1, 1, true);
        assert!(!m.is_partial_permutation());
    }
}
