//! Small dense row-major matrices over any [`Ring`].

use std::fmt;

use crate::scalar::{ExactDiv, Field, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for r in 0..self.rows {
            list.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        list.finish()
    }
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from nested rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: nrows, cols: ncols, data }
    }

    /// An empty `rows x 0` or `0 x cols` matrix.
    pub fn empty(rows: usize, cols: usize) -> Self {
        assert!(rows == 0 || cols == 0);
        Matrix { rows, cols, data: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        let cols = self.cols;
        let mut out = Vec::with_capacity(self.rows);
        let mut it = self.data.into_iter();
        for _ in 0..self.rows {
            out.push(it.by_ref().take(cols).collect());
        }
        out
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }
}

impl<T: Ring> Matrix<T> {
    /// Identity with `one` on the diagonal and `one.zero_like()` elsewhere.
    pub fn identity_like(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Matrix::from_fn(n, n, |r, c| if r == c { one.clone() } else { zero.clone() })
    }

    pub fn mul(&self, rhs: &Matrix<T>, zero: &T) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                acc = acc.ring_add(&self.get(r, k).ring_mul(rhs.get(k, c)));
            }
            acc
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero_elem)
    }

    /// Determinant by cofactor expansion along the first row. Intended for
    /// the small minors this crate needs; cost grows factorially.
    pub fn cofactor_det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        assert!(self.rows > 0, "determinant of an empty matrix needs a ring context");
        let idx: Vec<usize> = (0..self.cols).collect();
        self.cofactor_rec(0, &idx)
    }

    fn cofactor_rec(&self, row: usize, cols: &[usize]) -> T {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        if cols.len() == 2 {
            let a = self.get(row, cols[0]).ring_mul(self.get(row + 1, cols[1]));
            let b = self.get(row, cols[1]).ring_mul(self.get(row + 1, cols[0]));
            return a.ring_sub(&b);
        }
        let mut acc: Option<T> = None;
        for (k, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero_elem() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry.ring_mul(&self.cofactor_rec(row + 1, &rest));
            acc = Some(match acc {
                None if k % 2 == 0 => term,
                None => term.ring_neg(),
                Some(a) if k % 2 == 0 => a.ring_add(&term),
                Some(a) => a.ring_sub(&term),
            });
        }
        acc.unwrap_or_else(|| self.get(row, cols[0]).zero_like())
    }
}

impl<T: Field> Matrix<T> {
    /// Rank by Gaussian elimination with exact field inverses.
    pub fn rank_over_field(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero_elem()) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let inv = m.get(rank, col).inverse().expect("nonzero pivot is invertible");
            for r in rank + 1..m.rows {
                if m.get(r, col).is_zero_elem() {
                    continue;
                }
                let factor = m.get(r, col).ring_mul(&inv);
                for c in col..m.cols {
                    let v = m.get(r, c).ring_sub(&factor.ring_mul(m.get(rank, c)));
                    m.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<T: ExactDiv> Matrix<T> {
    /// Rank over the fraction field by Bareiss fraction-free elimination.
    /// Entries must lie in an integral domain.
    pub fn rank_fraction_free(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut prev: Option<T> = None;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero_elem()) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let p = m.get(rank, col).clone();
            for r in rank + 1..m.rows {
                let lead = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = p.ring_mul(m.get(r, c)).ring_sub(&lead.ring_mul(m.get(rank, c)));
                    let v = match &prev {
                        Some(d) => v.div_exact(d).expect("Bareiss step divides exactly"),
                        None => v,
                    };
                    m.set(r, c, v);
                }
            }
            prev = Some(p);
            rank += 1;
        }
        rank
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
