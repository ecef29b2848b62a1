//! Dense exact linear algebra over the rationals.
//!
//! Matrices are small (at most a few dozen rows), so everything is dense and
//! eliminations are plain Gauss-Jordan with an explicit record of the row
//! operations. That record lets one factorization answer many right-hand
//! sides.

use num_traits::{One, Zero};

use crate::pivot::PivotRule;
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Scalar::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Scalar::one();
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    pub fn column(&self, j: usize) -> Vector {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i]
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn rank(&self, rule: &dyn PivotRule) -> usize {
        Rref::new(self, rule).rank()
    }

    /// Exact inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self, rule: &dyn PivotRule) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let rref = Rref::new(self, rule);
        if rref.rank() != self.rows {
            return None;
        }
        let n = self.rows;
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[j] = Scalar::one();
            let x = rref.solve(&e).expect("full rank");
            for i in 0..n {
                inv.data[i][j] = x[i].clone();
            }
        }
        Some(inv)
    }
}

/// Reduced row echelon form together with the row operations that produced it.
#[derive(Debug, Clone)]
pub struct Rref {
    reduced: Matrix,
    transform: Matrix,
    /// `pivots[r]` is the column holding the leading 1 of row `r`.
    pivots: Vec<usize>,
}

impl Rref {
    pub fn new(m: &Matrix, rule: &dyn PivotRule) -> Self {
        let mut a = m.data.clone();
        let mut t = Matrix::identity(m.rows).data;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in rule.column_order(m.cols) {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            t.swap(r, p);
            let inv = a[r][col].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for x in t[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..m.rows {
                if i == r || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                let (pivot_row, row_i) = split_pair(&mut a, r, i);
                for (x, y) in row_i.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                let (pivot_row, row_i) = split_pair(&mut t, r, i);
                for (x, y) in row_i.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref {
            reduced: Matrix {
                rows: m.rows,
                cols: m.cols,
                data: a,
            },
            transform: Matrix {
                rows: m.rows,
                cols: m.rows,
                data: t,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced(&self) -> &Matrix {
        &self.reduced
    }

    /// Solves `M x = b`: free coordinates are set to zero. `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let c = self.transform.mul_vec(b);
        if c[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.reduced.cols];
        for (r, &col) in self.pivots.iter().enumerate() {
            x[col] = c[r].clone();
        }
        Some(x)
    }

    pub fn is_consistent(&self, b: &[Scalar]) -> bool {
        let c = self.transform.mul_vec(b);
        c[self.rank()..].iter().all(Zero::is_zero)
    }

    /// Kernel basis, one vector per free column in increasing column order.
    pub fn kernel(&self) -> Vec<Vector> {
        let n = self.reduced.cols;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Scalar::zero(); n];
                v[f] = Scalar::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    let e = &self.reduced.data[r][f];
                    if !e.is_zero() {
                        v[p] = -e.clone();
                    }
                }
                v
            })
            .collect()
    }
}

fn split_pair<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Rank of a family of vectors of length `dim`.
pub fn rank_of(dim: usize, vectors: &[Vector], rule: &dyn PivotRule) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(dim, vectors).rank(rule)
}

/// Extracts a basis of `span(vectors)` by keeping vectors that raise the rank,
/// scanning in the given rule's order.
pub fn independent_subset(dim: usize, vectors: &[Vector], rule: &dyn PivotRule) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let rref = Rref::new(&Matrix::from_columns(dim, vectors), rule);
    let mut cols = rref.pivots().to_vec();
    cols.sort_unstable();
    cols.into_iter().map(|j| vectors[j].clone()).collect()
}

pub fn span_contains(dim: usize, basis: &[Vector], v: &[Scalar]) -> bool {
    if is_zero_vector(v) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let rref = Rref::new(
        &Matrix::from_columns(dim, basis),
        &crate::pivot::LowestIndexFirst,
    );
    rref.is_consistent(v)
}

/// Basis of `span(u) ∩ span(w)`.
pub fn intersection(dim: usize, u: &[Vector], w: &[Vector], rule: &dyn PivotRule) -> Vec<Vector> {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vector> = u.to_vec();
    cols.extend(w.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
    let rref = Rref::new(&Matrix::from_columns(dim, &cols), rule);
    let combos: Vec<Vector> = rref
        .kernel()
        .into_iter()
        .map(|k| {
            let mut out = vec![Scalar::zero(); dim];
            for (coef, vec) in k.iter().zip(u) {
                if coef.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(vec) {
                    *o += coef * x;
                }
            }
            out
        })
        .collect();
    independent_subset(dim, &combos, rule)
}
