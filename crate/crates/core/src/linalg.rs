//! Dense and sparse exact linear algebra over a [`Field`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            write!(f, "{row:?}")?;
            if r + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<S> {
    pub matrix: Matrix<S>,
    pub pivots: Vec<usize>,
}

impl<S: Field> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<S>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| S::from_i64(x)).collect()).collect();
        Self::from_rows(rows, cols).expect("ragged integer matrix")
    }

    /// Column matrix from a vector.
    pub fn column(v: &[S]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| S::random(rng))
    }

    /// A random invertible matrix, by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_negligible())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a.clone() * b.clone();
                        out[(i, j)] = out[(i, j)].clone() + t;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &S) -> Self {
        let data = self.data.iter().map(|a| a.clone() * s.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<T>(&self, f: impl FnMut(&S) -> Result<T>) -> Result<Matrix<T>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<T>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, c| self[(r, cols[c])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |r, c| self[(rows[r], c)].clone())
    }

    /// Sub-block `rows r0..r0+nr`, `cols c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rref(&self) -> Rref<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let best = (lead..m.rows)
                .map(|r| (r, m[(r, c)].pivot_weight()))
                .filter(|&(_, w)| w > 0.0)
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let Some((p, _)) = best else { continue };
            m.swap_rows(lead, p);
            let inv = S::one() / m[(lead, c)].clone();
            for j in c..m.cols {
                m[(lead, j)] = m[(lead, j)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r == lead || m[(r, c)].is_negligible() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for j in c..m.cols {
                    if !m[(lead, j)].is_zero() {
                        m[(r, j)] = m[(r, j)].clone() - f.clone() * m[(lead, j)].clone();
                    }
                }
                m[(r, c)] = S::zero();
            }
            pivots.push(c);
            lead += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns form a basis of the null space.
    pub fn kernel(&self) -> Self {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                k[(p, j)] = -matrix[(r, f)].clone();
            }
        }
        k
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows, "solve shape mismatch");
        let aug = self.hstack(b);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = matrix[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Self::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Columns forming a basis of the column space (a subset of the original columns).
    pub fn column_basis(&self) -> Self {
        let pivots = self.rref().pivots;
        self.select_cols(&pivots)
    }

    /// Rows spanning the annihilator of the column space: `ann * self = 0`.
    pub fn left_annihilator(&self) -> Self {
        self.transpose().kernel().transpose()
    }
}

/// A subspace of `S^n`, stored by a canonical column basis.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Matrix<S>,
}

impl<S: Field> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Span of the columns of `m`, canonicalised via the RREF of `m^T`.
    pub fn span(m: &Matrix<S>) -> Self {
        let Rref { matrix, pivots } = m.transpose().rref();
        let k = pivots.len();
        let basis = Matrix::from_fn(m.rows(), k, |r, c| matrix[(c, r)].clone());
        Subspace { ambient: m.rows(), basis }
    }

    pub fn span_vectors(ambient: usize, vs: &[Vec<S>]) -> Self {
        let m = Matrix::from_fn(ambient, vs.len(), |r, c| vs[c][r].clone());
        Self::span(&m)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains_vector(&self, v: &[S]) -> bool {
        let m = self.basis.hstack(&Matrix::column(v));
        m.rank() == self.dim()
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(&self.basis.hstack(&other.basis))
    }

    /// `{x : a x ∈ target}`.
    pub fn preimage(a: &Matrix<S>, target: &Self) -> Self {
        assert_eq!(a.rows(), target.ambient, "preimage shape mismatch");
        if target.is_full() {
            return Self::full(a.cols());
        }
        let ann = target.basis.left_annihilator();
        Self::span(&ann.mul(a).kernel())
    }

    pub fn image(a: &Matrix<S>, src: &Self) -> Self {
        Self::span(&a.mul(&src.basis))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let coeffs = Self::preimage(&self.basis, other);
        Self::span(&self.basis.mul(coeffs.basis()))
    }

    /// A basis of `self` whose first columns are a basis of `sub`.
    pub fn adapted_basis(&self, sub: &Self) -> Matrix<S> {
        let stacked = sub.basis.hstack(&self.basis);
        stacked.column_basis()
    }

    /// Coordinates of each column of `vs` in the basis `b` (columns independent).
    pub fn coordinates(b: &Matrix<S>, vs: &Matrix<S>) -> Option<Matrix<S>> {
        b.solve(vs)
    }
}

/// Sparse vector as sorted `(index, value)` pairs with no stored zeros.
pub type SparseVec<S> = Vec<(usize, S)>;

/// `y += a * x` on sparse vectors.
pub fn sparse_axpy<S: Field>(y: &SparseVec<S>, a: &S, x: &SparseVec<S>) -> SparseVec<S> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, a.clone() * x[j].1.clone()));
            j += 1;
        } else {
            let v = y[i].1.clone() + a.clone() * x[j].1.clone();
            if !v.is_negligible() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_from_map<S: Field>(m: BTreeMap<usize, S>) -> SparseVec<S> {
    m.into_iter().filter(|(_, v)| !v.is_negligible()).collect()
}

/// Accumulates `coef * v` into a map.
pub fn sparse_accumulate<S: Field>(acc: &mut BTreeMap<usize, S>, coef: &S, v: &SparseVec<S>) {
    for (i, x) in v {
        let e = acc.entry(*i).or_insert_with(S::zero);
        *e = e.clone() + coef.clone() * x.clone();
    }
}

/// Incrementally maintained fully reduced row echelon form of sparse rows.
///
/// The pivot of an inserted row is its smallest column, so callers choose the
/// column order to steer which coordinates become pivots.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon<S> {
    rows: Vec<SparseVec<S>>,
    pivot_row: BTreeMap<usize, usize>,
}

impl<S: Field> SparseEchelon<S> {
    pub fn new() -> Self {
        SparseEchelon { rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// The stored row whose pivot is `col`.
    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec<S>> {
        self.pivot_row.get(&col).map(|&r| &self.rows[r])
    }

    /// Normal form of `v` modulo the row span: no pivot columns remain.
    pub fn reduce(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut v = v.clone();
        let hits: Vec<(usize, S)> = v
            .iter()
            .filter(|(c, _)| self.pivot_row.contains_key(c))
            .cloned()
            .collect();
        for (c, coef) in hits {
            let row = &self.rows[self.pivot_row[&c]];
            v = sparse_axpy(&v, &(-coef), row);
        }
        v
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<S>) -> bool {
        let v = self.reduce(v);
        let Some((pc, lead)) = v.first().cloned() else { return false };
        let inv = S::one() / lead;
        let v: SparseVec<S> = v.into_iter().map(|(c, x)| (c, x * inv.clone())).collect();
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                let coef = row[pos].1.clone();
                *row = sparse_axpy(row, &(-coef), &v);
            }
        }
        self.pivot_row.insert(pc, self.rows.len());
        self.rows.push(v);
        true
    }
}
