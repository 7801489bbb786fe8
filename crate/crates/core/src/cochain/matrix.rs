//! Dense exact rational matrices with sparse row reduction.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::Q;

/// A dense `rows × cols` matrix of big rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    /// Builds a matrix from row-major entries. Returns `None` if the entry
    /// count does not match the shape.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Q>) -> Option<Self> {
        (data.len() == rows * cols).then_some(QMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Integer matrix from explicit rows; every row must have `cols` entries.
    pub fn from_int_rows(cols: usize, rows: &[&[i64]]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged integer rows");
            data.extend(r.iter().map(|&v| Q::from_integer(v.into())));
        }
        QMatrix { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }

    pub fn scale(&self, s: &Q) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Matrix product; panics on inner-dimension mismatch.
    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shapes differ");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shapes differ");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &QMatrix) -> QMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = rhs.shape();
        let mut out = QMatrix::zeros(r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * r2 + k, j * c2 + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &QMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn rank(&self) -> usize {
        Echelon::of_rows(self.sparse_rows()).rank()
    }

    /// Basis of the right null space `{v : self·v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut ech = Echelon::of_rows(self.sparse_rows());
        ech.reduce_fully();
        ech.nullspace(self.cols)
    }

    /// Null space basis together with the free column of each basis vector;
    /// vector `i` is 1 at `free[i]` and 0 at every other free column.
    pub fn nullspace_with_free_columns(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        let mut ech = Echelon::of_rows(self.sparse_rows());
        ech.reduce_fully();
        ech.nullspace_pairs(self.cols).into_iter().map(|(j, v)| (v, j)).unzip()
    }

    /// Columns of the matrix as dense vectors.
    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j).clone()).collect()).collect()
    }

    pub(crate) fn sparse_rows(&self) -> Vec<SparseRow> {
        (0..self.rows).map(|i| SparseRow::from_dense(self.row(i))).collect()
    }

    /// Entries as `f64`; used by the numerical modules for integer incidence data.
    pub fn to_f64_row_major(&self) -> Vec<f64> {
        self.data.iter().map(q_to_f64).collect()
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Rank of a family of vectors (all of the same length).
pub fn rank_of_vectors(vectors: &[Vec<Q>]) -> usize {
    Echelon::of_rows(vectors.iter().map(|v| SparseRow::from_dense(v)).collect()).rank()
}

pub(crate) fn q_to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Sorted sparse row `(column, nonzero value)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct SparseRow(Vec<(usize, Q)>);

impl SparseRow {
    fn from_dense(row: &[Q]) -> Self {
        SparseRow(row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
    }

    fn lead(&self) -> Option<usize> {
        self.0.first().map(|(j, _)| *j)
    }

    fn get(&self, col: usize) -> Option<&Q> {
        self.0.binary_search_by_key(&col, |(j, _)| *j).ok().map(|i| &self.0[i].1)
    }

    /// `self -= factor * other`
    fn sub_scaled(&mut self, factor: &Q, other: &SparseRow) {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ja, va)), Some((jb, vb))) => {
                    if ja < jb {
                        out.push((*ja, va.clone()));
                        a.next();
                    } else if jb < ja {
                        out.push((*jb, -(factor * vb)));
                        b.next();
                    } else {
                        let v = va - factor * vb;
                        if !v.is_zero() {
                            out.push((*ja, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ja, va)), None) => {
                    out.push((*ja, va.clone()));
                    a.next();
                }
                (None, Some((jb, vb))) => {
                    out.push((*jb, -(factor * vb)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.0 = out;
    }

    fn normalize(&mut self) {
        if let Some((_, lead)) = self.0.first() {
            let inv = lead.recip();
            for (_, v) in &mut self.0 {
                *v = &*v * &inv;
            }
        }
    }
}

/// Row echelon form built incrementally; pivot rows have leading entry 1 and
/// distinct leading columns.
pub(crate) struct Echelon {
    // sorted by pivot column
    pivots: Vec<SparseRow>,
}

impl Echelon {
    pub(crate) fn of_rows(rows: Vec<SparseRow>) -> Self {
        let mut ech = Echelon { pivots: Vec::new() };
        // sparsest rows first keeps fill-in low on incidence matrices
        let mut rows = rows;
        rows.sort_by_key(|r| r.0.len());
        for r in rows {
            ech.insert(r);
        }
        ech
    }

    fn find(&self, col: usize) -> Result<usize, usize> {
        self.pivots.binary_search_by_key(&col, |r| r.lead().unwrap())
    }

    fn insert(&mut self, mut row: SparseRow) {
        while let Some(lead) = row.lead() {
            match self.find(lead) {
                Ok(i) => {
                    let factor = row.0[0].1.clone();
                    row.sub_scaled(&factor, &self.pivots[i]);
                }
                Err(pos) => {
                    row.normalize();
                    self.pivots.insert(pos, row);
                    return;
                }
            }
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Clears every pivot column above its pivot, giving reduced row echelon form.
    fn reduce_fully(&mut self) {
        for p in (0..self.pivots.len()).rev() {
            let col = self.pivots[p].lead().unwrap();
            let (above, rest) = self.pivots.split_at_mut(p);
            let pivot_row = &rest[0];
            for r in above.iter_mut() {
                if let Some(v) = r.get(col) {
                    let factor = v.clone();
                    r.sub_scaled(&factor, pivot_row);
                }
            }
        }
    }

    fn nullspace(&self, ncols: usize) -> Vec<Vec<Q>> {
        self.nullspace_pairs(ncols).into_iter().map(|(_, v)| v).collect()
    }

    fn nullspace_pairs(&self, ncols: usize) -> Vec<(usize, Vec<Q>)> {
        let mut is_pivot = vec![false; ncols];
        for r in &self.pivots {
            is_pivot[r.lead().unwrap()] = true;
        }
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Q::zero(); ncols];
            v[free] = Q::one();
            for r in &self.pivots {
                if let Some(x) = r.get(free) {
                    v[r.lead().unwrap()] = -x.clone();
                }
            }
            basis.push((free, v));
        }
        basis
    }
}
