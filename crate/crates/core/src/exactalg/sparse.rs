use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::ring::Ring;

/// Sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `y + a * x` for sorted sparse vectors.
pub fn axpy<R: Ring>(ring: &R, a: &R::Elem, x: &[(usize, R::Elem)], y: &[(usize, R::Elem)]) -> SparseVec<R::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            let v = ring.mul(a, &x[i].1);
            if !ring.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push(y[j].clone());
            j += 1;
        } else {
            let mut v = y[j].1.clone();
            ring.add_mul_assign(&mut v, a, &x[i].1);
            if !ring.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Collect `(index, value)` terms into a sorted sparse vector, summing
/// duplicates and dropping zeros.
pub fn collect_terms<R: Ring>(ring: &R, terms: impl IntoIterator<Item = (usize, R::Elem)>) -> SparseVec<R::Elem> {
    let mut acc: BTreeMap<usize, R::Elem> = BTreeMap::new();
    for (i, v) in terms {
        match acc.get_mut(&i) {
            Some(slot) => *slot = ring.add(slot, &v),
            None => {
                acc.insert(i, v);
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !ring.is_zero(v)).collect()
}

/// Column-major sparse matrix with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<E> {
    n_rows: usize,
    cols: Vec<SparseVec<E>>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix { n_rows, cols: vec![Vec::new(); n_cols] }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        SparseMatrix { n_rows: n, cols: (0..n).map(|i| vec![(i, ring.one())]).collect() }
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<R: Ring<Elem = E>>(
        ring: &R,
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Result<Self> {
        let mut per_col: Vec<Vec<(usize, E)>> = vec![Vec::new(); n_cols];
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::ShapeMismatch(format!("entry ({r}, {c}) outside {n_rows}x{n_cols}")));
            }
            per_col[c].push((r, v));
        }
        let cols = per_col.into_iter().map(|col| collect_terms(ring, col)).collect();
        Ok(SparseMatrix { n_rows, cols })
    }

    /// Build from already-sorted, zero-free columns.
    pub fn from_columns(n_rows: usize, cols: Vec<SparseVec<E>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0) && c.last().is_none_or(|l| l.0 < n_rows)));
        SparseMatrix { n_rows, cols }
    }

    pub fn from_dense<R: Ring<Elem = E>>(ring: &R, rows: &[Vec<E>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        Self::from_triplets(ring, n_rows, n_cols, triplets).expect("dense shape is consistent")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, E)] {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[SparseVec<E>] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        let col = &self.cols[c];
        col.binary_search_by_key(&r, |e| e.0).ok().map(|k| &col[k].1)
    }

    /// `(row, col, value)` in column-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &E)> + '_ {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec<E>> = vec![Vec::new(); self.n_rows];
        for (r, c, v) in self.iter() {
            cols[r].push((c, v.clone()));
        }
        SparseMatrix { n_rows: self.n_cols(), cols }
    }

    /// Rows of `self` followed by rows of `bottom`.
    pub fn vstack(&self, bottom: &Self) -> Result<Self> {
        if self.n_cols() != bottom.n_cols() {
            return Err(Error::ShapeMismatch(format!("cannot stack {} columns on {} columns", self.n_cols(), bottom.n_cols())));
        }
        let off = self.n_rows;
        let cols = self
            .cols
            .iter()
            .zip(&bottom.cols)
            .map(|(t, b)| t.iter().cloned().chain(b.iter().map(|(r, v)| (r + off, v.clone()))).collect())
            .collect();
        Ok(SparseMatrix { n_rows: self.n_rows + bottom.n_rows, cols })
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        SparseMatrix { n_rows: self.n_rows, cols: keep.iter().map(|&c| self.cols[c].clone()).collect() }
    }

    /// `self * x` for a sparse column vector `x`.
    pub fn apply<R: Ring<Elem = E>>(&self, ring: &R, x: &[(usize, E)]) -> SparseVec<E> {
        let terms = x.iter().flat_map(|(c, a)| self.cols[*c].iter().map(move |(r, v)| (*r, ring.mul(a, v))));
        collect_terms(ring, terms)
    }

    /// Matrix product `self * rhs`.
    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, rhs: &Self) -> Result<Self> {
        if self.n_cols() != rhs.n_rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows,
                self.n_cols(),
                rhs.n_rows,
                rhs.n_cols()
            )));
        }
        let cols = rhs.cols.iter().map(|col| self.apply(ring, col)).collect();
        Ok(SparseMatrix { n_rows: self.n_rows, cols })
    }

    /// Coefficient-wise change of ring, dropping entries that become zero.
    pub fn map<R2: Ring>(&self, target: &R2, f: impl Fn(&E) -> R2::Elem) -> SparseMatrix<R2::Elem> {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(r, v)| {
                        let w = f(v);
                        (!target.is_zero(&w)).then_some((*r, w))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix { n_rows: self.n_rows, cols }
    }

    pub fn to_dense<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<Vec<E>> {
        let mut out = vec![vec![ring.zero(); self.n_cols()]; self.n_rows];
        for (r, c, v) in self.iter() {
            out[r][c] = v.clone();
        }
        out
    }
}
