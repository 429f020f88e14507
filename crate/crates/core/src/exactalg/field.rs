//! Linear algebra over fields: sparse rank by Markowitz-pivoted elimination,
//! and an incremental column reducer for span membership and kernels.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

use super::ring::Ring;
use super::sparse::{axpy, SparseMatrix, SparseVec};

fn require_field<R: Ring>(ring: &R) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::RingNotField)
    }
}

/// Rank of `m` over a field.
pub fn rank<R: Ring>(ring: &R, m: &SparseMatrix<R::Elem>) -> Result<usize> {
    require_field(ring)?;
    Ok(Eliminator::new(ring, m).run())
}

/// Rank of `top` stacked over `bottom`, i.e. `dim(rowspace(top) + rowspace(bottom))`.
pub fn rank_stacked<R: Ring>(ring: &R, top: &SparseMatrix<R::Elem>, bottom: &SparseMatrix<R::Elem>) -> Result<usize> {
    let stacked = top.vstack(bottom)?;
    rank(ring, &stacked)
}

/// Some `x` with `m x = v`, or `None` when `v` is outside the column span.
pub fn solve_in_span<R: Ring>(ring: &R, m: &SparseMatrix<R::Elem>, v: &[R::Elem]) -> Result<Option<Vec<R::Elem>>> {
    require_field(ring)?;
    if v.len() != m.n_rows() {
        return Err(Error::ShapeMismatch(format!("vector of length {} for {} rows", v.len(), m.n_rows())));
    }
    let mut reducer = ColumnReducer::with_history(ring);
    for col in m.columns() {
        reducer.insert(col.clone());
    }
    let target: SparseVec<R::Elem> =
        v.iter().enumerate().filter(|(_, a)| !ring.is_zero(a)).map(|(i, a)| (i, a.clone())).collect();
    Ok(reducer.express(target).map(|combo| {
        let mut x = vec![ring.zero(); m.n_cols()];
        for (j, c) in combo {
            x[j] = c;
        }
        x
    }))
}

/// Sparse Gaussian elimination computing rank. Pivots are chosen by a
/// Markowitz approximation: a column of minimal count, then within it a
/// row of minimal length, ties broken by coefficient cost and index.
struct Eliminator<'r, R: Ring> {
    ring: &'r R,
    rows: Vec<SparseVec<R::Elem>>,
    col_rows: Vec<BTreeSet<usize>>,
    queue: BTreeSet<(usize, usize)>,
}

impl<'r, R: Ring> Eliminator<'r, R> {
    fn new(ring: &'r R, m: &SparseMatrix<R::Elem>) -> Self {
        let mut rows: Vec<SparseVec<R::Elem>> = vec![Vec::new(); m.n_rows()];
        let mut col_rows = vec![BTreeSet::new(); m.n_cols()];
        for (r, c, v) in m.iter() {
            rows[r].push((c, v.clone()));
            col_rows[c].insert(r);
        }
        let queue = col_rows.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(c, s)| (s.len(), c)).collect();
        Eliminator { ring, rows, col_rows, queue }
    }

    fn set_membership(&mut self, col: usize, row: usize, present: bool) {
        let before = self.col_rows[col].len();
        let changed = if present { self.col_rows[col].insert(row) } else { self.col_rows[col].remove(&row) };
        if changed {
            if before > 0 {
                self.queue.remove(&(before, col));
            }
            let after = self.col_rows[col].len();
            if after > 0 {
                self.queue.insert((after, col));
            }
        }
    }

    fn run(mut self) -> usize {
        let ring = self.ring;
        let mut rank = 0;
        while let Some(&(_, col)) = self.queue.iter().next() {
            let pivot_row = *self.col_rows[col]
                .iter()
                .min_by_key(|&&r| {
                    let v = &self.rows[r].iter().find(|e| e.0 == col).expect("membership is exact").1;
                    (self.rows[r].len(), ring.cost(v), r)
                })
                .expect("queued columns are non-empty");
            let prow = std::mem::take(&mut self.rows[pivot_row]);
            let pval = &prow.iter().find(|e| e.0 == col).expect("pivot present").1;
            let pinv = ring.inverse(pval).expect("nonzero field element is invertible");
            for (j, _) in &prow {
                self.set_membership(*j, pivot_row, false);
            }
            let others: Vec<usize> = self.col_rows[col].iter().copied().collect();
            for r in others {
                let old = std::mem::take(&mut self.rows[r]);
                let a = &old.iter().find(|e| e.0 == col).expect("membership is exact").1;
                let factor = ring.neg(&ring.mul(a, &pinv));
                let new = axpy(ring, &factor, &prow, &old);
                for (j, _) in &prow {
                    let present = new.binary_search_by_key(j, |e| e.0).is_ok();
                    self.set_membership(*j, r, present);
                }
                self.rows[r] = new;
            }
            debug_assert!(self.col_rows[col].is_empty());
            rank += 1;
        }
        rank
    }
}

/// Outcome of inserting a column into a [`ColumnReducer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion<E> {
    /// The column enlarged the span.
    Independent,
    /// The column was already in the span. With history tracking the
    /// relation `r` satisfies `sum_j r_j * input_j = 0` and has coefficient
    /// one at the new column's id; without tracking it is empty.
    Dependent(SparseVec<E>),
}

/// Incremental column reduction over a field. Each stored column is
/// normalised so its pivot (largest row index) is one, and no two stored
/// columns share a pivot row.
pub struct ColumnReducer<'r, R: Ring> {
    ring: &'r R,
    pivot_slot: HashMap<usize, usize>,
    stored: Vec<SparseVec<R::Elem>>,
    history: Option<Vec<SparseVec<R::Elem>>>,
    inserted: usize,
}

impl<'r, R: Ring> ColumnReducer<'r, R> {
    pub fn new(ring: &'r R) -> Self {
        debug_assert!(ring.is_field());
        ColumnReducer { ring, pivot_slot: HashMap::new(), stored: Vec::new(), history: None, inserted: 0 }
    }

    /// A reducer that also tracks how stored columns combine inputs.
    pub fn with_history(ring: &'r R) -> Self {
        ColumnReducer { history: Some(Vec::new()), ..Self::new(ring) }
    }

    pub fn rank(&self) -> usize {
        self.stored.len()
    }

    /// Reduce `v` against the stored columns. Returns the remainder and the
    /// accumulated combination `acc` with `v = remainder + sum acc_j input_j`.
    fn reduce(&self, mut v: SparseVec<R::Elem>) -> (SparseVec<R::Elem>, SparseVec<R::Elem>) {
        let ring = self.ring;
        let mut acc: SparseVec<R::Elem> = Vec::new();
        while let Some((row, val)) = v.last().cloned() {
            let Some(&slot) = self.pivot_slot.get(&row) else { break };
            let neg = ring.neg(&val);
            v = axpy(ring, &neg, &self.stored[slot], &v);
            if let Some(h) = &self.history {
                acc = axpy(ring, &val, &h[slot], &acc);
            }
        }
        (v, acc)
    }

    pub fn insert(&mut self, v: SparseVec<R::Elem>) -> Insertion<R::Elem> {
        let ring = self.ring;
        let id = self.inserted;
        self.inserted += 1;
        let (rem, acc) = self.reduce(v);
        let mut combo = Vec::new();
        if self.history.is_some() {
            let neg_one = ring.neg(&ring.one());
            combo = axpy(ring, &neg_one, &acc, &[(id, ring.one())]);
        }
        match rem.last() {
            None => Insertion::Dependent(combo),
            Some((row, val)) => {
                let inv = ring.inverse(val).expect("field");
                let scale = |x: &SparseVec<R::Elem>| x.iter().map(|(i, a)| (*i, ring.mul(a, &inv))).collect::<Vec<_>>();
                self.pivot_slot.insert(*row, self.stored.len());
                if let Some(h) = &mut self.history {
                    h.push(scale(&combo));
                }
                self.stored.push(scale(&rem));
                Insertion::Independent
            }
        }
    }

    /// Whether `v` lies in the span of the inserted columns.
    pub fn contains(&self, v: SparseVec<R::Elem>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coefficients expressing `v` in terms of inserted columns, if in span.
    /// Requires history tracking.
    pub fn express(&self, v: SparseVec<R::Elem>) -> Option<SparseVec<R::Elem>> {
        assert!(self.history.is_some(), "express requires a reducer with history");
        let (rem, acc) = self.reduce(v);
        rem.is_empty().then_some(acc)
    }
}

/// Textbook dense row reduction, kept independent of the sparse code for
/// cross-checking.
pub fn dense_rank<R: Ring>(ring: &R, rows: &[Vec<R::Elem>]) -> usize {
    let mut a: Vec<Vec<R::Elem>> = rows.to_vec();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..n_cols {
        let Some(p) = (rank..n_rows).find(|&r| !ring.is_zero(&a[r][c])) else { continue };
        a.swap(rank, p);
        let inv = ring.inverse(&a[rank][c]).expect("field");
        for r in 0..n_rows {
            if r != rank && !ring.is_zero(&a[r][c]) {
                let f = ring.mul(&a[r][c], &inv);
                #[allow(clippy::needless_range_loop)]
                for k in c..n_cols {
                    let t = ring.mul(&f, &a[rank][k]);
                    a[r][k] = ring.sub(&a[r][k], &t);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Integers, PrimeField, Rationals};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rank_examples() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(rank(&f2, &SparseMatrix::identity(&f2, 2)).unwrap(), 2);
        let m = SparseMatrix::from_dense(&Rationals, &[vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(rank(&Rationals, &m).unwrap(), 1);
        let m = SparseMatrix::from_dense(&f2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(rank(&f2, &m).unwrap(), 1);
    }

    #[test]
    fn rank_rejects_integers() {
        let m = SparseMatrix::<BigInt>::zeros(1, 1);
        assert_eq!(rank(&Integers, &m), Err(Error::RingNotField));
    }

    #[test]
    fn rank_stacked_examples() {
        let top = SparseMatrix::from_dense(&Rationals, &[vec![q(1), q(0)]]);
        let bottom = SparseMatrix::from_dense(&Rationals, &[vec![q(0), q(1)]]);
        assert_eq!(rank_stacked(&Rationals, &top, &bottom).unwrap(), 2);
        let f3 = PrimeField::new(3).unwrap();
        let a = SparseMatrix::from_dense(&f3, &[vec![1, 1]]);
        assert_eq!(rank_stacked(&f3, &a, &a).unwrap(), 1);
        let empty = SparseMatrix::<u32>::zeros(0, 4);
        assert_eq!(rank_stacked(&f3, &empty, &SparseMatrix::identity(&f3, 4)).unwrap(), 4);
        let wide = SparseMatrix::<u32>::zeros(1, 5);
        assert!(matches!(rank_stacked(&f3, &empty, &wide), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn solve_in_span_examples() {
        let id = SparseMatrix::identity(&Rationals, 3);
        let v = vec![q(4), q(-1), q(0)];
        assert_eq!(solve_in_span(&Rationals, &id, &v).unwrap(), Some(v.clone()));
        let m = SparseMatrix::from_dense(&Rationals, &[vec![q(1)], vec![q(0)]]);
        assert_eq!(solve_in_span(&Rationals, &m, &[q(0), q(1)]).unwrap(), None);
        let f5 = PrimeField::new(5).unwrap();
        let m = SparseMatrix::from_dense(&f5, &[vec![2]]);
        assert_eq!(solve_in_span(&f5, &m, &[1]).unwrap(), Some(vec![3]));
        assert!(matches!(solve_in_span(&f5, &m, &[1, 2]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn reducer_relations_are_kernel_vectors() {
        let f7 = PrimeField::new(7).unwrap();
        let cols = vec![vec![(0, 1), (1, 2)], vec![(1, 1)], vec![(0, 3), (1, 1)]];
        let mut red = ColumnReducer::with_history(&f7);
        assert_eq!(red.insert(cols[0].clone()), Insertion::Independent);
        assert_eq!(red.insert(cols[1].clone()), Insertion::Independent);
        let Insertion::Dependent(rel) = red.insert(cols[2].clone()) else { panic!("dependent") };
        let m = SparseMatrix::from_columns(2, cols);
        assert!(m.apply(&f7, &rel).is_empty());
        assert_eq!(rel.last(), Some(&(2, 1)));
    }
}
