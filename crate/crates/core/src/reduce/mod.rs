//! Filtered Gaussian elimination.
//!
//! An entry `∂(b0, a0) = u` with `u` a unit and `q(a0) = q(b0)` spans an
//! acyclic filtered subcomplex. Cancelling it removes `a0` and `b0` and
//! replaces `∂(b, a)` by `∂(b, a) - ∂(b, a0) u^{-1} ∂(b0, a)`; the result is
//! filtered homotopy equivalent to the input.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cube::{FilteredComplex, Generator};
use crate::exactalg::{Ring, SparseMatrix};

/// Record of a reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    /// `(degree of source, source, target)` per cancelled pair.
    pub eliminations: Vec<(i64, Generator, Generator)>,
    pub size_before: usize,
    pub size_after: usize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceOptions {
    /// Check `∂² = 0` after every elimination (slow; panics on failure).
    pub check_each_step: bool,
}

/// One boundary map kept both by column and by row.
struct Block<E> {
    cols: Vec<BTreeMap<usize, E>>,
    rows: Vec<BTreeSet<usize>>,
}

impl<E: Clone> Block<E> {
    fn from_matrix(m: &SparseMatrix<E>) -> Self {
        let mut rows = vec![BTreeSet::new(); m.n_rows()];
        let cols = m
            .columns()
            .iter()
            .enumerate()
            .map(|(c, col)| {
                col.iter()
                    .map(|(r, v)| {
                        rows[*r].insert(c);
                        (*r, v.clone())
                    })
                    .collect()
            })
            .collect();
        Block { cols, rows }
    }

    fn remove_row(&mut self, r: usize) {
        for c in std::mem::take(&mut self.rows[r]) {
            self.cols[c].remove(&r);
        }
    }

    fn remove_col(&mut self, c: usize) {
        for r in std::mem::take(&mut self.cols[c]).into_keys() {
            self.rows[r].remove(&c);
        }
    }
}

struct Reducer<R: Ring> {
    ring: R,
    gens: Vec<Vec<Generator>>,
    alive: Vec<Vec<bool>>,
    blocks: Vec<Block<R::Elem>>,
    min_degree: i64,
}

impl<R: Ring> Reducer<R> {
    /// Cancel `∂_k(b0, a0)`.
    fn eliminate(&mut self, k: usize, a0: usize, b0: usize) {
        let ring = self.ring.clone();
        let blk = &mut self.blocks[k];
        let u = blk.cols[a0][&b0].clone();
        let u_inv = ring.inverse(&u).expect("pivot is a unit");
        let col_a0: Vec<(usize, R::Elem)> =
            blk.cols[a0].iter().filter(|(b, _)| **b != b0).map(|(b, v)| (*b, ring.mul(v, &u_inv))).collect();
        let row_b0: Vec<(usize, R::Elem)> =
            blk.rows[b0].iter().filter(|a| **a != a0).map(|a| (*a, blk.cols[*a][&b0].clone())).collect();
        for (a, da) in &row_b0 {
            let col = &mut blk.cols[*a];
            for (b, db) in &col_a0 {
                let delta = ring.neg(&ring.mul(db, da));
                let entry = col.entry(*b).or_insert_with(|| ring.zero());
                *entry = ring.add(entry, &delta);
                if ring.is_zero(entry) {
                    col.remove(b);
                    blk.rows[*b].remove(a);
                } else {
                    blk.rows[*b].insert(*a);
                }
            }
        }
        blk.remove_col(a0);
        blk.remove_row(b0);
        if k > 0 {
            self.blocks[k - 1].remove_row(a0);
        }
        if k + 1 < self.blocks.len() {
            self.blocks[k + 1].remove_col(b0);
        }
        self.alive[k][a0] = false;
        self.alive[k + 1][b0] = false;
    }

    /// Best pivot in column `a`: unit, `q`-preserving, shortest row.
    fn pivot_in(&self, k: usize, a: usize) -> Option<(usize, usize)> {
        let qa = self.gens[k][a].q;
        let blk = &self.blocks[k];
        blk.cols[a]
            .iter()
            .filter(|(b, v)| self.gens[k + 1][**b].q == qa && self.ring.is_unit(v))
            .map(|(b, _)| (blk.rows[*b].len(), *b))
            .min()
            .map(|(len, b)| ((blk.cols[a].len() - 1) * (len - 1), b))
    }

    /// One pass over degree `k`, columns in order of increasing fill-in.
    fn sweep(&mut self, k: usize, trace: &mut ReductionTrace, opts: ReduceOptions) -> bool {
        let mut candidates: Vec<(usize, usize)> = (0..self.gens[k].len())
            .filter(|&a| self.alive[k][a])
            .filter_map(|a| self.pivot_in(k, a).map(|(cost, _)| (cost, a)))
            .collect();
        candidates.sort_unstable();
        let mut changed = false;
        for (_, a) in candidates {
            if !self.alive[k][a] {
                continue;
            }
            let Some((_, b)) = self.pivot_in(k, a) else { continue };
            trace.eliminations.push((self.min_degree + k as i64, self.gens[k][a], self.gens[k + 1][b]));
            self.eliminate(k, a, b);
            changed = true;
            if opts.check_each_step {
                assert!(self.snapshot().d_squared_ok(&self.ring), "∂² ≠ 0 after eliminating degree {k} column {a}");
            }
        }
        changed
    }

    fn snapshot(&self) -> Snapshot<R::Elem> {
        let index: Vec<Vec<Option<usize>>> = self
            .alive
            .iter()
            .map(|al| {
                let mut n = 0;
                al.iter()
                    .map(|&x| {
                        x.then(|| {
                            n += 1;
                            n - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let gens: Vec<Vec<Generator>> = self
            .gens
            .iter()
            .zip(&self.alive)
            .map(|(g, al)| g.iter().zip(al).filter(|(_, &x)| x).map(|(g, _)| *g).collect())
            .collect();
        let diff = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, blk)| {
                let n_rows = gens.get(k + 1).map_or(0, Vec::len);
                let cols = blk
                    .cols
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| self.alive[k][*a])
                    .map(|(_, col)| {
                        col.iter().map(|(b, v)| (index[k + 1][*b].expect("entries only in live rows"), v.clone())).collect()
                    })
                    .collect();
                SparseMatrix::from_columns(n_rows, cols)
            })
            .collect();
        Snapshot { gens, diff }
    }
}

struct Snapshot<E> {
    gens: Vec<Vec<Generator>>,
    diff: Vec<SparseMatrix<E>>,
}

impl<E: Clone> Snapshot<E> {
    fn d_squared_ok<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.diff.windows(2).all(|w| w[1].mul(ring, &w[0]).expect("shapes agree").is_zero())
    }
}

pub fn reduce_complex<R: Ring>(c: &FilteredComplex<R>) -> (FilteredComplex<R>, ReductionTrace) {
    reduce_complex_with(c, ReduceOptions::default())
}

pub fn reduce_complex_with<R: Ring>(c: &FilteredComplex<R>, opts: ReduceOptions) -> (FilteredComplex<R>, ReductionTrace) {
    let (ring, triple, c_plus, c_minus, n_components, min_degree, gens, diff) = c.clone().into_parts();
    let mut trace = ReductionTrace { size_before: c.total_rank(), ..Default::default() };
    let alive = gens.iter().map(|g| vec![true; g.len()]).collect();
    let blocks = diff.iter().map(Block::from_matrix).collect();
    let mut red = Reducer { ring, gens, alive, blocks, min_degree };
    let n = red.gens.len();
    loop {
        let mut changed = false;
        for k in 0..n.saturating_sub(1) {
            changed |= red.sweep(k, &mut trace, opts);
        }
        if !changed {
            break;
        }
    }
    let snap = red.snapshot();
    trace.size_after = snap.gens.iter().map(Vec::len).sum();
    let out = FilteredComplex::from_parts(red.ring, triple, c_plus, c_minus, n_components, min_degree, snap.gens, snap.diff);
    (out, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::build_complex;
    use crate::exactalg::{CoefficientRing, Integers, PrimeField, Rationals};
    use crate::frobenius::{FrobeniusSystem, TheoryTriple};
    use crate::linkio::{parse_braid, LinkDiagram};

    #[test]
    fn unknot_unchanged() {
        let t = TheoryTriple::from_ints(CoefficientRing::Rationals, 0, 1).unwrap();
        let s = FrobeniusSystem::for_triple(Rationals, &t).unwrap();
        let c = build_complex(&LinkDiagram::unknot(), &t, &s).unwrap();
        let (r, trace) = reduce_complex(&c);
        assert_eq!(r.total_rank(), 2);
        assert!(trace.eliminations.is_empty());
    }

    #[test]
    fn reidemeister_two_collapses() {
        let t = TheoryTriple::from_ints(CoefficientRing::Rationals, 0, 0).unwrap();
        let s = FrobeniusSystem::for_triple(Rationals, &t).unwrap();
        // σ1 σ1^{-1} σ1 closes to an unknot; σ1 σ1^{-1} alone is a 2-component unlink.
        let d = parse_braid(&[1, -1, 1], 2).unwrap();
        assert_eq!(d.n_components(), 1);
        let c = build_complex(&d, &t, &s).unwrap();
        let (r, trace) = reduce_complex_with(&c, ReduceOptions { check_each_step: true });
        assert_eq!(r.total_rank(), 2);
        let mut qs: Vec<i64> = r.generators(0).iter().map(|g| g.q).collect();
        qs.sort();
        assert_eq!(qs, vec![-1, 1]);
        assert_eq!(trace.size_before, c.total_rank());
        assert_eq!(trace.size_after, 2);
        assert!(r.is_filtered());
    }

    #[test]
    fn q_raising_entries_survive() {
        let t = TheoryTriple::from_ints(CoefficientRing::Rationals, 0, 1).unwrap();
        let s = FrobeniusSystem::for_triple(Rationals, &t).unwrap();
        let d = parse_braid(&[1, -1, 1], 2).unwrap();
        let (r, trace) = reduce_complex(&build_complex(&d, &t, &s).unwrap());
        assert!(r.total_rank() >= 2);
        assert!(r.is_filtered());
        assert!(r.d_squared_is_zero());
        assert!(trace.eliminations.iter().all(|(_, a, b)| a.q == b.q));
    }

    #[test]
    fn bar_natan_trefoil_reduces() {
        let f2 = PrimeField::new(2).unwrap();
        let t = TheoryTriple::from_ints(CoefficientRing::PrimeField(2), 1, 0).unwrap();
        let s = FrobeniusSystem::for_triple(f2, &t).unwrap();
        let d = parse_braid(&[1, 1, 1], 2).unwrap();
        let (r, _) = reduce_complex_with(&build_complex(&d, &t, &s).unwrap(), ReduceOptions { check_each_step: true });
        assert!(r.d_squared_is_zero());
        assert!(r.is_filtered());
        assert!(r.total_rank() >= 2);
    }

    #[test]
    fn integral_pivots_are_units() {
        let t = TheoryTriple::from_ints(CoefficientRing::Integers, 0, 0).unwrap();
        let s = FrobeniusSystem::for_triple(Integers, &t).unwrap();
        let d = parse_braid(&[1, 1, 1], 2).unwrap();
        let c = build_complex(&d, &t, &s).unwrap();
        let (r, trace) = reduce_complex_with(&c, ReduceOptions { check_each_step: true });
        assert!(r.d_squared_is_zero());
        assert!(trace.eliminations.iter().all(|(_, a, b)| a.q == b.q));
        // Integral Khovanov homology of the trefoil has a Z/2, which needs a
        // surviving entry ±2.
        assert!(r.total_rank() > 4);
    }
}
