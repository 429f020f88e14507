//! Smith normal form over the integers.
//!
//! Unit entries are eliminated first on the sparse representation (each
//! contributes an invariant factor of one without touching the rest of the
//! divisibility structure); the remaining block is diagonalised densely by
//! repeatedly pivoting on the entry of smallest absolute value.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ring::Integers;
use super::sparse::{axpy, SparseMatrix, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    /// Non-zero invariant factors `d1 | d2 | ...`, all positive.
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one())
    }
}

pub fn smith_normal_form(m: &SparseMatrix<BigInt>) -> SmithForm {
    let (units, rest) = eliminate_units(m);
    let mut diagonal = vec![BigInt::one(); units];
    let mut dense = rest;
    diagonal.extend(dense_smith(&mut dense, None, None));
    SmithForm { diagonal }
}

/// Unimodular `U`, `V` (dense) with `U * m * V` diagonal, alongside the
/// Smith form. Intended for small matrices.
pub fn smith_normal_form_with_transforms(m: &SparseMatrix<BigInt>) -> (SmithForm, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut a = m.to_dense(&Integers);
    let mut u = identity(m.n_rows());
    let mut v = identity(m.n_cols());
    let diagonal = dense_smith(&mut a, Some(&mut u), Some(&mut v));
    (SmithForm { diagonal }, u, v)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Removes unit pivots; returns their count and the residual dense block
/// over the rows and columns that still carry entries.
fn eliminate_units(m: &SparseMatrix<BigInt>) -> (usize, Vec<Vec<BigInt>>) {
    let z = Integers;
    let mut rows: Vec<SparseVec<BigInt>> = vec![Vec::new(); m.n_rows()];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.n_cols()];
    for (r, c, v) in m.iter() {
        rows[r].push((c, v.clone()));
        col_rows[c].insert(r);
    }
    let mut queue: BTreeSet<(usize, usize)> =
        col_rows.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(c, s)| (s.len(), c)).collect();
    let mut units = 0;

    let entry = |rows: &[SparseVec<BigInt>], r: usize, c: usize| -> BigInt {
        let row = &rows[r];
        row[row.binary_search_by_key(&c, |e| e.0).expect("membership is exact")].1.clone()
    };

    loop {
        // Cheapest column holding a unit, then its shortest unit row.
        let mut choice = None;
        for &(_, c) in &queue {
            let best = col_rows[c].iter().filter(|&&r| entry(&rows, r, c).abs().is_one()).min_by_key(|&&r| (rows[r].len(), r));
            if let Some(&r) = best {
                choice = Some((r, c));
                break;
            }
        }
        let Some((pr, pc)) = choice else { break };
        let prow = std::mem::take(&mut rows[pr]);
        let pval = prow[prow.binary_search_by_key(&pc, |e| e.0).unwrap()].1.clone();
        let touched: BTreeSet<usize> = prow.iter().map(|e| e.0).collect();
        for c in &touched {
            queue.remove(&(col_rows[*c].len(), *c));
        }
        for (j, _) in &prow {
            col_rows[*j].remove(&pr);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in others {
            let old = std::mem::take(&mut rows[r]);
            let a = entry(std::slice::from_ref(&old), 0, pc);
            // pval is +-1, so a / pval = a * pval.
            let factor = -(a * &pval);
            let new = axpy(&z, &factor, &prow, &old);
            for (j, _) in &prow {
                if new.binary_search_by_key(j, |e| e.0).is_ok() {
                    col_rows[*j].insert(r);
                } else {
                    col_rows[*j].remove(&r);
                }
            }
            rows[r] = new;
        }
        for c in touched {
            if !col_rows[c].is_empty() {
                queue.insert((col_rows[c].len(), c));
            }
        }
        units += 1;
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..col_rows.len()).filter(|&c| !col_rows[c].is_empty()).collect();
    let col_pos: std::collections::HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense = live_rows
        .iter()
        .map(|&r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (c, v) in &rows[r] {
                row[col_pos[c]] = v.clone();
            }
            row
        })
        .collect();
    (units, dense)
}

/// In-place dense Smith reduction; returns the positive invariant factors.
/// Row operations are mirrored into `u`, column operations into `v`.
fn dense_smith(a: &mut [Vec<BigInt>], mut u: Option<&mut Vec<Vec<BigInt>>>, mut v: Option<&mut Vec<Vec<BigInt>>>) -> Vec<BigInt> {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();

    // Elementary operations, recorded into the transforms when requested.
    fn row_axpy(a: &mut [Vec<BigInt>], u: &mut Option<&mut Vec<Vec<BigInt>>>, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for k in 0..a[dst].len() {
            let t = &a[src][k] * f;
            a[dst][k] -= t;
        }
        if let Some(u) = u.as_deref_mut() {
            for k in 0..u[dst].len() {
                let t = &u[src][k] * f;
                u[dst][k] -= t;
            }
        }
    }
    fn col_axpy(a: &mut [Vec<BigInt>], v: &mut Option<&mut Vec<Vec<BigInt>>>, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for row in a.iter_mut() {
            let t = &row[src] * f;
            row[dst] -= t;
        }
        if let Some(v) = v.as_deref_mut() {
            for row in v.iter_mut() {
                let t = &row[src] * f;
                row[dst] -= t;
            }
        }
    }
    fn swap_rows(a: &mut [Vec<BigInt>], u: &mut Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
        a.swap(i, j);
        if let Some(u) = u.as_deref_mut() {
            u.swap(i, j);
        }
    }
    fn swap_cols(a: &mut [Vec<BigInt>], v: &mut Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = v.as_deref_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    for t in 0..n_rows.min(n_cols) {
        let smallest = |a: &[Vec<BigInt>]| {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = smallest(a) else { break };
        swap_rows(a, &mut u, t, pi);
        swap_cols(a, &mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..n_rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_axpy(a, &mut u, i, t, &q);
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..n_cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(a, &mut v, j, t, &q);
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                let (pi, pj) = smallest(a).expect("pivot row or column still non-zero");
                swap_rows(a, &mut u, t, pi);
                swap_cols(a, &mut v, t, pj);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let bad = (t + 1..n_rows)
                .flat_map(|i| (t + 1..n_cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t]));
            match bad {
                Some((i, _)) => row_axpy(a, &mut u, t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        diag.push(a[t][t].clone());
    }
    diag
}

/// Prime-power decomposition of `n > 1` by trial division, ascending.
pub fn prime_power_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs().to_u64().expect("torsion order fits in u64");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SparseMatrix<BigInt> {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        SparseMatrix::from_dense(&Integers, &rows)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(smith_normal_form(&m(&[&[1, 2], &[3, 4]])).diagonal, ints(&[1, 2]));
        let zero = smith_normal_form(&m(&[&[0, 0], &[0, 0]]));
        assert!(zero.diagonal.is_empty());
        assert_eq!(zero.rank(), 0);
        assert_eq!(smith_normal_form(&m(&[&[2, 0], &[0, 2]])).diagonal, ints(&[2, 2]));
    }

    #[test]
    fn divisibility_is_enforced() {
        assert_eq!(smith_normal_form(&m(&[&[2, 0], &[0, 3]])).diagonal, ints(&[1, 6]));
        assert_eq!(smith_normal_form(&m(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]])).diagonal, ints(&[2, 2, 60]));
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (snf, u, v) = smith_normal_form_with_transforms(&a);
        assert_eq!(snf.diagonal, ints(&[2, 6, 12]));
        let ua = SparseMatrix::from_dense(&Integers, &u).mul(&Integers, &a).unwrap();
        let uav = ua.mul(&Integers, &SparseMatrix::from_dense(&Integers, &v)).unwrap();
        for (r, c, x) in uav.iter() {
            assert_eq!(r, c);
            assert_eq!(x, &snf.diagonal[r]);
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_factors(&BigInt::from(12)), vec![3, 4]);
        assert_eq!(prime_power_factors(&BigInt::from(2)), vec![2]);
        assert_eq!(prime_power_factors(&BigInt::from(-25)), vec![25]);
    }
}
