use serde::Serialize;

use crate::cube::{build_complex_with, smooth, BuildOptions, FilteredComplex};
use crate::error::{Error, Result};
use crate::exactalg::{ColumnReducer, Insertion, Integers, Ring, SparseVec};
use crate::frobenius::{diagonal_basis, FrobeniusSystem, TheoryTriple};
use crate::homology::{homology_field, homology_integral, rationalize};
use crate::linkio::{LinkDiagram, Sign};

/// The cycle attached to one orientation of the link: the oriented
/// resolution with every circle labelled `α` or `β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalGenerator<E> {
    /// Per component (traced components first, then free loops).
    pub reversed: Vec<bool>,
    pub degree: i64,
    pub vertex: u64,
    /// Per circle of the resolution: `false` for `α`, `true` for `β`.
    pub circle_labels: Vec<bool>,
    /// Filtration degree of the cycle.
    pub q: i64,
    /// Coefficients on the generators of `degree`.
    pub cycle: SparseVec<E>,
}

/// All canonical generators of a diagram together with the unreduced
/// complex they live in.
#[derive(Clone, Debug)]
pub struct CanonicalSet<R: Ring> {
    pub complex: FilteredComplex<R>,
    pub generators: Vec<CanonicalGenerator<R::Elem>>,
    /// Rank of the span of their classes (over `Q` for integral rings).
    pub class_rank: usize,
    /// Homology dimension (free rank over `Z`).
    pub homology_dim: usize,
}

/// Smoothing that joins each incoming strand to an outgoing one.
pub(crate) fn oriented_resolution(d: &LinkDiagram, reversed: &[bool]) -> u64 {
    let mut v = 0u64;
    for (j, x) in d.crossings().iter().enumerate() {
        let comp = |slot: usize| d.edge(x.strands[slot]).expect("strand labels are edges").component;
        let under_in = if reversed[comp(0)] { 2 } else { 0 };
        let over_in = match (x.sign, reversed[comp(1)]) {
            (Sign::Positive, false) | (Sign::Negative, true) => 3,
            _ => 1,
        };
        // The 0-smoothing pairs slots (0,1) and (2,3).
        if matches!((under_in, over_in), (0, 1) | (2, 3)) {
            v |= 1 << j;
        }
    }
    v
}

/// Canonical generators for all `2^n` orientations. Each is checked to be a
/// cycle, and the rank of their classes is computed.
pub fn canonical_generators<R: Ring>(
    ring: R,
    d: &LinkDiagram,
    triple: &TheoryTriple,
    max_crossings: usize,
) -> Result<CanonicalSet<R>> {
    triple.require_gamma()?;
    let (alpha, beta) = diagonal_basis(&ring, triple)?;
    let sys = FrobeniusSystem::for_triple(ring.clone(), triple)?;
    let c = build_complex_with(d, triple, &sys, BuildOptions { max_crossings, verify: true })?;
    let colors = d.left_face_colors();
    let n = d.n_components();
    let traced = d.traced_components();
    if n > 20 {
        return Err(Error::BadInput(format!("{n} components give too many orientations")));
    }

    let mut generators = Vec::with_capacity(1 << n);
    for o in 0..1u64 << n {
        let reversed: Vec<bool> = (0..n).map(|k| o >> k & 1 == 1).collect();
        let v = oriented_resolution(d, &reversed);
        let vert = smooth(d, v);
        let mut circle_labels = Vec::with_capacity(vert.n_circles());
        let mut free = traced;
        for circle in &vert.circles {
            let label = match circle.first() {
                None => {
                    free += 1;
                    reversed[free - 1]
                }
                Some(_) => {
                    let side = |e: &u32| (colors[e] == 1) != reversed[d.edge(*e).expect("circle edges exist").component];
                    let first = side(&circle[0]);
                    if circle.iter().any(|e| side(e) != first) {
                        return Err(Error::VerificationFailed(format!("circle {circle:?} has inconsistent sides")));
                    }
                    first
                }
            };
            circle_labels.push(label);
        }
        let degree = v.count_ones() as i64 - d.c_minus() as i64;
        let mut cycle = Vec::new();
        for mask in 0..1u64 << circle_labels.len() {
            let mut coeff = ring.one();
            for (k, &is_beta) in circle_labels.iter().enumerate() {
                let e = if is_beta { &beta } else { &alpha };
                coeff = ring.mul(&coeff, e.coeff((mask >> k & 1) as usize));
            }
            if !ring.is_zero(&coeff) {
                let idx = c.index_of(degree, v, mask).expect("oriented resolution generators exist");
                cycle.push((idx, coeff));
            }
        }
        cycle.sort_unstable_by_key(|e| e.0);
        if !c.apply_boundary(degree, &cycle).is_empty() {
            return Err(Error::VerificationFailed(format!("canonical chain for orientation {reversed:?} is not a cycle")));
        }
        let q = c.q_of(degree, &cycle)?;
        generators.push(CanonicalGenerator { reversed, degree, vertex: v, circle_labels, q, cycle });
    }

    let (class_rank, homology_dim) = if ring.is_field() {
        let cycles: Vec<(i64, SparseVec<R::Elem>)> = generators.iter().map(|g| (g.degree, g.cycle.clone())).collect();
        (class_rank(&c, &cycles), homology_field(&c)?.total_rank())
    } else {
        let cz = c.map_ring(Integers, |v| Integers.from_rational(&ring.to_rational(v)).expect("integral entries"))?;
        let cq = rationalize(&cz);
        let cycles = generators
            .iter()
            .map(|g| (g.degree, g.cycle.iter().map(|(i, v)| (*i, ring.to_rational(v))).collect()))
            .collect::<Vec<_>>();
        (class_rank(&cq, &cycles), homology_integral(&cz).total_rank())
    };
    Ok(CanonicalSet { complex: c, generators, class_rank, homology_dim })
}

/// Rank of the span of the classes of the given cycles, over a field.
fn class_rank<R: Ring>(c: &FilteredComplex<R>, cycles: &[(i64, SparseVec<R::Elem>)]) -> usize {
    let mut total = 0;
    for i in c.degrees() {
        let mut red = ColumnReducer::new(c.ring());
        for col in c.boundary(i - 1).columns() {
            red.insert(col.clone());
        }
        for (_, z) in cycles.iter().filter(|(deg, _)| *deg == i) {
            if matches!(red.insert(z.clone()), Insertion::Independent) {
                total += 1;
            }
        }
    }
    total
}
