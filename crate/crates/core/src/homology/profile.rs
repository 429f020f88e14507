use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cube::FilteredComplex;
use crate::error::{Error, Result};
use crate::exactalg::{ColumnReducer, Insertion, Integers, Rationals, Ring, SparseMatrix, SparseVec};

/// One change point of `q -> dim im(H(F_q C) -> H(C))`: the value at `q`,
/// which differs from the value at `q + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProfileStep {
    pub q: i64,
    pub dim: usize,
}

/// Filtration profile of every degree. Each step list is sorted by `q`
/// ascending with strictly decreasing `dim`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FiltrationProfile {
    pub degrees: BTreeMap<i64, Vec<ProfileStep>>,
}

impl FiltrationProfile {
    pub fn steps(&self, degree: i64) -> &[ProfileStep] {
        self.degrees.get(&degree).map_or(&[], Vec::as_slice)
    }

    /// `dim im(H^degree(F_q C) -> H^degree(C))`.
    pub fn value(&self, degree: i64, q: i64) -> usize {
        self.steps(degree).iter().find(|s| s.q >= q).map_or(0, |s| s.dim)
    }

    /// Total homology dimension in a degree.
    pub fn total(&self, degree: i64) -> usize {
        self.steps(degree).first().map_or(0, |s| s.dim)
    }
}

/// A homology class representative with its filtration level.
#[derive(Clone, Debug)]
pub struct LeveledCycle<E> {
    pub level: i64,
    pub cycle: SparseVec<E>,
}

/// Kernel of `∂_i` adapted to the filtration: processing generators by `q`
/// descending, each dependency among the images gives a cycle whose lowest
/// generator has the current `q`. The cycles with level `>= q` span
/// `ker ∂ ∩ F_q`.
pub(crate) fn filtered_kernel<R: Ring>(c: &FilteredComplex<R>, degree: i64) -> Vec<LeveledCycle<R::Elem>> {
    let ring = c.ring();
    let gens = c.generators(degree);
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&g| (std::cmp::Reverse(gens[g].q), g));
    let d = c.boundary(degree);
    let mut red = ColumnReducer::with_history(ring);
    let mut out = Vec::new();
    for &g in &order {
        if let Insertion::Dependent(rel) = red.insert(d.column(g).to_vec()) {
            let mut cycle: SparseVec<R::Elem> = rel.into_iter().map(|(j, v)| (order[j], v)).collect();
            cycle.sort_unstable_by_key(|e| e.0);
            out.push(LeveledCycle { level: gens[g].q, cycle });
        }
    }
    out
}

/// Cycles representing a basis of `H^degree`, with their `s`-levels, such
/// that for every `q` those of level `>= q` span the image of
/// `H(F_q C)`. Returns the steps as well.
pub fn profile_with_representatives<R: Ring>(
    c: &FilteredComplex<R>,
    degree: i64,
) -> Result<(Vec<ProfileStep>, Vec<LeveledCycle<R::Elem>>)> {
    let ring = c.ring();
    if !ring.is_field() {
        return Err(Error::RingNotField);
    }
    let kernel = filtered_kernel(c, degree);
    let mut red = ColumnReducer::new(ring);
    if let Some(prev) = c.boundary_ref(degree - 1) {
        for col in prev.columns() {
            red.insert(col.clone());
        }
    }
    let mut reps = Vec::new();
    for z in kernel {
        if matches!(red.insert(z.cycle.clone()), Insertion::Independent) {
            reps.push(z);
        }
    }
    Ok((steps_from_levels(reps.iter().map(|z| z.level)), reps))
}

/// Change points of `q -> #{levels >= q}`.
pub(crate) fn steps_from_levels(levels: impl IntoIterator<Item = i64>) -> Vec<ProfileStep> {
    let mut count: BTreeMap<i64, usize> = BTreeMap::new();
    for l in levels {
        *count.entry(l).or_insert(0) += 1;
    }
    let mut acc = 0;
    let mut steps: Vec<ProfileStep> = count
        .into_iter()
        .rev()
        .map(|(q, n)| {
            acc += n;
            ProfileStep { q, dim: acc }
        })
        .collect();
    steps.reverse();
    steps
}

/// Profiles of every degree of a complex over a field.
pub fn filtration_profile<R: Ring>(c: &FilteredComplex<R>) -> Result<FiltrationProfile> {
    let mut degrees = BTreeMap::new();
    for i in c.degrees() {
        let (steps, _) = profile_with_representatives(c, i)?;
        if !steps.is_empty() {
            degrees.insert(i, steps);
        }
    }
    Ok(FiltrationProfile { degrees })
}

/// The same complex with coefficients in `Q`.
pub fn rationalize(c: &FilteredComplex<Integers>) -> FilteredComplex<Rationals> {
    c.map_ring(Rationals, |v| BigRational::from_integer(v.clone())).expect("integral triples are rational")
}

/// Divide out the content of a rational vector, giving a primitive integer
/// vector with positive leading coefficient.
pub fn primitive_integer_vector(v: &[(usize, BigRational)]) -> Vec<(usize, BigInt)> {
    let lcm = v.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let ints: Vec<(usize, BigInt)> = v.iter().map(|(i, x)| (*i, (x * &lcm).to_integer())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.first().is_some_and(|(_, x)| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|(i, x)| (i, x / &g * &sign)).collect()
}

/// Profile of the torsion-free part of integral homology in one degree,
/// read over `Q` with content-normalised integral cycle representatives.
/// Each representative is checked to be an integral cycle of its level.
pub fn integral_degree_profile(
    c: &FilteredComplex<Integers>,
    rational: &FilteredComplex<Rationals>,
    degree: i64,
) -> Result<(Vec<ProfileStep>, Vec<LeveledCycle<BigInt>>)> {
    let (steps, reps) = profile_with_representatives(rational, degree)?;
    let mut out = Vec::with_capacity(reps.len());
    for z in reps {
        let w = primitive_integer_vector(&z.cycle);
        if c.q_of(degree, &w)? != z.level || !c.apply_boundary(degree, &w).is_empty() {
            return Err(Error::UnexpectedProfile(format!(
                "normalised representative in degree {degree} is not an integral cycle of level {}",
                z.level
            )));
        }
        out.push(LeveledCycle { level: z.level, cycle: w });
    }
    Ok((steps, out))
}

/// [`integral_degree_profile`] in every degree.
pub fn integral_filtration_profile(c: &FilteredComplex<Integers>) -> Result<FiltrationProfile> {
    let q = rationalize(c);
    let mut degrees = BTreeMap::new();
    for i in q.degrees() {
        let (steps, _) = integral_degree_profile(c, &q, i)?;
        if !steps.is_empty() {
            degrees.insert(i, steps);
        }
    }
    Ok(FiltrationProfile { degrees })
}

/// `dim im(H(F_q) -> H)` by the stacked-rank formula, for cross-checking:
/// `rank [Z_q | B] - rank B` with `Z_q` a basis of `ker ∂ ∩ F_q`.
pub fn profile_value_by_ranks<R: Ring>(c: &FilteredComplex<R>, degree: i64, q: i64) -> Result<usize> {
    let ring = c.ring();
    let n = c.rank(degree);
    let z_q: Vec<SparseVec<R::Elem>> = filtered_kernel(c, degree).into_iter().filter(|z| z.level >= q).map(|z| z.cycle).collect();
    let b = c.boundary(degree - 1);
    let zt = SparseMatrix::from_columns(n, z_q).transpose();
    let bt = b.transpose();
    let stacked = crate::exactalg::rank_stacked(ring, &zt, &bt)?;
    Ok(stacked - crate::exactalg::rank(ring, &bt)?)
}
