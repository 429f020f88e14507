//! Homology of filtered complexes: ranks over a field, Smith-form integral
//! homology with prime-power torsion, filtration profiles, and the
//! comparison of an integral theory with its reduction mod `p`.

mod profile;
mod uct;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cube::{build_complex_with, BuildOptions, FilteredComplex, DEFAULT_MAX_CROSSINGS};
use crate::error::{Error, Result};
use crate::exactalg::{prime_power_factors, rank, smith_normal_form, CoefficientRing, Integers, Ring};
use crate::frobenius::{FrobeniusSystem, TheoryTriple};
use crate::linkio::LinkDiagram;
use crate::reduce::reduce_complex;

pub(crate) use profile::filtered_kernel;
pub use profile::{
    filtration_profile, integral_degree_profile, integral_filtration_profile, primitive_integer_vector, profile_value_by_ranks,
    profile_with_representatives, rationalize, FiltrationProfile, LeveledCycle, ProfileStep,
};
pub use uct::{compare_uct, UctReport};

/// Homology in one degree. Over a field `rank` is the dimension; over `Z`
/// it is the free rank and `torsion` lists prime-power cyclic orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomologyResult {
    pub triple: TheoryTriple,
    /// Only degrees with non-zero homology.
    pub degrees: BTreeMap<i64, DegreeHomology>,
}

impl HomologyResult {
    pub fn rank(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, |h| h.rank)
    }

    pub fn torsion(&self, degree: i64) -> &[u64] {
        self.degrees.get(&degree).map_or(&[], |h| h.torsion.as_slice())
    }

    pub fn total_rank(&self) -> usize {
        self.degrees.values().map(|h| h.rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.values().any(|h| !h.torsion.is_empty())
    }
}

/// `dim H^i = n_i - rank ∂_i - rank ∂_{i-1}`.
pub fn homology_field<R: Ring>(c: &FilteredComplex<R>) -> Result<HomologyResult> {
    let ring = c.ring();
    if !ring.is_field() {
        return Err(Error::RingNotField);
    }
    let ranks: BTreeMap<i64, usize> = c.degrees().map(|i| Ok((i, rank(ring, &c.boundary(i))?))).collect::<Result<_>>()?;
    let mut degrees = BTreeMap::new();
    for i in c.degrees() {
        let r = c.rank(i) - ranks[&i] - ranks.get(&(i - 1)).copied().unwrap_or(0);
        if r > 0 {
            degrees.insert(i, DegreeHomology { rank: r, torsion: Vec::new() });
        }
    }
    Ok(HomologyResult { triple: c.triple().clone(), degrees })
}

/// Free ranks from Smith ranks; invariant factors `d > 1` of `∂_{i-1}`
/// become torsion `Z/d` in degree `i`.
pub fn homology_integral(c: &FilteredComplex<Integers>) -> HomologyResult {
    let smith: BTreeMap<i64, _> = c.degrees().map(|i| (i, smith_normal_form(&c.boundary(i)))).collect();
    let mut degrees = BTreeMap::new();
    for i in c.degrees() {
        let incoming = smith.get(&(i - 1));
        let r = c.rank(i) - smith[&i].rank() - incoming.map_or(0, |s| s.rank());
        let mut torsion: Vec<u64> = incoming.into_iter().flat_map(|s| s.torsion().flat_map(prime_power_factors)).collect();
        torsion.sort_unstable();
        if r > 0 || !torsion.is_empty() {
            degrees.insert(i, DegreeHomology { rank: r, torsion });
        }
    }
    HomologyResult { triple: c.triple().clone(), degrees }
}

/// Pipeline settings shared by the high-level entry points.
#[derive(Clone, Copy, Debug)]
pub struct ComputeOptions {
    pub reduce: bool,
    pub max_crossings: usize,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions { reduce: true, max_crossings: DEFAULT_MAX_CROSSINGS }
    }
}

/// Build the untwisted complex of `d` for `triple`, reduced if asked.
pub fn complex_for<R: Ring>(ring: R, d: &LinkDiagram, triple: &TheoryTriple, opts: ComputeOptions) -> Result<FilteredComplex<R>> {
    let sys = FrobeniusSystem::for_triple(ring, triple)?;
    let build = BuildOptions { max_crossings: opts.max_crossings, verify: !opts.reduce };
    let c = build_complex_with(d, triple, &sys, build)?;
    Ok(if opts.reduce { reduce_complex(&c).0 } else { c })
}

/// Homology and filtration profile of a diagram for one theory. Over `Z`
/// the profile is that of the free part.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analysis {
    pub homology: HomologyResult,
    pub profile: FiltrationProfile,
    /// Generators after the optional reduction.
    pub complex_size: usize,
}

pub fn analyze(d: &LinkDiagram, triple: &TheoryTriple, opts: ComputeOptions) -> Result<Analysis> {
    match triple.ring() {
        CoefficientRing::Integers => {
            let c = complex_for(Integers, d, triple, opts)?;
            Ok(Analysis {
                homology: homology_integral(&c),
                profile: integral_filtration_profile(&c)?,
                complex_size: c.total_rank(),
            })
        }
        ring => crate::with_ring!(ring, |r| {
            let c = complex_for(r, d, triple, opts)?;
            Ok(Analysis { homology: homology_field(&c)?, profile: filtration_profile(&c)?, complex_size: c.total_rank() })
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};
    use crate::linkio::{parse_braid, parse_pd};

    fn triple(ring: CoefficientRing, h: i64, t: i64) -> TheoryTriple {
        TheoryTriple::from_ints(ring, h, t).unwrap()
    }

    fn raw(reduce: bool) -> ComputeOptions {
        ComputeOptions { reduce, ..Default::default() }
    }

    #[test]
    fn unknot_lee_profile() {
        let t = triple(CoefficientRing::Rationals, 0, 1);
        let a = analyze(&LinkDiagram::unknot(), &t, raw(false)).unwrap();
        assert_eq!(a.homology.rank(0), 2);
        assert_eq!(a.profile.steps(0), &[ProfileStep { q: -1, dim: 2 }, ProfileStep { q: 1, dim: 1 }]);
    }

    #[test]
    fn khovanov_trefoil_ranks() {
        // Right-handed trefoil: Kh over Q has rank 1 in degrees 0, 2, 3 and 1
        // more in degree 0; total 4.
        let d = parse_braid(&[1, 1, 1], 2).unwrap();
        let t = triple(CoefficientRing::Rationals, 0, 0);
        let h = analyze(&d, &t, raw(false)).unwrap().homology;
        let ranks: Vec<(i64, usize)> = h.degrees.iter().map(|(i, x)| (*i, x.rank)).collect();
        assert_eq!(ranks, vec![(0, 2), (2, 1), (3, 1)]);
    }

    #[test]
    fn integral_trefoil_torsion() {
        let d = parse_braid(&[1, 1, 1], 2).unwrap();
        let t = triple(CoefficientRing::Integers, 0, 0);
        for reduce in [false, true] {
            let h = analyze(&d, &t, raw(reduce)).unwrap().homology;
            assert_eq!(h.torsion(3), &[2]);
            assert!(h.degrees.iter().all(|(i, x)| *i == 3 || x.torsion.is_empty()));
            assert_eq!(h.total_rank(), 4);
        }
    }

    #[test]
    fn reduction_preserves_homology_and_profile() {
        let d = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]").unwrap();
        for t in [
            triple(CoefficientRing::Rationals, 0, 1),
            triple(CoefficientRing::PrimeField(2), 1, 0),
            triple(CoefficientRing::PrimeField(3), 0, 0),
        ] {
            let a = analyze(&d, &t, raw(false)).unwrap();
            let b = analyze(&d, &t, raw(true)).unwrap();
            assert_eq!(a.homology, b.homology, "{t}");
            assert_eq!(a.profile, b.profile, "{t}");
            assert!(b.complex_size <= a.complex_size);
        }
    }

    #[test]
    fn profile_matches_rank_formula() {
        let d = parse_braid(&[1, 1, 1], 2).unwrap();
        let t = triple(CoefficientRing::Rationals, 0, 1);
        let c = complex_for(Rationals, &d, &t, raw(false)).unwrap();
        let p = filtration_profile(&c).unwrap();
        for i in c.degrees() {
            for q in -2..=12 {
                assert_eq!(p.value(i, q), profile_value_by_ranks(&c, i, q).unwrap(), "degree {i}, q {q}");
            }
        }
    }

    #[test]
    fn field_homology_rejects_integers() {
        let t = triple(CoefficientRing::Integers, 0, 1);
        let c = complex_for(Integers, &LinkDiagram::unknot(), &t, raw(false)).unwrap();
        assert_eq!(homology_field(&c), Err(Error::RingNotField));
        let f = PrimeField::new(2).unwrap();
        let t = triple(CoefficientRing::PrimeField(2), 1, 0);
        assert!(homology_field(&complex_for(f, &LinkDiagram::unknot(), &t, raw(false)).unwrap()).is_ok());
    }
}
