//! The s-invariant of a knot under any theory whose algebra splits,
//! canonical cycles, and verification harnesses comparing theories.

mod canonical;
mod twist;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{CoefficientRing, Integers, Ring};
use crate::frobenius::TheoryTriple;
use crate::homology::{
    complex_for, integral_degree_profile, profile_with_representatives, rationalize, ComputeOptions, ProfileStep,
};
use crate::linkio::{connected_sum, LinkDiagram};

pub use canonical::{canonical_generators, CanonicalGenerator, CanonicalSet};
pub use twist::{verify_twist_equivalence, TwistReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SReport {
    pub diagram: String,
    pub triple: TheoryTriple,
    pub s_min: i64,
    pub s_max: i64,
    pub s: i64,
    /// `s_max - s_min`; observed to be 2, never assumed.
    pub gap: i64,
}

/// Degree-0 profile; over `Z`, that of the torsion-free part.
pub fn degree_zero_profile(d: &LinkDiagram, triple: &TheoryTriple, opts: ComputeOptions) -> Result<Vec<ProfileStep>> {
    match triple.ring() {
        CoefficientRing::Integers => {
            let c = complex_for(Integers, d, triple, opts)?;
            let q = rationalize(&c);
            Ok(integral_degree_profile(&c, &q, 0)?.0)
        }
        ring => crate::with_ring!(ring, |r| {
            let c = complex_for(r, d, triple, opts)?;
            Ok(profile_with_representatives(&c, 0)?.0)
        }),
    }
}

/// `s_min` and `s_max` are where the degree-0 profile drops from 2 and
/// from 1 (or both at once); `s` is their mean.
pub fn s_invariant(d: &LinkDiagram, triple: &TheoryTriple, opts: ComputeOptions) -> Result<SReport> {
    if !d.is_knot() {
        return Err(Error::NotAKnot(d.n_components()));
    }
    triple.require_gamma()?;
    s_from_profile(d, triple, &degree_zero_profile(d, triple, opts)?)
}

/// Read `s` off an already computed degree-0 profile of a knot.
pub fn s_from_profile(d: &LinkDiagram, triple: &TheoryTriple, steps: &[ProfileStep]) -> Result<SReport> {
    if !d.is_knot() {
        return Err(Error::NotAKnot(d.n_components()));
    }
    triple.require_gamma()?;
    let (Some(first), Some(last)) = (steps.first(), steps.last()) else {
        return Err(Error::UnexpectedProfile(format!("degree 0 homology vanishes for {triple}")));
    };
    if first.dim != 2 {
        return Err(Error::UnexpectedProfile(format!("degree 0 has dimension {} for {triple}", first.dim)));
    }
    let (s_min, s_max) = (first.q, last.q);
    if (s_min + s_max) % 2 != 0 {
        return Err(Error::UnexpectedProfile(format!("s_min + s_max = {} is odd for {triple}", s_min + s_max)));
    }
    Ok(SReport { diagram: d.to_string(), triple: triple.clone(), s_min, s_max, s: (s_min + s_max) / 2, gap: s_max - s_min })
}

/// The hypothesis checked, a non-zero square root of `h^2 + 4t`, and the
/// alternative reading with `h^2 + t`; both are recorded with every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReadings {
    pub used: &'static str,
    pub variant: &'static str,
}

pub const READINGS: HypothesisReadings =
    HypothesisReadings { used: "h^2 + 4t = gamma^2 with gamma != 0", variant: "h^2 + t = gamma^2 with gamma != 0" };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntryStatus {
    Ok,
    HypothesisViolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremEntry {
    pub triple: TheoryTriple,
    pub status: EntryStatus,
    pub s_min: Option<i64>,
    pub s_max: Option<i64>,
    pub s: Option<i64>,
    /// Whether `h^2 + t` is a non-zero square in the ring.
    pub variant_reading_holds: bool,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub diagram: String,
    pub entries: Vec<TheoremEntry>,
    /// The common value when every admissible triple agrees.
    pub s: Option<i64>,
    pub pass: bool,
    pub hypothesis: HypothesisReadings,
}

/// `h^2 + t` is a non-zero square in the triple's ring.
fn variant_reading_holds(triple: &TheoryTriple) -> bool {
    let v = triple.h() * triple.h() + triple.t();
    crate::with_ring!(triple.ring(), |r| r.from_rational(&v).and_then(|x| r.sqrt(&x)).is_some_and(|g| !r.is_zero(&g)))
}

/// Compute `s` under every triple. Triples without a usable `γ` are
/// reported as violating the hypothesis, not computed. Passes when at least
/// one triple is admissible and all admissible values agree.
pub fn verify_main_theorem(d: &LinkDiagram, triples: &[TheoryTriple], opts: ComputeOptions) -> Result<TheoremReport> {
    if !d.is_knot() {
        return Err(Error::NotAKnot(d.n_components()));
    }
    let entries = triples
        .par_iter()
        .map(|t| {
            let variant = variant_reading_holds(t);
            match s_invariant(d, t, opts) {
                Ok(r) => Ok(TheoremEntry {
                    triple: t.clone(),
                    status: EntryStatus::Ok,
                    s_min: Some(r.s_min),
                    s_max: Some(r.s_max),
                    s: Some(r.s),
                    variant_reading_holds: variant,
                    message: None,
                }),
                Err(e @ Error::NotDiagonalizable(_)) => Ok(TheoremEntry {
                    triple: t.clone(),
                    status: EntryStatus::HypothesisViolated,
                    s_min: None,
                    s_max: None,
                    s: None,
                    variant_reading_holds: variant,
                    message: Some(e.to_string()),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<i64> = entries.iter().filter_map(|e| e.s).collect();
    let pass = !values.is_empty() && values.iter().all(|&s| s == values[0]);
    Ok(TheoremReport { diagram: d.to_string(), s: pass.then(|| values[0]), entries, pass, hypothesis: READINGS })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub triple: TheoryTriple,
    pub s1: i64,
    pub s2: i64,
    pub s_sum: i64,
    pub additive: bool,
}

/// Compare `s(k1 # k2)` with `s(k1) + s(k2)`.
pub fn s_additivity_check(
    k1: &LinkDiagram,
    k2: &LinkDiagram,
    triple: &TheoryTriple,
    opts: ComputeOptions,
) -> Result<AdditivityReport> {
    let s1 = s_invariant(k1, triple, opts)?.s;
    let s2 = s_invariant(k2, triple, opts)?.s;
    let s_sum = s_invariant(&connected_sum(k1, k2), triple, opts)?.s;
    Ok(AdditivityReport { triple: triple.clone(), s1, s2, s_sum, additive: s_sum == s1 + s2 })
}
