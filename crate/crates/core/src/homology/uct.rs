use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{is_prime, CoefficientRing, Integers, PrimeField, Ring};
use crate::frobenius::TheoryTriple;
use crate::linkio::LinkDiagram;

use super::{
    complex_for, filtration_profile, homology_field, homology_integral, integral_filtration_profile, ComputeOptions,
    FiltrationProfile, HomologyResult,
};

/// Integral theory against its reduction mod `p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UctReport {
    pub p: u64,
    pub integral: HomologyResult,
    pub mod_p: HomologyResult,
    pub integral_profile: FiltrationProfile,
    pub mod_p_profile: FiltrationProfile,
    /// Profile of the (reduced) integral complex tensored with `F_p`.
    pub tensored_profile: FiltrationProfile,
    /// `h, t` given as integers already lying in `[0, p)`.
    pub scalars_below_p: bool,
    /// Degrees whose `F_p` dimension differs from the integral free rank.
    pub rank_mismatches: Vec<i64>,
    /// Degrees with a `p`-power torsion summand.
    pub p_torsion_degrees: Vec<i64>,
    pub profiles_agree: bool,
    /// No `p`-torsion, equal ranks and equal profiles.
    pub holds: bool,
}

/// Compare `U_{h,t}(L; Z)` with `U_{h,t}(L; F_p)` computed from scratch.
/// Requires `γ` to exist over `Z` and be non-zero mod `p`.
pub fn compare_uct(d: &LinkDiagram, triple: &TheoryTriple, p: u64, opts: ComputeOptions) -> Result<UctReport> {
    if triple.ring() != CoefficientRing::Integers {
        return Err(Error::InvalidTheory(format!("{triple} is not an integral theory")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if triple.discriminant().is_zero() {
        return Err(Error::GammaVanishesModP { gamma: "0".into(), p });
    }
    let gamma = triple.require_gamma()?;
    if triple.gamma_vanishes_mod(p) {
        return Err(Error::GammaVanishesModP { gamma: gamma.to_string(), p });
    }
    let field = PrimeField::new(p)?;
    let fp_triple = triple.in_ring(field.descriptor())?;

    let cz = complex_for(Integers, d, triple, opts)?;
    let integral = homology_integral(&cz);
    let integral_profile = integral_filtration_profile(&cz)?;
    let tensored = cz.map_ring(field, |v| field.from_int(v))?;
    let tensored_profile = filtration_profile(&tensored)?;

    let cp = complex_for(field, d, &fp_triple, opts)?;
    let mod_p = homology_field(&cp)?;
    let mod_p_profile = filtration_profile(&cp)?;

    let degrees: BTreeSet<i64> = integral.degrees.keys().chain(mod_p.degrees.keys()).copied().collect();
    let rank_mismatches: Vec<i64> = degrees.into_iter().filter(|&i| integral.rank(i) != mod_p.rank(i)).collect();
    let p_torsion_degrees: Vec<i64> =
        integral.degrees.iter().filter(|(_, h)| h.torsion.iter().any(|&n| n % p == 0)).map(|(i, _)| *i).collect();
    let profiles_agree = integral_profile == mod_p_profile && tensored_profile == mod_p_profile;
    let below = |v: &num_rational::BigRational| {
        let n: BigInt = v.to_integer();
        !n.is_negative() && n.to_u64().is_some_and(|n| n < p)
    };
    let holds = rank_mismatches.is_empty() && p_torsion_degrees.is_empty() && profiles_agree;
    Ok(UctReport {
        p,
        integral,
        mod_p,
        integral_profile,
        mod_p_profile,
        tensored_profile,
        scalars_below_p: below(triple.h()) && below(triple.t()),
        rank_mismatches,
        p_torsion_degrees,
        profiles_agree,
        holds,
    })
}
