use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{CoefficientRing, PrimeField, Ring};
use crate::with_ring;

use super::{Element, FrobeniusSystem};

/// Named specializations of `(h, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theory {
    Khovanov,
    Lee,
    BarNatan,
}

impl Theory {
    pub fn h_t(self) -> (i64, i64) {
        match self {
            Theory::Khovanov => (0, 0),
            Theory::Lee => (0, 1),
            Theory::BarNatan => (1, 0),
        }
    }

    /// Ring used when none is given: Q, except F_2 for Bar-Natan.
    pub fn default_ring(self) -> CoefficientRing {
        match self {
            Theory::BarNatan => CoefficientRing::PrimeField(2),
            _ => CoefficientRing::Rationals,
        }
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "khovanov" | "kh" => Ok(Theory::Khovanov),
            "lee" => Ok(Theory::Lee),
            "bar-natan" | "barnatan" | "bn" => Ok(Theory::BarNatan),
            other => Err(Error::InvalidTheory(format!("unknown theory {other:?}"))),
        }
    }
}

/// A coefficient ring with scalars `h, t` and, when the algebra splits as
/// `R x R`, a square root `γ` of `h^2 + 4t`.
///
/// Prime-field scalars are stored as representatives in `[0, p)`; integral
/// scalars must be integers. `γ` is present exactly when `x^2 - h x - t` has
/// two distinct roots in the ring: `γ != 0` with `γ^2 = h^2 + 4t` in odd or
/// zero characteristic, and `(h, t) = (1, 0)` in characteristic two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TheoryTriple {
    ring: CoefficientRing,
    h: BigRational,
    t: BigRational,
    gamma: Option<BigRational>,
}

fn normalize(ring: CoefficientRing, v: &BigRational) -> Result<BigRational> {
    match ring {
        CoefficientRing::Rationals => Ok(v.clone()),
        CoefficientRing::Integers => {
            if v.is_integer() {
                Ok(v.clone())
            } else {
                Err(Error::InvalidTheory(format!("{v} is not an integer")))
            }
        }
        CoefficientRing::PrimeField(p) => {
            let r = PrimeField::new(p as u64)?;
            let e = r.from_rational(v).ok_or_else(|| Error::InvalidTheory(format!("{v} has denominator divisible by {p}")))?;
            Ok(r.to_rational(&e))
        }
    }
}

impl TheoryTriple {
    /// Build a triple, deriving `γ` when the algebra splits.
    pub fn new(ring: CoefficientRing, h: BigRational, t: BigRational) -> Result<Self> {
        let h = normalize(ring, &h)?;
        let t = normalize(ring, &t)?;
        let gamma = find_gamma(ring, &h, &t);
        Ok(TheoryTriple { ring, h, t, gamma })
    }

    pub fn from_ints(ring: CoefficientRing, h: i64, t: i64) -> Result<Self> {
        Self::new(ring, BigRational::from_integer(h.into()), BigRational::from_integer(t.into()))
    }

    pub fn named(theory: Theory, ring: CoefficientRing) -> Self {
        let (h, t) = theory.h_t();
        Self::from_ints(ring, h, t).expect("small integers lie in every ring")
    }

    /// Build a triple with an explicit `γ`, which must satisfy the split
    /// condition.
    pub fn with_gamma(ring: CoefficientRing, h: BigRational, t: BigRational, gamma: BigRational) -> Result<Self> {
        let mut triple = Self::new(ring, h, t)?;
        let g = normalize(ring, &gamma)?;
        let valid = match ring.characteristic() {
            2 => triple.gamma.is_some() && g.is_one(),
            _ => {
                let sq = normalize(ring, &(&g * &g))?;
                !g.is_zero() && sq == triple.discriminant()
            }
        };
        if !valid {
            return Err(Error::NotDiagonalizable(format!("gamma = {gamma} is not a non-zero root of h^2 + 4t for {triple}")));
        }
        triple.gamma = Some(g);
        Ok(triple)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn h(&self) -> &BigRational {
        &self.h
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn gamma(&self) -> Option<&BigRational> {
        self.gamma.as_ref()
    }

    pub fn require_gamma(&self) -> Result<&BigRational> {
        self.gamma
            .as_ref()
            .ok_or_else(|| Error::NotDiagonalizable(format!("h^2 + 4t has no usable non-zero square root for {self}")))
    }

    /// `h^2 + 4t`, reduced into the ring.
    pub fn discriminant(&self) -> BigRational {
        let d = &self.h * &self.h + BigRational::from_integer(4.into()) * &self.t;
        normalize(self.ring, &d).expect("ring closed under ring operations")
    }

    /// `h` as a ring element; `ring` must match the descriptor.
    pub fn h_in<R: Ring>(&self, ring: &R) -> R::Elem {
        ring.from_rational(&self.h).expect("normalized on construction")
    }

    pub fn t_in<R: Ring>(&self, ring: &R) -> R::Elem {
        ring.from_rational(&self.t).expect("normalized on construction")
    }

    pub fn gamma_in<R: Ring>(&self, ring: &R) -> Option<R::Elem> {
        self.gamma.as_ref().map(|g| ring.from_rational(g).expect("normalized on construction"))
    }

    /// Whether `γ` is divisible by `p`, i.e. vanishes after reduction mod `p`.
    pub fn gamma_vanishes_mod(&self, p: u64) -> bool {
        match &self.gamma {
            None => true,
            Some(g) => g.numer().mod_floor(&BigInt::from(p)).is_zero(),
        }
    }

    /// Same `h, t` read in another ring.
    pub fn in_ring(&self, ring: CoefficientRing) -> Result<Self> {
        Self::new(ring, self.h.clone(), self.t.clone())
    }

    /// Parse `ring/h/t`, e.g. `fp:2/1/0` or `q/0/1`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split('/').collect();
        let [ring, h, t] = parts[..] else {
            return Err(Error::InvalidTheory(format!("expected ring/h/t, got {s:?}")));
        };
        let int = |v: &str| {
            v.trim()
                .parse::<BigInt>()
                .map(BigRational::from_integer)
                .map_err(|_| Error::InvalidTheory(format!("{v:?} is not an integer")))
        };
        Self::new(CoefficientRing::parse(ring)?, int(h)?, int(t)?)
    }

    /// The default verification panel.
    pub fn default_panel() -> Vec<TheoryTriple> {
        let f = |p| CoefficientRing::PrimeField(p);
        [
            (CoefficientRing::Rationals, 0, 1),
            (f(2), 1, 0),
            (f(3), 1, 0),
            (f(5), 0, 1),
            (CoefficientRing::Integers, 0, 1),
            (CoefficientRing::Integers, 1, 0),
        ]
        .into_iter()
        .map(|(r, h, t)| Self::from_ints(r, h, t).expect("panel entries are valid"))
        .collect()
    }
}

fn find_gamma(ring: CoefficientRing, h: &BigRational, t: &BigRational) -> Option<BigRational> {
    if ring.characteristic() == 2 {
        return (h.is_one() && t.is_zero()).then(BigRational::one);
    }
    let disc = h * h + BigRational::from_integer(4.into()) * t;
    with_ring!(ring, |r| {
        let d = r.from_rational(&disc)?;
        let g = r.sqrt(&d)?;
        if r.is_zero(&g) {
            return None;
        }
        Some(r.to_rational(&g))
    })
}

impl fmt::Display for TheoryTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.ring, self.h, self.t)
    }
}

impl Serialize for TheoryTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TheoryTriple", 4)?;
        st.serialize_field("ring", &self.ring.to_string())?;
        st.serialize_field("h", &self.h.to_string())?;
        st.serialize_field("t", &self.t.to_string())?;
        st.serialize_field("gamma", &self.gamma.as_ref().map(|g| g.to_string()))?;
        st.end()
    }
}

/// The idempotent-like basis `α = x - (h-γ)/2`, `β = x - (h+γ)/2` with
/// `α^2 = γα`, `β^2 = -γβ`, `αβ = 0`, `α - β = γ`. In characteristic two
/// (where `h = γ = 1`) this is `α = x`, `β = x + 1`.
pub fn diagonal_basis<R: Ring>(ring: &R, triple: &TheoryTriple) -> Result<(Element<R::Elem>, Element<R::Elem>)> {
    if ring.descriptor() != triple.ring() {
        return Err(Error::RingMismatch);
    }
    let gamma = triple.require_gamma()?;
    let (alpha, beta) = if ring.characteristic() == 2 {
        (Element::new(ring.zero(), ring.one()), Element::new(ring.one(), ring.one()))
    } else {
        let two = BigRational::from_integer(2.into());
        let r_minus = ring.from_rational(&((triple.h() - gamma) / &two)).ok_or(Error::CharTwoUnsupported)?;
        let r_plus = ring.from_rational(&((triple.h() + gamma) / &two)).ok_or(Error::CharTwoUnsupported)?;
        (Element::new(ring.neg(&r_minus), ring.one()), Element::new(ring.neg(&r_plus), ring.one()))
    };
    let sys = FrobeniusSystem::for_triple(ring.clone(), triple)?;
    let g = triple.gamma_in(ring).expect("gamma checked");
    debug_assert_eq!(sys.multiply(&alpha, &alpha)?, alpha.scale(ring, &g));
    debug_assert_eq!(sys.multiply(&beta, &beta)?, beta.scale(ring, &ring.neg(&g)));
    debug_assert!(sys.multiply(&alpha, &beta)?.is_zero(ring));
    Ok((alpha, beta))
}
