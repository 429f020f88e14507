//! Coefficient rings: arbitrary-precision rationals, word-sized prime fields
//! and arbitrary-precision integers.
//!
//! Rings are values (a prime field carries its modulus), and elements are
//! plain data manipulated through the ring. Generic code is written against
//! [`Ring`]; the runtime choice is carried by [`CoefficientRing`].

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted for prime fields (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// Runtime description of a coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "p")]
pub enum CoefficientRing {
    Rationals,
    PrimeField(u32),
    Integers,
}

impl CoefficientRing {
    /// A prime field, validating primality and the word-size bound.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoefficientRing::PrimeField(p as u32))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientRing::PrimeField(p) => *p as u64,
            _ => 0,
        }
    }

    /// Parse the CLI spelling: `q`, `z` or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "q" | "rationals" => Ok(CoefficientRing::Rationals),
            "z" | "integers" => Ok(CoefficientRing::Integers),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .or_else(|| other.strip_prefix('f'))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::BadRing(s.to_string()))?;
                CoefficientRing::prime_field(p)
            }
        }
    }

    /// Reduce an integer into the ring (mod p for prime fields).
    pub fn normalize_int(&self, n: &BigInt) -> BigInt {
        match self {
            CoefficientRing::PrimeField(p) => n.mod_floor(&BigInt::from(*p)),
            _ => n.clone(),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Rationals => write!(f, "q"),
            CoefficientRing::PrimeField(p) => write!(f, "fp:{p}"),
            CoefficientRing::Integers => write!(f, "z"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A commutative ring with unit, used as a context for its elements.
pub trait Ring: Clone + Send + Sync + fmt::Debug + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn descriptor(&self) -> CoefficientRing;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// `None` when the rational has no image (non-integer in Z, denominator
    /// divisible by p in F_p).
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// Prime-field elements map to their representative in `[0, p)`.
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    /// Multiplicative inverse of a unit, `None` otherwise.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inverse(a).is_some()
    }
    /// Whether `a` is a well-formed element of this ring.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }
    /// A square root of `a` if one exists in the ring.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Size heuristic for pivot selection; smaller is cheaper.
    fn cost(&self, _a: &Self::Elem) -> u64 {
        1
    }

    fn is_field(&self) -> bool {
        self.descriptor().is_field()
    }
    fn characteristic(&self) -> u64 {
        self.descriptor().characteristic()
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for a possibly negative exponent; `None` if `a` is not a unit
    /// and `e < 0`.
    fn pow_signed(&self, a: &Self::Elem, e: i32) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u32))
        } else {
            self.inverse(a).map(|inv| self.pow(&inv, (-e) as u32))
        }
    }

    /// `acc += a * b`.
    fn add_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> CoefficientRing {
        CoefficientRing::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = exact_isqrt(a.numer())?;
        let d = exact_isqrt(a.denom())?;
        Some(BigRational::new(n, d))
    }
    fn cost(&self, a: &BigRational) -> u64 {
        a.numer().bits() + a.denom().bits()
    }
}

/// The prime field F_p with p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        match CoefficientRing::prime_field(p)? {
            CoefficientRing::PrimeField(p) => Ok(PrimeField { p }),
            _ => unreachable!(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    fn pow_u64(&self, a: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    /// Tonelli-Shanks; returns the smaller of the two roots.
    fn sqrt_mod(&self, a: u32) -> Option<u32> {
        let p = self.p as u64;
        let a = a as u64 % p;
        if a == 0 {
            return Some(0);
        }
        if p == 2 {
            return Some(a as u32);
        }
        if self.pow_u64(a as u32, (p - 1) / 2) != 1 {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while self.pow_u64(z as u32, (p - 1) / 2) as u64 != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow_u64(z as u32, q) as u64;
        let mut t = self.pow_u64(a as u32, q) as u64;
        let mut r = self.pow_u64(a as u32, q.div_ceil(2)) as u64;
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = tt * tt % p;
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b * b % p;
            }
            m = i;
            c = b * b % p;
            t = t * c % p;
            r = r * b % p;
        }
        Some(r.min(p - r) as u32)
    }
}

impl Ring for PrimeField {
    type Elem = u32;

    fn descriptor(&self) -> CoefficientRing {
        CoefficientRing::PrimeField(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce_i64(n)
    }
    fn from_int(&self, n: &BigInt) -> u32 {
        n.mod_floor(&BigInt::from(self.p)).to_u32().expect("residue fits in u32")
    }
    fn from_rational(&self, q: &BigRational) -> Option<u32> {
        let d = self.from_int(q.denom());
        let inv = self.inverse(&d)?;
        Some(self.mul(&self.from_int(q.numer()), &inv))
    }
    fn to_rational(&self, a: &u32) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn inverse(&self, a: &u32) -> Option<u32> {
        (!(*a).is_multiple_of(self.p)).then(|| self.pow_u64(*a, self.p as u64 - 2))
    }
    fn is_unit(&self, a: &u32) -> bool {
        !(*a).is_multiple_of(self.p)
    }
    fn contains(&self, a: &u32) -> bool {
        *a < self.p
    }
    fn sqrt(&self, a: &u32) -> Option<u32> {
        self.sqrt_mod(*a)
    }
    fn add_mul_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        *acc = ((*acc as u64 + *a as u64 * *b as u64) % self.p as u64) as u32;
    }
}

/// The integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn descriptor(&self) -> CoefficientRing {
        CoefficientRing::Integers
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigInt> {
        q.is_integer().then(|| q.to_integer())
    }
    fn to_rational(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs().is_one()).then(|| a.clone())
    }
    fn sqrt(&self, a: &BigInt) -> Option<BigInt> {
        exact_isqrt(a)
    }
    fn cost(&self, a: &BigInt) -> u64 {
        a.bits()
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Run `$body` with `$r` bound to the concrete ring named by a
/// [`CoefficientRing`].
#[macro_export]
macro_rules! with_ring {
    ($desc:expr, |$r:ident| $body:expr) => {
        match $desc {
            $crate::exactalg::CoefficientRing::Rationals => {
                let $r = $crate::exactalg::Rationals;
                $body
            }
            $crate::exactalg::CoefficientRing::PrimeField(p) => {
                let $r = $crate::exactalg::PrimeField::new(p as u64).expect("descriptor holds a validated prime");
                $body
            }
            $crate::exactalg::CoefficientRing::Integers => {
                let $r = $crate::exactalg::Integers;
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_bounds() {
        assert!(CoefficientRing::prime_field(2).is_ok());
        assert!(CoefficientRing::prime_field(2147483647).is_ok());
        assert!(CoefficientRing::prime_field(4294967291).is_err());
        assert!(CoefficientRing::prime_field(2147483629).is_ok());
        assert!(matches!(CoefficientRing::prime_field(9), Err(Error::NotPrime(9))));
        assert!(matches!(CoefficientRing::prime_field(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn parse_cli_spelling() {
        assert_eq!(CoefficientRing::parse("q").unwrap(), CoefficientRing::Rationals);
        assert_eq!(CoefficientRing::parse("Z").unwrap(), CoefficientRing::Integers);
        assert_eq!(CoefficientRing::parse("fp:5").unwrap(), CoefficientRing::PrimeField(5));
        assert!(CoefficientRing::parse("fp:6").is_err());
        assert!(CoefficientRing::parse("r").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.mul(&2, &3), 1);
        assert_eq!(f.inverse(&2), Some(3));
        assert_eq!(f.inverse(&0), None);
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.sqrt(&4), Some(2));
        assert_eq!(f.sqrt(&2), None);
        let q = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&q), Some(3));
        assert_eq!(PrimeField::new(2).unwrap().from_rational(&q), None);
    }

    #[test]
    fn tonelli_shanks_matches_brute_force() {
        for p in [3u64, 7, 13, 17, 41, 97, 113] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p as u32 {
                let brute = (0..p as u32).find(|r| f.mul(r, r) == a);
                match f.sqrt(&a) {
                    Some(r) => assert_eq!(f.mul(&r, &r), a),
                    None => assert!(brute.is_none(), "p={p} a={a}"),
                }
            }
        }
    }

    #[test]
    fn integer_units_and_roots() {
        let z = Integers;
        assert!(z.is_unit(&BigInt::from(-1)));
        assert!(!z.is_unit(&BigInt::from(2)));
        assert_eq!(z.sqrt(&BigInt::from(16)), Some(BigInt::from(4)));
        assert_eq!(z.sqrt(&BigInt::from(5)), None);
        let q = Rationals;
        let r = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(q.sqrt(&r), Some(BigRational::new(BigInt::from(3), BigInt::from(2))));
    }
}
