//! The rank-two Frobenius system `A_{h,t} = R[x]/(x^2 - h x - t)`.
//!
//! Elements are always stored in the basis `{1, x}`; the filtration degrees
//! `deg 1 = 1`, `deg x = -1` only make sense there.

mod basis;
mod theory;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::Ring;

pub use basis::{basis_change_map, BasisChange};
pub use theory::{diagonal_basis, Theory, TheoryTriple};

/// `one * 1 + x * x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Element<E> {
    pub one: E,
    pub x: E,
}

impl<E: Clone> Element<E> {
    pub fn new(one: E, x: E) -> Self {
        Element { one, x }
    }

    /// The basis element `1` (`k = 0`) or `x` (`k = 1`).
    pub fn basis<R: Ring<Elem = E>>(ring: &R, k: usize) -> Self {
        if k == 0 {
            Element::new(ring.one(), ring.zero())
        } else {
            Element::new(ring.zero(), ring.one())
        }
    }

    pub fn scalar<R: Ring<Elem = E>>(ring: &R, c: E) -> Self {
        Element::new(c, ring.zero())
    }

    pub fn coeff(&self, k: usize) -> &E {
        if k == 0 {
            &self.one
        } else {
            &self.x
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, o: &Self) -> Self {
        Element::new(ring.add(&self.one, &o.one), ring.add(&self.x, &o.x))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, o: &Self) -> Self {
        Element::new(ring.sub(&self.one, &o.one), ring.sub(&self.x, &o.x))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        Element::new(ring.mul(c, &self.one), ring.mul(c, &self.x))
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        ring.is_zero(&self.one) && ring.is_zero(&self.x)
    }
}

impl<E: fmt::Display> fmt::Display for Element<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*1 + ({})*x", self.one, self.x)
    }
}

/// Element of `A ⊗ A` on the basis `1⊗1, 1⊗x, x⊗1, x⊗x`: entry `2i + j` is
/// the coefficient of `b_i ⊗ b_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tensor2<E>(pub [E; 4]);

impl<E: Clone> Tensor2<E> {
    pub fn coeff(&self, i: usize, j: usize) -> &E {
        &self.0[2 * i + j]
    }

    pub fn simple<R: Ring<Elem = E>>(ring: &R, a: &Element<E>, b: &Element<E>) -> Self {
        Tensor2([ring.mul(&a.one, &b.one), ring.mul(&a.one, &b.x), ring.mul(&a.x, &b.one), ring.mul(&a.x, &b.x)])
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, o: &Self) -> Self {
        Tensor2(std::array::from_fn(|k| ring.add(&self.0[k], &o.0[k])))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        Tensor2(std::array::from_fn(|k| ring.mul(c, &self.0[k])))
    }
}

/// `A_{h,t}` over a ring, optionally twisted by a unit `θ`:
/// `Δ'(a) = Δ(θ^{-1} a)`, `ε'(a) = ε(θ a)`.
#[derive(Clone, Debug)]
pub struct FrobeniusSystem<R: Ring> {
    ring: R,
    h: R::Elem,
    t: R::Elem,
    twist: Option<(Element<R::Elem>, Element<R::Elem>)>,
}

impl<R: Ring> FrobeniusSystem<R> {
    pub fn new(ring: R, h: R::Elem, t: R::Elem) -> Result<Self> {
        if !ring.contains(&h) || !ring.contains(&t) {
            return Err(Error::RingMismatch);
        }
        Ok(FrobeniusSystem { ring, h, t, twist: None })
    }

    /// The untwisted system for a theory triple; `ring` must match it.
    pub fn for_triple(ring: R, triple: &TheoryTriple) -> Result<Self> {
        if ring.descriptor() != triple.ring() {
            return Err(Error::RingMismatch);
        }
        let h = triple.h_in(&ring);
        let t = triple.t_in(&ring);
        Self::new(ring, h, t)
    }

    /// The same algebra twisted by `theta`, which must be a unit of `A`.
    pub fn with_twist(&self, theta: Element<R::Elem>) -> Result<Self> {
        self.check(&theta)?;
        let inverse = self.inverse(&theta).ok_or(Error::NotAUnit)?;
        Ok(FrobeniusSystem { twist: Some((theta, inverse)), ..self.clone() })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn h(&self) -> &R::Elem {
        &self.h
    }

    pub fn t(&self) -> &R::Elem {
        &self.t
    }

    pub fn twist(&self) -> Option<&Element<R::Elem>> {
        self.twist.as_ref().map(|t| &t.0)
    }

    fn check(&self, a: &Element<R::Elem>) -> Result<()> {
        if self.ring.contains(&a.one) && self.ring.contains(&a.x) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn mul_unchecked(&self, a: &Element<R::Elem>, b: &Element<R::Elem>) -> Element<R::Elem> {
        let r = &self.ring;
        let xx = r.mul(&a.x, &b.x);
        let mut one = r.mul(&a.one, &b.one);
        r.add_mul_assign(&mut one, &self.t, &xx);
        let mut x = r.mul(&a.one, &b.x);
        r.add_mul_assign(&mut x, &a.x, &b.one);
        r.add_mul_assign(&mut x, &self.h, &xx);
        Element { one, x }
    }

    /// Product, reduced with `x^2 = h x + t`. Unaffected by a twist.
    pub fn multiply(&self, a: &Element<R::Elem>, b: &Element<R::Elem>) -> Result<Element<R::Elem>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn untwisted_comultiply(&self, a: &Element<R::Elem>) -> Tensor2<R::Elem> {
        let r = &self.ring;
        // Δ(1) = 1⊗x + x⊗1 - h 1⊗1, Δ(x) = x⊗x + t 1⊗1.
        let mut c11 = r.neg(&r.mul(&a.one, &self.h));
        r.add_mul_assign(&mut c11, &a.x, &self.t);
        Tensor2([c11, a.one.clone(), a.one.clone(), a.x.clone()])
    }

    pub fn comultiply(&self, a: &Element<R::Elem>) -> Result<Tensor2<R::Elem>> {
        self.check(a)?;
        Ok(match &self.twist {
            None => self.untwisted_comultiply(a),
            Some((_, inv)) => self.untwisted_comultiply(&self.mul_unchecked(inv, a)),
        })
    }

    pub fn counit(&self, a: &Element<R::Elem>) -> R::Elem {
        match &self.twist {
            None => a.x.clone(),
            Some((theta, _)) => self.mul_unchecked(theta, a).x,
        }
    }

    /// `det` of multiplication by `a` on the basis `{1, x}`.
    pub fn norm(&self, a: &Element<R::Elem>) -> R::Elem {
        let r = &self.ring;
        let mut d = r.mul(&a.one, &a.one);
        r.add_mul_assign(&mut d, &r.mul(&self.h, &a.one), &a.x);
        let neg_t = r.neg(&self.t);
        r.add_mul_assign(&mut d, &neg_t, &r.mul(&a.x, &a.x));
        d
    }

    pub fn is_unit(&self, a: &Element<R::Elem>) -> bool {
        self.ring.is_unit(&self.norm(a))
    }

    /// `a^{-1}` when `a` is a unit of `A`.
    pub fn inverse(&self, a: &Element<R::Elem>) -> Option<Element<R::Elem>> {
        let r = &self.ring;
        let inv_det = r.inverse(&self.norm(a))?;
        let mut one = a.one.clone();
        r.add_mul_assign(&mut one, &self.h, &a.x);
        Some(Element { one: r.mul(&inv_det, &one), x: r.mul(&inv_det, &r.neg(&a.x)) })
    }

    /// `m(b_i ⊗ b_j)` for basis elements, indexed `[i][j]`.
    pub fn product_table(&self) -> [[Element<R::Elem>; 2]; 2] {
        let b = |k| Element::basis(&self.ring, k);
        std::array::from_fn(|i| std::array::from_fn(|j| self.mul_unchecked(&b(i), &b(j))))
    }

    /// `Δ(b_k)` for basis elements.
    pub fn coproduct_table(&self) -> [Tensor2<R::Elem>; 2] {
        std::array::from_fn(|k| self.comultiply(&Element::basis(&self.ring, k)).expect("basis is in ring"))
    }
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
    fn products() {
        let f2 = PrimeField::new(2).unwrap();
        let bn = FrobeniusSystem::new(f2, 1, 0).unwrap();
        let x = Element::basis(&f2, 1);
        assert_eq!(bn.multiply(&x, &x).unwrap(), x);
        let lee = FrobeniusSystem::new(Rationals, q(0), q(1)).unwrap();
        let xq = Element::basis(&Rationals, 1);
        assert_eq!(lee.multiply(&xq, &xq).unwrap(), Element::basis(&Rationals, 0));
        assert_eq!(lee.multiply(&Element::basis(&Rationals, 0), &xq).unwrap(), xq);
    }

    #[test]
    fn ring_mismatch() {
        let f3 = PrimeField::new(3).unwrap();
        assert!(matches!(FrobeniusSystem::new(f3, 5, 0), Err(Error::RingMismatch)));
        let s = FrobeniusSystem::new(f3, 1, 0).unwrap();
        assert!(matches!(s.multiply(&Element::new(7, 0), &Element::new(1, 0)), Err(Error::RingMismatch)));
        assert!(matches!(s.comultiply(&Element::new(0, 3)), Err(Error::RingMismatch)));
    }

    #[test]
    fn coproducts() {
        let f2 = PrimeField::new(2).unwrap();
        let bn = FrobeniusSystem::new(f2, 1, 0).unwrap();
        assert_eq!(bn.comultiply(&Element::basis(&f2, 0)).unwrap(), Tensor2([1, 1, 1, 0]));
        let lee = FrobeniusSystem::new(Rationals, q(0), q(1)).unwrap();
        assert_eq!(lee.comultiply(&Element::basis(&Rationals, 1)).unwrap(), Tensor2([q(1), q(0), q(0), q(1)]));
        let kh = FrobeniusSystem::new(Integers, BigInt::from(0), BigInt::from(0)).unwrap();
        let z = |n: i64| BigInt::from(n);
        assert_eq!(kh.comultiply(&Element::basis(&Integers, 1)).unwrap(), Tensor2([z(0), z(0), z(0), z(1)]));
    }

    #[test]
    fn counits() {
        let lee = FrobeniusSystem::new(Rationals, q(0), q(1)).unwrap();
        assert_eq!(lee.counit(&Element::basis(&Rationals, 0)), q(0));
        assert_eq!(lee.counit(&Element::basis(&Rationals, 1)), q(1));
        assert_eq!(lee.counit(&Element::new(q(5), q(2))), q(2));
        let twisted = lee.with_twist(Element::basis(&Rationals, 1)).unwrap();
        assert_eq!(twisted.counit(&Element::basis(&Rationals, 0)), q(1));
    }

    #[test]
    fn twist_requires_unit() {
        let kh = FrobeniusSystem::new(Rationals, q(0), q(0)).unwrap();
        assert!(matches!(kh.with_twist(Element::basis(&Rationals, 1)), Err(Error::NotAUnit)));
        let z = FrobeniusSystem::new(Integers, BigInt::from(0), BigInt::from(1)).unwrap();
        assert!(matches!(z.with_twist(Element::new(BigInt::from(2), BigInt::from(0))), Err(Error::NotAUnit)));
        assert!(z.with_twist(Element::new(BigInt::from(0), BigInt::from(1))).is_ok());
    }

    #[test]
    fn inverse_is_inverse() {
        let f7 = PrimeField::new(7).unwrap();
        let s = FrobeniusSystem::new(f7, 3, 5).unwrap();
        for a0 in 0..7 {
            for a1 in 0..7 {
                let a = Element::new(a0, a1);
                if let Some(inv) = s.inverse(&a) {
                    assert_eq!(s.multiply(&a, &inv).unwrap(), Element::basis(&f7, 0));
                } else {
                    assert!(!s.is_unit(&a));
                }
            }
        }
    }
}
