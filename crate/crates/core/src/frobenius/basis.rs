use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactalg::Ring;

use super::{Element, FrobeniusSystem, Tensor2, TheoryTriple};

/// Algebra isomorphism `A_src -> A_dst`, `1 -> 1`, `y -> a x + b`, which is
/// an isomorphism of Frobenius systems onto `A_dst` twisted by `θ = a^{-1}`.
#[derive(Clone, Debug)]
pub struct BasisChange<R: Ring> {
    pub a: R::Elem,
    pub b: R::Elem,
    source: FrobeniusSystem<R>,
    target: FrobeniusSystem<R>,
    twisted_target: FrobeniusSystem<R>,
}

/// Build the basis change between two theories over the same ring.
///
/// When both discriminants are non-zero their ratio must be a square `a^2`
/// (this needs `1/2`, so characteristic two is rejected); when both vanish,
/// `a = 1`.
pub fn basis_change_map<R: Ring>(ring: &R, src: &TheoryTriple, dst: &TheoryTriple) -> Result<BasisChange<R>> {
    if src.ring() != dst.ring() || ring.descriptor() != src.ring() {
        return Err(Error::RingMismatch);
    }
    let (hs, ts) = (src.h_in(ring), src.t_in(ring));
    let (hd, td) = (dst.h_in(ring), dst.t_in(ring));
    let disc = |h: &R::Elem, t: &R::Elem| {
        let mut d = ring.mul(h, h);
        ring.add_mul_assign(&mut d, &ring.from_i64(4), t);
        d
    };
    let (ds, dd) = (disc(&hs, &ts), disc(&hd, &td));
    // v/2 computed through Q, so it also works over Z when v is even.
    let half_of = |v: &R::Elem| {
        if ring.characteristic() == 2 {
            return Err(Error::CharTwoUnsupported);
        }
        ring.from_rational(&(ring.to_rational(v) / BigRational::from_integer(2.into()))).ok_or(Error::NoSquareRatio)
    };
    let (a, b) = match (ring.is_zero(&ds), ring.is_zero(&dd)) {
        (false, false) => {
            if ring.characteristic() == 2 {
                return Err(Error::CharTwoUnsupported);
            }
            let ratio = match ring.inverse(&dd) {
                Some(inv) => ring.mul(&ds, &inv),
                // Over Z the ratio must itself be an integer.
                None => {
                    let q = ring.to_rational(&ds) / ring.to_rational(&dd);
                    ring.from_rational(&q).ok_or(Error::NoSquareRatio)?
                }
            };
            let a = ring.sqrt(&ratio).ok_or(Error::NoSquareRatio)?;
            if !ring.is_unit(&a) {
                return Err(Error::NotAUnit);
            }
            let b = half_of(&ring.sub(&hs, &ring.mul(&a, &hd)))?;
            (a, b)
        }
        (true, true) => {
            let b = if ring.characteristic() == 2 {
                // h = 0 on both sides; need b^2 = t_src - t_dst.
                ring.sqrt(&ring.sub(&ts, &td)).ok_or(Error::NoSquareRatio)?
            } else {
                half_of(&ring.sub(&hs, &hd))?
            };
            (ring.one(), b)
        }
        _ => return Err(Error::NoSquareRatio),
    };
    let source = FrobeniusSystem::new(ring.clone(), hs, ts)?;
    let target = FrobeniusSystem::new(ring.clone(), hd, td)?;
    let theta = Element::scalar(ring, ring.inverse(&a).ok_or(Error::NotAUnit)?);
    let twisted_target = target.with_twist(theta)?;
    let change = BasisChange { a, b, source, target, twisted_target };
    debug_assert!(change.verify());
    Ok(change)
}

impl<R: Ring> BasisChange<R> {
    pub fn ring(&self) -> &R {
        self.source.ring()
    }

    pub fn source(&self) -> &FrobeniusSystem<R> {
        &self.source
    }

    pub fn target(&self) -> &FrobeniusSystem<R> {
        &self.target
    }

    /// `A_dst` twisted by `θ = a^{-1}`.
    pub fn twisted_target(&self) -> &FrobeniusSystem<R> {
        &self.twisted_target
    }

    pub fn theta(&self) -> &Element<R::Elem> {
        self.twisted_target.twist().expect("constructed with a twist")
    }

    /// `u + v y -> (u + v b) + v a x`.
    pub fn apply(&self, e: &Element<R::Elem>) -> Element<R::Elem> {
        let r = self.ring();
        let mut one = e.one.clone();
        r.add_mul_assign(&mut one, &e.x, &self.b);
        Element::new(one, r.mul(&e.x, &self.a))
    }

    /// Inverse map: `x -> (y - b) / a`.
    pub fn apply_inverse(&self, e: &Element<R::Elem>) -> Element<R::Elem> {
        let r = self.ring();
        let inv_a = r.inverse(&self.a).expect("a is a unit");
        let v = r.mul(&e.x, &inv_a);
        let mut one = e.one.clone();
        r.add_mul_assign(&mut one, &r.neg(&v), &self.b);
        Element::new(one, v)
    }

    /// The map as a 2x2 matrix `[[image of 1], [image of y]]` in the target
    /// basis `{1, x}`.
    pub fn matrix(&self) -> [[R::Elem; 2]; 2] {
        let r = self.ring();
        [[r.one(), r.zero()], [self.b.clone(), self.a.clone()]]
    }

    fn apply2(&self, t: &Tensor2<R::Elem>) -> Tensor2<R::Elem> {
        let r = self.ring();
        let mut out = Tensor2(std::array::from_fn(|_| r.zero()));
        for i in 0..2 {
            for j in 0..2 {
                let fi = self.apply(&Element::basis(r, i));
                let fj = self.apply(&Element::basis(r, j));
                out = out.add(r, &Tensor2::simple(r, &fi, &fj).scale(r, t.coeff(i, j)));
            }
        }
        out
    }

    /// Check on basis elements that the map intertwines unit, product,
    /// coproduct and counit with the twisted target, and that the inverse
    /// undoes it.
    pub fn verify(&self) -> bool {
        let r = self.ring();
        let basis = [Element::basis(r, 0), Element::basis(r, 1)];
        if self.apply(&basis[0]) != basis[0] {
            return false;
        }
        let tgt = &self.twisted_target;
        for u in &basis {
            if self.apply_inverse(&self.apply(u)) != *u || self.apply(&self.apply_inverse(u)) != *u {
                return false;
            }
            if tgt.counit(&self.apply(u)) != self.source.counit(u) {
                return false;
            }
            let lhs = self.apply2(&self.source.comultiply(u).expect("basis"));
            if lhs != tgt.comultiply(&self.apply(u)).expect("basis") {
                return false;
            }
            for v in &basis {
                let uv = self.apply(&self.source.multiply(u, v).expect("basis"));
                if uv != tgt.multiply(&self.apply(u), &self.apply(v)).expect("basis") {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{CoefficientRing, Integers, PrimeField, Rationals};
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn triple(ring: CoefficientRing, h: i64, t: i64) -> TheoryTriple {
        TheoryTriple::from_ints(ring, h, t).unwrap()
    }

    #[test]
    fn scaling_change() {
        let src = triple(CoefficientRing::Rationals, 0, 4);
        let dst = triple(CoefficientRing::Rationals, 0, 1);
        let m = basis_change_map(&Rationals, &src, &dst).unwrap();
        assert_eq!((m.a.clone(), m.b.clone()), (q(2), q(0)));
        assert_eq!(m.theta(), &Element::new(BigRational::new(1.into(), 2.into()), q(0)));
        assert!(m.verify());
    }

    #[test]
    fn shift_change() {
        // y^2 = 2y is sent to (x+1)^2 = x^2 + 2x + 1 = 2(x+1) when x^2 = 1.
        let src = triple(CoefficientRing::Rationals, 2, 0);
        let dst = triple(CoefficientRing::Rationals, 0, 1);
        let m = basis_change_map(&Rationals, &src, &dst).unwrap();
        assert_eq!((m.a.clone(), m.b.clone()), (q(1), q(1)));
        assert!(m.verify());
        let y = Element::basis(&Rationals, 1);
        assert_eq!(m.apply(&y), Element::new(q(1), q(1)));
    }

    #[test]
    fn degenerate_changes() {
        let src = triple(CoefficientRing::Rationals, 2, -1);
        let dst = triple(CoefficientRing::Rationals, 0, 0);
        let m = basis_change_map(&Rationals, &src, &dst).unwrap();
        assert_eq!((m.a.clone(), m.b.clone()), (q(1), q(1)));
        assert!(m.verify());
        let f2 = PrimeField::new(2).unwrap();
        let m =
            basis_change_map(&f2, &triple(CoefficientRing::PrimeField(2), 0, 1), &triple(CoefficientRing::PrimeField(2), 0, 0))
                .unwrap();
        assert_eq!((m.a, m.b), (1, 1));
    }

    #[test]
    fn change_errors() {
        let f3 = PrimeField::new(3).unwrap();
        let src = triple(CoefficientRing::PrimeField(3), 1, 2);
        let dst = triple(CoefficientRing::PrimeField(3), 1, 0);
        assert!(matches!(basis_change_map(&f3, &src, &dst), Err(Error::NoSquareRatio)));
        let src = triple(CoefficientRing::Rationals, 0, 2);
        let dst = triple(CoefficientRing::Rationals, 0, 1);
        assert!(matches!(basis_change_map(&Rationals, &src, &dst), Err(Error::NoSquareRatio)));
        let f2 = PrimeField::new(2).unwrap();
        let bn = triple(CoefficientRing::PrimeField(2), 1, 0);
        assert!(matches!(basis_change_map(&f2, &bn, &bn), Err(Error::CharTwoUnsupported)));
        let z = Integers;
        let src = triple(CoefficientRing::Integers, 0, 4);
        let dst = triple(CoefficientRing::Integers, 0, 1);
        assert!(matches!(basis_change_map(&z, &src, &dst), Err(Error::NotAUnit)));
        let m = basis_change_map(&z, &triple(CoefficientRing::Integers, 2, 0), &triple(CoefficientRing::Integers, 0, 1)).unwrap();
        assert_eq!((m.a.clone(), m.b.clone()), (BigInt::from(1), BigInt::from(1)));
        assert!(matches!(
            basis_change_map(&Rationals, &triple(CoefficientRing::Rationals, 0, 1), &triple(CoefficientRing::Integers, 0, 1)),
            Err(Error::RingMismatch)
        ));
    }

    #[test]
    fn identity_change() {
        let f5 = PrimeField::new(5).unwrap();
        let t = triple(CoefficientRing::PrimeField(5), 0, 1);
        let m = basis_change_map(&f5, &t, &t).unwrap();
        assert_eq!((m.a, m.b), (1, 0));
    }
}
