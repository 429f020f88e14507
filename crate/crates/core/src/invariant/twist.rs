use std::collections::HashMap;

use serde::Serialize;

use crate::cube::{build_complex_with, smooth, BuildOptions, FilteredComplex, Generator};
use crate::error::{Error, Result};
use crate::exactalg::{collect_terms, CoefficientRing, ColumnReducer, Insertion, Ring, SparseVec};
use crate::frobenius::{basis_change_map, BasisChange, TheoryTriple};
use crate::homology::{filtered_kernel, filtration_profile, profile_with_representatives};
use crate::linkio::LinkDiagram;

/// Outcome of checking that the basis change between two theories induces
/// a filtered chain isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub diagram: String,
    pub src: TheoryTriple,
    pub dst: TheoryTriple,
    /// Ring in which the check ran (integral theories are checked over `Q`).
    pub checked_over: String,
    pub a: String,
    pub b: String,
    pub theta: String,
    /// `∂Ψ = Ψ∂` on every generator.
    pub chain_map: bool,
    /// Ψ sends the tested cycles to cycles.
    pub cycles_preserved: bool,
    /// `q(Ψ(w)) = q(w)` for every generator and every tested cycle.
    pub q_preserved: bool,
    pub chains_tested: usize,
    /// Ψ maps homology bases to homology bases in every degree.
    pub homology_iso: bool,
    pub profiles_equal: bool,
    pub pass: bool,
}

/// `Ψ = Φ ∘ ψ`: `ψ` applies `1 -> 1`, `y -> a x + b` on every tensor factor,
/// landing in the target complex twisted by `a^{-1}`, which multiplies
/// split maps by `a`; `Φ` rescales vertex `v` by `a^{-s(v)}` with
/// `s(v) = (r + k_v - k_0) / 2` the number of splits on any path from `0`.
struct TwistMap<'a, R: Ring> {
    change: BasisChange<R>,
    target: &'a FilteredComplex<R>,
    circles: HashMap<u64, usize>,
}

impl<R: Ring> TwistMap<'_, R> {
    fn generator(&self, g: &Generator) -> SparseVec<R::Elem> {
        let ring = self.change.ring();
        let k = self.circles[&g.vertex];
        let splits = (g.vertex.count_ones() as i64 + k as i64 - self.circles[&0] as i64) / 2;
        let scale = ring.pow_signed(&self.change.a, -(splits as i32)).expect("a is a unit");
        let mut terms: Vec<(u64, R::Elem)> = vec![(0, scale)];
        for c in 0..k {
            if g.labels >> c & 1 == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (mask, v) in terms {
                if !ring.is_zero(&self.change.b) {
                    next.push((mask, ring.mul(&v, &self.change.b)));
                }
                next.push((mask | 1 << c, ring.mul(&v, &self.change.a)));
            }
            terms = next;
        }
        let idx = |mask| self.target.index_of(g.degree, g.vertex, mask).expect("same cube");
        collect_terms(ring, terms.into_iter().map(|(m, v)| (idx(m), v)))
    }

    fn chain(&self, src: &FilteredComplex<R>, degree: i64, z: &[(usize, R::Elem)]) -> SparseVec<R::Elem> {
        let ring = self.change.ring();
        let gens = src.generators(degree);
        collect_terms(
            ring,
            z.iter().flat_map(|(i, c)| self.generator(&gens[*i]).into_iter().map(move |(j, v)| (j, ring.mul(c, &v)))),
        )
    }
}

/// Check the basis change `src -> dst` on the cube complexes of `d`.
pub fn verify_twist_equivalence(
    d: &LinkDiagram,
    src: &TheoryTriple,
    dst: &TheoryTriple,
    max_crossings: usize,
) -> Result<TwistReport> {
    if src.ring() != dst.ring() {
        return Err(Error::RingMismatch);
    }
    match src.ring() {
        // a and b are integral and a is a unit, so the rational map restricts.
        CoefficientRing::Integers => {
            basis_change_map(&crate::exactalg::Integers, src, dst)?;
            let q = CoefficientRing::Rationals;
            twist_check(crate::exactalg::Rationals, d, &src.in_ring(q)?, &dst.in_ring(q)?, src, dst, max_crossings)
        }
        ring => crate::with_ring!(ring, |r| twist_check(r, d, src, dst, src, dst, max_crossings)),
    }
}

#[allow(clippy::too_many_arguments)]
fn twist_check<R: Ring>(
    ring: R,
    d: &LinkDiagram,
    src: &TheoryTriple,
    dst: &TheoryTriple,
    orig_src: &TheoryTriple,
    orig_dst: &TheoryTriple,
    max_crossings: usize,
) -> Result<TwistReport> {
    let change = basis_change_map(&ring, src, dst)?;
    let opts = BuildOptions { max_crossings, verify: true };
    let cs = build_complex_with(d, src, change.source(), opts)?;
    let cd = build_complex_with(d, dst, change.target(), opts)?;
    let circles = (0..1u64 << d.n_crossings()).map(|v| (v, smooth(d, v).n_circles())).collect();
    let (a, b, theta) = (change.a.to_string(), change.b.to_string(), change.theta().to_string());
    let psi = TwistMap { change, target: &cd, circles };

    let mut chain_map = true;
    let mut q_preserved = true;
    let mut cycles_preserved = true;
    let mut homology_iso = true;
    let mut chains_tested = 0;
    for i in cs.degrees() {
        for (gi, g) in cs.generators(i).iter().enumerate() {
            let img = psi.generator(g);
            chains_tested += 1;
            q_preserved &= cd.q_of(i, &img)? == g.q;
            let lhs = cd.apply_boundary(i, &img);
            let rhs = psi.chain(&cs, i + 1, &cs.apply_boundary(i, &[(gi, ring.one())]));
            chain_map &= lhs == rhs;
        }
        for z in filtered_kernel(&cs, i) {
            let img = psi.chain(&cs, i, &z.cycle);
            chains_tested += 1;
            cycles_preserved &= cd.apply_boundary(i, &img).is_empty();
            q_preserved &= cd.q_of(i, &img)? == z.level;
        }
        let (_, reps) = profile_with_representatives(&cs, i)?;
        let (dst_steps, _) = profile_with_representatives(&cd, i)?;
        let mut red = ColumnReducer::new(&ring);
        for col in cd.boundary(i - 1).columns() {
            red.insert(col.clone());
        }
        let independent = reps.iter().all(|z| matches!(red.insert(psi.chain(&cs, i, &z.cycle)), Insertion::Independent));
        homology_iso &= independent && reps.len() == dst_steps.first().map_or(0, |s| s.dim);
    }
    let profiles_equal = filtration_profile(&cs)? == filtration_profile(&cd)?;
    let pass = chain_map && cycles_preserved && q_preserved && homology_iso && profiles_equal;
    Ok(TwistReport {
        diagram: d.to_string(),
        src: orig_src.clone(),
        dst: orig_dst.clone(),
        checked_over: ring.descriptor().to_string(),
        a,
        b,
        theta,
        chain_map,
        cycles_preserved,
        q_preserved,
        chains_tested,
        homology_iso,
        profiles_equal,
        pass,
    })
}
