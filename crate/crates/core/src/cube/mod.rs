//! The filtered cube-of-resolutions complex `C*(L)`.
//!
//! Vertex `v` is a bitmask (bit `j` set = 1-smoothing at crossing `j`).
//! Homological degree is `i = r - c⁻` with `r = popcount(v)`. A generator
//! labels each circle `1` or `x`; label bit `k` set means circle `k` carries
//! `x`. Within a degree generators are ordered by `(vertex, labels)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Ring, SparseMatrix, SparseVec};
use crate::frobenius::{Element, FrobeniusSystem, Tensor2, TheoryTriple};
use crate::linkio::LinkDiagram;

pub const DEFAULT_MAX_CROSSINGS: usize = 16;

/// One full smoothing of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeVertex {
    pub smoothing: u64,
    pub r: usize,
    /// Edge labels of each circle, ordered by smallest label; free loops
    /// come last with no edges.
    pub circles: Vec<Vec<u32>>,
}

impl CubeVertex {
    pub fn n_circles(&self) -> usize {
        self.circles.len()
    }

    /// Index of the circle through edge `label`.
    pub fn circle_of(&self, label: u32) -> Option<usize> {
        self.circles.iter().position(|c| c.binary_search(&label).is_ok())
    }
}

/// An enhanced state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub vertex: u64,
    pub labels: u64,
    pub degree: i64,
    pub q: i64,
}

/// Dense per-diagram data for fast smoothing.
struct Layout {
    n_edges: usize,
    labels: Vec<u32>,
    /// Per crossing, the dense strand indices `[a, b, c, d]`.
    strands: Vec<[usize; 4]>,
    free_loops: usize,
}

impl Layout {
    fn new(d: &LinkDiagram) -> Self {
        let labels: Vec<u32> = d.labels().collect();
        let index = |l: u32| labels.binary_search(&l).expect("crossing labels are edges");
        let strands = d.crossings().iter().map(|c| c.strands.map(index)).collect();
        Layout { n_edges: labels.len(), labels, strands, free_loops: d.free_loops() }
    }

    /// Circle index of every dense edge, and the number of circles
    /// (free loops included).
    fn smooth(&self, v: u64) -> (Vec<u8>, usize) {
        let n = self.n_edges;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (j, &[a, b, c, d]) in self.strands.iter().enumerate() {
            let pairs = if v >> j & 1 == 1 { [(a, d), (b, c)] } else { [(a, b), (c, d)] };
            for (x, y) in pairs {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
        // Roots are minimal members, so circles come out ordered by their
        // smallest edge.
        let mut circle = vec![u8::MAX; n];
        let mut count = 0;
        for e in 0..n {
            let root = find(&mut parent, e);
            if root == e {
                circle[e] = count as u8;
                count += 1;
            } else {
                circle[e] = circle[root];
            }
        }
        (circle, count + self.free_loops)
    }
}

/// Smooth `d` at the vertex `smoothing`.
pub fn smooth(d: &LinkDiagram, smoothing: u64) -> CubeVertex {
    let layout = Layout::new(d);
    let (circle, k) = layout.smooth(smoothing);
    let mut circles = vec![Vec::new(); k];
    for (e, &c) in circle.iter().enumerate() {
        circles[c as usize].push(layout.labels[e]);
    }
    CubeVertex { smoothing, r: smoothing.count_ones() as usize, circles }
}

/// A finite filtered cochain complex with one sparse boundary matrix per
/// degree. `boundary(i)` maps degree `i` to degree `i + 1`.
#[derive(Clone, Debug)]
pub struct FilteredComplex<R: Ring> {
    ring: R,
    triple: TheoryTriple,
    c_plus: usize,
    c_minus: usize,
    n_components: usize,
    min_degree: i64,
    gens: Vec<Vec<Generator>>,
    diff: Vec<SparseMatrix<R::Elem>>,
}

impl<R: Ring> FilteredComplex<R> {
    /// Assemble from parts; `diff[k]` maps `gens[k]` to `gens[k + 1]`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        ring: R,
        triple: TheoryTriple,
        c_plus: usize,
        c_minus: usize,
        n_components: usize,
        min_degree: i64,
        gens: Vec<Vec<Generator>>,
        diff: Vec<SparseMatrix<R::Elem>>,
    ) -> Self {
        debug_assert_eq!(gens.len(), diff.len());
        FilteredComplex { ring, triple, c_plus, c_minus, n_components, min_degree, gens, diff }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn triple(&self) -> &TheoryTriple {
        &self.triple
    }

    pub fn c_plus(&self) -> usize {
        self.c_plus
    }

    pub fn c_minus(&self) -> usize {
        self.c_minus
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.gens.len() as i64 - 1
    }

    /// Degrees in ascending order.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.gens.len() as i64).map(move |k| self.min_degree + k)
    }

    fn slot(&self, degree: i64) -> Option<usize> {
        let k = degree - self.min_degree;
        (0..self.gens.len() as i64).contains(&k).then_some(k as usize)
    }

    /// Generators of a degree (empty outside the range).
    pub fn generators(&self, degree: i64) -> &[Generator] {
        self.slot(degree).map_or(&[], |k| &self.gens[k])
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.generators(degree).len()
    }

    pub fn total_rank(&self) -> usize {
        self.gens.iter().map(Vec::len).sum()
    }

    /// `∂` from `degree` to `degree + 1`; a zero matrix outside the range.
    pub fn boundary(&self, degree: i64) -> SparseMatrix<R::Elem> {
        match self.slot(degree) {
            Some(k) => self.diff[k].clone(),
            None => SparseMatrix::zeros(self.rank(degree + 1), self.rank(degree)),
        }
    }

    pub fn boundary_ref(&self, degree: i64) -> Option<&SparseMatrix<R::Elem>> {
        self.slot(degree).map(|k| &self.diff[k])
    }

    /// Position of a generator within its degree.
    pub fn index_of(&self, degree: i64, vertex: u64, labels: u64) -> Option<usize> {
        self.generators(degree).binary_search_by_key(&(vertex, labels), |g| (g.vertex, g.labels)).ok()
    }

    /// `∂_{i+1} ∘ ∂_i = 0` in every degree.
    pub fn d_squared_is_zero(&self) -> bool {
        (0..self.diff.len().saturating_sub(1)).into_par_iter().all(|k| {
            let prod = self.diff[k + 1].mul(&self.ring, &self.diff[k]).expect("consecutive shapes agree");
            prod.is_zero()
        })
    }

    /// Every entry `∂[g', g] != 0` has `q(g') >= q(g)`.
    pub fn is_filtered(&self) -> bool {
        self.diff.iter().enumerate().all(|(k, m)| m.iter().all(|(r, c, _)| self.gens[k + 1][r].q >= self.gens[k][c].q))
    }

    /// Every entry preserves `q` exactly (a bigraded complex).
    pub fn is_graded(&self) -> bool {
        self.diff.iter().enumerate().all(|(k, m)| m.iter().all(|(r, c, _)| self.gens[k + 1][r].q == self.gens[k][c].q))
    }

    /// `Σ (-1)^i rank C^i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| if i.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(i) as i64).sum()
    }

    pub(crate) fn into_parts(
        self,
    ) -> (R, TheoryTriple, usize, usize, usize, i64, Vec<Vec<Generator>>, Vec<SparseMatrix<R::Elem>>) {
        (self.ring, self.triple, self.c_plus, self.c_minus, self.n_components, self.min_degree, self.gens, self.diff)
    }

    /// The same complex with every entry pushed through `f` into `target`
    /// (zero images are dropped). The triple is re-read in the new ring.
    pub fn map_ring<R2: Ring>(&self, target: R2, f: impl Fn(&R::Elem) -> R2::Elem) -> Result<FilteredComplex<R2>> {
        let triple = self.triple.in_ring(target.descriptor())?;
        let diff = self
            .diff
            .iter()
            .map(|m| {
                let cols = m
                    .columns()
                    .iter()
                    .map(|col| col.iter().map(|(r, v)| (*r, f(v))).filter(|(_, v)| !target.is_zero(v)).collect())
                    .collect();
                SparseMatrix::from_columns(m.n_rows(), cols)
            })
            .collect();
        Ok(FilteredComplex {
            ring: target,
            triple,
            c_plus: self.c_plus,
            c_minus: self.c_minus,
            n_components: self.n_components,
            min_degree: self.min_degree,
            gens: self.gens.clone(),
            diff,
        })
    }

    /// Apply `∂` to a chain of the given degree.
    pub fn apply_boundary(&self, degree: i64, chain: &[(usize, R::Elem)]) -> SparseVec<R::Elem> {
        match self.slot(degree) {
            Some(k) => self.diff[k].apply(&self.ring, chain),
            None => Vec::new(),
        }
    }

    /// Filtration degree of a non-zero chain in one degree: the minimum `q`
    /// over its generators.
    pub fn q_of(&self, degree: i64, chain: &[(usize, R::Elem)]) -> Result<i64> {
        let gens = self.generators(degree);
        chain.iter().filter(|(_, c)| !self.ring.is_zero(c)).map(|(i, _)| gens[*i].q).min().ok_or(Error::ZeroChain)
    }
}

/// Filtration degree of a chain given as generators with coefficients.
pub fn q_of_chain<R: Ring>(ring: &R, chain: &[(Generator, R::Elem)]) -> Result<i64> {
    let mut nonzero = chain.iter().filter(|(_, c)| !ring.is_zero(c)).peekable();
    let degree = nonzero.peek().ok_or(Error::ZeroChain)?.0.degree;
    let mut q = i64::MAX;
    for (g, _) in nonzero {
        if g.degree != degree {
            return Err(Error::MixedDegree);
        }
        q = q.min(g.q);
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub max_crossings: usize,
    /// Check `∂² = 0` after assembly (panics on failure).
    pub verify: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_crossings: DEFAULT_MAX_CROSSINGS, verify: true }
    }
}

/// Build `C*(L)` for `d` with the Frobenius system `sys` (possibly twisted)
/// whose `h, t` match `triple`.
pub fn build_complex<R: Ring>(d: &LinkDiagram, triple: &TheoryTriple, sys: &FrobeniusSystem<R>) -> Result<FilteredComplex<R>> {
    build_complex_with(d, triple, sys, BuildOptions::default())
}

pub fn build_complex_with<R: Ring>(
    d: &LinkDiagram,
    triple: &TheoryTriple,
    sys: &FrobeniusSystem<R>,
    opts: BuildOptions,
) -> Result<FilteredComplex<R>> {
    let ring = sys.ring().clone();
    if ring.descriptor() != triple.ring() {
        return Err(Error::RingMismatch);
    }
    if *sys.h() != triple.h_in(&ring) || *sys.t() != triple.t_in(&ring) {
        return Err(Error::InvalidTheory(format!("Frobenius system does not match {triple}")));
    }
    let c = d.n_crossings();
    if c > opts.max_crossings || c > 62 {
        return Err(Error::CubeTooLarge { crossings: c, limit: opts.max_crossings.min(62) });
    }
    let layout = Layout::new(d);
    let (c_plus, c_minus) = (d.c_plus(), d.c_minus());
    let shift = c_plus as i64 - c_minus as i64;

    let n_vertices = 1u64 << c;
    let smoothings: Vec<(Vec<u8>, usize)> = (0..n_vertices).into_par_iter().map(|v| layout.smooth(v)).collect();
    if smoothings.iter().any(|(_, k)| *k > 63) {
        return Err(Error::CubeTooLarge { crossings: c, limit: opts.max_crossings });
    }

    // Vertices per cube degree r in ascending order, with generator offsets.
    let mut by_r: Vec<Vec<u64>> = vec![Vec::new(); c + 1];
    for v in 0..n_vertices {
        by_r[v.count_ones() as usize].push(v);
    }
    let mut offset = vec![0usize; n_vertices as usize];
    let mut gens: Vec<Vec<Generator>> = Vec::with_capacity(c + 1);
    for (r, verts) in by_r.iter().enumerate() {
        let degree = r as i64 - c_minus as i64;
        let mut list = Vec::new();
        for &v in verts {
            offset[v as usize] = list.len();
            let k = smoothings[v as usize].1;
            for labels in 0..(1u64 << k) {
                let p = k as i64 - 2 * labels.count_ones() as i64;
                list.push(Generator { vertex: v, labels, degree, q: p + degree + shift });
            }
        }
        gens.push(list);
    }

    let product = sys.product_table();
    let coproduct = sys.coproduct_table();
    let diff: Vec<SparseMatrix<R::Elem>> = (0..=c)
        .map(|r| {
            let n_rows = if r < c { gens[r + 1].len() } else { 0 };
            if r == c {
                return SparseMatrix::zeros(0, gens[r].len());
            }
            let cols: Vec<SparseVec<R::Elem>> = by_r[r]
                .par_iter()
                .flat_map_iter(|&v| vertex_columns(&ring, &layout, &smoothings, &offset, &product, &coproduct, c, v))
                .collect();
            SparseMatrix::from_columns(n_rows, cols)
        })
        .collect();

    let complex = FilteredComplex {
        ring,
        triple: triple.clone(),
        c_plus,
        c_minus,
        n_components: d.n_components(),
        min_degree: -(c_minus as i64),
        gens,
        diff,
    };
    if opts.verify {
        assert!(complex.d_squared_is_zero(), "cube differential must square to zero");
    }
    Ok(complex)
}

/// Columns of `∂` for every generator at vertex `v`.
#[allow(clippy::too_many_arguments)]
fn vertex_columns<R: Ring>(
    ring: &R,
    layout: &Layout,
    smoothings: &[(Vec<u8>, usize)],
    offset: &[usize],
    product: &[[Element<R::Elem>; 2]; 2],
    coproduct: &[Tensor2<R::Elem>; 2],
    c: usize,
    v: u64,
) -> Vec<SparseVec<R::Elem>> {
    let (circ_v, k_v) = &smoothings[v as usize];
    let n_gens = 1usize << k_v;
    let mut cols: Vec<Vec<(usize, R::Elem)>> = vec![Vec::new(); n_gens];
    for j in 0..c {
        if v >> j & 1 == 1 {
            continue;
        }
        let w = v | 1 << j;
        let (circ_w, k_w) = &smoothings[w as usize];
        let negative = (v & ((1u64 << j) - 1)).count_ones() % 2 == 1;
        let [a, b, cc, _] = layout.strands[j];
        // Where each circle of v lands in w (free loops keep their index).
        let mut image = vec![0usize; *k_v];
        for e in 0..layout.n_edges {
            image[circ_v[e] as usize] = circ_w[e] as usize;
        }
        for f in 0..layout.free_loops {
            image[k_v - 1 - f] = k_w - 1 - f;
        }
        let (ca, cc_) = (circ_v[a] as usize, circ_v[cc] as usize);
        let base_w = offset[w as usize];
        for (labels, col) in cols.iter_mut().enumerate() {
            let labels = labels as u64;
            let mut rest = 0u64;
            for (ci, &wi) in image.iter().enumerate() {
                if labels >> ci & 1 == 1 {
                    rest |= 1 << wi;
                }
            }
            let sign = |x: &R::Elem| if negative { ring.neg(x) } else { x.clone() };
            if ca != cc_ {
                // Merge of circles ca and cc_ into image[ca].
                let m = image[ca];
                rest &= !(1u64 << m);
                let prod = &product[(labels >> ca & 1) as usize][(labels >> cc_ & 1) as usize];
                for bit in 0..2 {
                    let coeff = prod.coeff(bit);
                    if !ring.is_zero(coeff) {
                        col.push((base_w + (rest | (bit as u64) << m) as usize, sign(coeff)));
                    }
                }
            } else {
                // Split of circle ca into the circles through a and b at w.
                let (s1, s2) = (circ_w[a] as usize, circ_w[b] as usize);
                debug_assert_ne!(s1, s2);
                rest &= !(1u64 << s1 | 1u64 << s2);
                let cop = &coproduct[(labels >> ca & 1) as usize];
                for i in 0..2u64 {
                    for jj in 0..2u64 {
                        let coeff = cop.coeff(i as usize, jj as usize);
                        if !ring.is_zero(coeff) {
                            col.push((base_w + (rest | i << s1 | jj << s2) as usize, sign(coeff)));
                        }
                    }
                }
            }
        }
    }
    for col in cols.iter_mut() {
        col.sort_unstable_by_key(|e| e.0);
    }
    cols
}

/// Generator counts per `(degree, q)`, e.g. for graded Euler characteristics.
pub fn generator_counts<R: Ring>(c: &FilteredComplex<R>) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for i in c.degrees() {
        for g in c.generators(i) {
            *out.entry((i, g.q)).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{CoefficientRing, PrimeField, Rationals};
    use crate::linkio::{parse_braid, parse_pd};
    use num_rational::BigRational;

    fn lee() -> (TheoryTriple, FrobeniusSystem<Rationals>) {
        let t = TheoryTriple::from_ints(CoefficientRing::Rationals, 0, 1).unwrap();
        let s = FrobeniusSystem::for_triple(Rationals, &t).unwrap();
        (t, s)
    }

    #[test]
    fn smoothing_circle_counts() {
        // The Knot Atlas trefoil is left-handed: its all-0 smoothing is the
        // non-oriented one.
        let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        assert_eq!(smooth(&d, 0b000).n_circles(), 3);
        assert_eq!(smooth(&d, 0b111).n_circles(), 2);
        let r = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]").unwrap();
        assert_eq!(smooth(&r, 0b000).n_circles(), 2);
        assert_eq!(smooth(&r, 0b111).n_circles(), 3);
        let u = LinkDiagram::unknot();
        assert_eq!(smooth(&u, 0).n_circles(), 1);
        assert_eq!(smooth(&u, 0).circles, vec![Vec::<u32>::new()]);
    }

    #[test]
    fn circles_ordered_by_min_label() {
        let d = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]").unwrap();
        for v in 0..16 {
            let s = smooth(&d, v);
            let mins: Vec<u32> = s.circles.iter().map(|c| c[0]).collect();
            assert!(mins.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(s.circles.iter().map(Vec::len).sum::<usize>(), 8);
        }
    }

    #[test]
    fn unknot_complex() {
        let (t, s) = lee();
        let c = build_complex(&LinkDiagram::unknot(), &t, &s).unwrap();
        assert_eq!(c.total_rank(), 2);
        let qs: Vec<i64> = c.generators(0).iter().map(|g| g.q).collect();
        assert_eq!(qs, vec![1, -1]);
        assert!(c.boundary(0).is_zero());
    }

    #[test]
    fn trefoil_cube_shape() {
        let (t, s) = lee();
        let d = parse_braid(&[1, 1, 1], 2).unwrap();
        let c = build_complex(&d, &t, &s).unwrap();
        assert_eq!((c.min_degree(), c.max_degree()), (0, 3));
        // Σ_v 2^{k(v)} with k = 2, 1, 2, 3 by cube degree.
        assert_eq!([c.rank(0), c.rank(1), c.rank(2), c.rank(3)], [4, 3 * 2, 3 * 4, 8]);
        assert!(c.d_squared_is_zero());
        assert!(c.is_filtered());
    }

    #[test]
    fn hopf_bar_natan() {
        let f2 = PrimeField::new(2).unwrap();
        let t = TheoryTriple::from_ints(CoefficientRing::PrimeField(2), 1, 0).unwrap();
        let s = FrobeniusSystem::for_triple(f2, &t).unwrap();
        let d = parse_braid(&[1, 1], 2).unwrap();
        let c = build_complex(&d, &t, &s).unwrap();
        assert_eq!(c.degrees().count(), 3);
        assert!(c.d_squared_is_zero());
    }

    #[test]
    fn khovanov_is_graded() {
        let t = TheoryTriple::from_ints(CoefficientRing::Rationals, 0, 0).unwrap();
        let s = FrobeniusSystem::for_triple(Rationals, &t).unwrap();
        let d = parse_braid(&[1, -2, 1, -2], 3).unwrap();
        let c = build_complex(&d, &t, &s).unwrap();
        assert!(c.is_graded());
        let (t, s) = lee();
        assert!(!build_complex(&d, &t, &s).unwrap().is_graded());
    }

    #[test]
    fn too_large() {
        let (t, s) = lee();
        let d = parse_braid(&[1, 1, 1], 2).unwrap();
        let r = build_complex_with(&d, &t, &s, BuildOptions { max_crossings: 2, verify: true });
        assert!(matches!(r, Err(Error::CubeTooLarge { crossings: 3, limit: 2 })));
    }

    #[test]
    fn chain_filtration_degree() {
        let g = |q, degree| Generator { vertex: 0, labels: 0, degree, q };
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        assert_eq!(q_of_chain(&Rationals, &[(g(1, 0), one.clone()), (g(-1, 0), one.clone())]).unwrap(), -1);
        assert_eq!(q_of_chain(&Rationals, &[(g(1, 0), one.clone())]).unwrap(), 1);
        assert_eq!(q_of_chain(&Rationals, &[(g(1, 0), one.clone()), (g(-1, 0), zero.clone())]).unwrap(), 1);
        assert!(matches!(q_of_chain(&Rationals, &[(g(1, 0), zero)]), Err(Error::ZeroChain)));
        assert!(matches!(q_of_chain(&Rationals, &[(g(1, 0), one.clone()), (g(1, 1), one)]), Err(Error::MixedDegree)));
    }

    #[test]
    fn mismatched_system_rejected() {
        let (t, _) = lee();
        let kh =
            FrobeniusSystem::new(Rationals, BigRational::from_integer(0.into()), BigRational::from_integer(0.into())).unwrap();
        assert!(build_complex(&LinkDiagram::unknot(), &t, &kh).is_err());
    }
}
