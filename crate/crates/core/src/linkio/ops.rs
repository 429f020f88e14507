use std::collections::HashMap;

use super::{LinkDiagram, Orientation, Sign, Slot};

/// Mirror image: every crossing changed, orientation kept. An involution.
pub fn mirror(d: &LinkDiagram) -> LinkDiagram {
    let mut tuples = Vec::with_capacity(d.crossings.len());
    let mut shift = Vec::with_capacity(d.crossings.len());
    for c in &d.crossings {
        let [a, b, cc, dd] = c.strands;
        // The old over-strand becomes the under-strand; its incoming end
        // goes first.
        match c.sign {
            Sign::Positive => {
                tuples.push([dd, a, b, cc]);
                shift.push(1u8);
            }
            Sign::Negative => {
                tuples.push([b, cc, dd, a]);
                shift.push(3u8);
            }
        }
    }
    let heads: HashMap<u32, Slot> =
        d.edges.values().map(|e| (e.label, Slot::new(e.head.crossing, (e.head.pos + shift[e.head.crossing]) % 4))).collect();
    LinkDiagram::build(tuples, d.free_loops, Orientation::Heads(&heads)).expect("mirror preserves validity")
}

fn shifted(d: &LinkDiagram, label_offset: u32, crossing_offset: usize) -> (Vec<[u32; 4]>, HashMap<u32, Slot>) {
    let tuples = d.crossings.iter().map(|c| c.strands.map(|l| l + label_offset)).collect();
    let heads =
        d.edges.values().map(|e| (e.label + label_offset, Slot::new(e.head.crossing + crossing_offset, e.head.pos))).collect();
    (tuples, heads)
}

/// Split union: `b` drawn beside `a`, labels of `b` offset past `a`.
pub fn disjoint_union(a: &LinkDiagram, b: &LinkDiagram) -> LinkDiagram {
    let (mut tuples, mut heads) = shifted(a, 0, 0);
    let (tb, hb) = shifted(b, a.max_label(), a.crossings.len());
    tuples.extend(tb);
    heads.extend(hb);
    LinkDiagram::build(tuples, a.free_loops + b.free_loops, Orientation::Heads(&heads)).expect("union of valid diagrams is valid")
}

/// Connected sum along the minimal-label edges of `a` and `b` (the
/// components containing them are joined). A crossingless side acts as an
/// unknot summand.
pub fn connected_sum(a: &LinkDiagram, b: &LinkDiagram) -> LinkDiagram {
    if a.crossings.is_empty() || b.crossings.is_empty() {
        let (base, other) = if a.crossings.is_empty() { (b, a) } else { (a, b) };
        let mut out = base.clone();
        // One crossingless circle is absorbed into the sum.
        out.free_loops += other.free_loops.saturating_sub(1);
        return out;
    }
    let offset = a.max_label();
    let (mut tuples, mut heads) = shifted(a, 0, 0);
    let (tb, hb) = shifted(b, offset, a.crossings.len());
    tuples.extend(tb);
    heads.extend(hb);

    let e1 = a.labels().next().expect("crossings imply edges");
    let e2 = b.labels().next().expect("crossings imply edges") + offset;
    let (h1, h2) = (heads[&e1], heads[&e2]);
    tuples[h1.crossing][h1.pos as usize] = e2;
    tuples[h2.crossing][h2.pos as usize] = e1;
    heads.insert(e1, h2);
    heads.insert(e2, h1);
    LinkDiagram::build(tuples, a.free_loops + b.free_loops, Orientation::Heads(&heads))
        .expect("band sum along outer edges is planar")
        .relabeled()
}

#[cfg(test)]
mod tests {
    use super::super::{parse_braid, parse_pd};
    use super::*;

    const FIG8: &str = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]";

    #[test]
    fn mirror_is_involution_and_flips_signs() {
        for pd in [FIG8, "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]", "PD[X[4,1,3,2],X[2,3,1,4]]", "PD[X[1,3,2,4],X[2,3,1,4]]"] {
            let d = parse_pd(pd).unwrap();
            let m = mirror(&d);
            assert_eq!((m.c_plus(), m.c_minus()), (d.c_minus(), d.c_plus()));
            assert_eq!(mirror(&m), d);
        }
    }

    #[test]
    fn connected_sum_counts() {
        let t = parse_braid(&[1, 1, 1], 2).unwrap();
        let f = parse_pd(FIG8).unwrap();
        let s = connected_sum(&t, &f);
        assert_eq!(s.n_crossings(), 7);
        assert_eq!(s.n_components(), 1);
        assert_eq!((s.c_plus(), s.c_minus()), (5, 2));
        assert_eq!(connected_sum(&LinkDiagram::unknot(), &f), f);
        assert_eq!(connected_sum(&f, &LinkDiagram::unknot()), f);
    }

    #[test]
    fn union_adds_components() {
        let t = parse_braid(&[1, 1, 1], 2).unwrap();
        let u = disjoint_union(&t, &LinkDiagram::unlink(2));
        assert_eq!(u.n_components(), 3);
        let tt = disjoint_union(&t, &t);
        assert_eq!((tt.n_crossings(), tt.n_components(), tt.c_plus()), (6, 2, 6));
    }
}
