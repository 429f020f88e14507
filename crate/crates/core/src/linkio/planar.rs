//! Faces of the diagram graph, read off the counterclockwise slot order.
//!
//! Corner `(X, s)` is the region at crossing `X` between slots `s` and
//! `s+1`. Walking along an edge from tail `(X, s)` to head `(Y, s')`, the left
//! face contains corners `(X, s)` and `(Y, s'-1)`, the right face `(X, s-1)`
//! and `(Y, s')`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

use super::LinkDiagram;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn corner(crossing: usize, pos: u8) -> usize {
    4 * crossing + (pos as usize % 4)
}

/// Face id per corner (dense `0..n_faces`), and `(left, right)` faces of
/// each edge.
struct Faces {
    of_corner: Vec<usize>,
    n_faces: usize,
    sides: HashMap<u32, (usize, usize)>,
}

fn faces(d: &LinkDiagram) -> Faces {
    let n = d.crossings.len();
    let mut uf = UnionFind::new(4 * n);
    for e in d.edges.values() {
        let (t, h) = (e.tail, e.head);
        uf.union(corner(t.crossing, t.pos), corner(h.crossing, h.pos + 3));
        uf.union(corner(t.crossing, t.pos + 3), corner(h.crossing, h.pos));
    }
    let mut dense = HashMap::new();
    let of_corner: Vec<usize> = (0..4 * n)
        .map(|c| {
            let root = uf.find(c);
            let next = dense.len();
            *dense.entry(root).or_insert(next)
        })
        .collect();
    let sides = d
        .edges
        .values()
        .map(|e| (e.label, (of_corner[corner(e.tail.crossing, e.tail.pos)], of_corner[corner(e.tail.crossing, e.tail.pos + 3)])))
        .collect();
    Faces { of_corner, n_faces: dense.len(), sides }
}

fn pieces(d: &LinkDiagram) -> usize {
    let n = d.crossings.len();
    let mut uf = UnionFind::new(n);
    for e in d.edges.values() {
        uf.union(e.tail.crossing, e.head.crossing);
    }
    (0..n).filter(|&x| uf.find(x) == x).count()
}

/// Every connected piece of the diagram must be a sphere:
/// `V - E + F = 2 * pieces` with `E = 2V`.
pub(super) fn check_planar(d: &LinkDiagram) -> Result<()> {
    let f = faces(d);
    let expected = d.crossings.len() + 2 * pieces(d);
    if f.n_faces != expected {
        return Err(Error::InconsistentDiagram(format!("not planar: {} faces, expected {expected}", f.n_faces)));
    }
    Ok(())
}

pub(super) fn left_face_colors(d: &LinkDiagram) -> HashMap<u32, u8> {
    let f = faces(d);
    let mut adj = vec![Vec::new(); f.n_faces];
    for &(l, r) in f.sides.values() {
        adj[l].push(r);
        adj[r].push(l);
    }
    let mut color = vec![u8::MAX; f.n_faces];
    for start in 0..f.n_faces {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                }
            }
        }
    }
    debug_assert!(f.sides.values().all(|&(l, r)| color[l] != color[r]));
    debug_assert_eq!(f.of_corner.len(), 4 * d.crossings.len());
    f.sides.iter().map(|(&label, &(l, _))| (label, color[l])).collect()
}

#[cfg(test)]
mod tests {
    use super::super::parse_pd;
    use super::*;

    #[test]
    fn trefoil_has_five_faces() {
        let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        assert_eq!(faces(&d).n_faces, 5);
        let colors = left_face_colors(&d);
        assert_eq!(colors.len(), 6);
    }

    #[test]
    fn non_planar_rotation_rejected() {
        // A Hopf link with one crossing listed clockwise lies on a torus.
        assert!(parse_pd("PD[X[4,1,3,2],X[2,3,1,4]]").is_ok());
        let r = parse_pd("PD[X[4,2,3,1],X[2,3,1,4]]");
        assert!(matches!(r, Err(Error::InconsistentDiagram(_))), "{r:?}");
    }

    #[test]
    fn checkerboard_alternates_across_crossings() {
        // Faces around a crossing alternate, so the left colour flips at
        // every passage.
        let d = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]").unwrap();
        let colors = left_face_colors(&d);
        for e in d.edges() {
            let exit = super::super::Slot::new(e.head.crossing, (e.head.pos + 2) % 4);
            let next = d.crossings()[exit.crossing].strands[exit.pos as usize];
            assert_ne!(colors[&e.label], colors[&next]);
        }
    }
}
