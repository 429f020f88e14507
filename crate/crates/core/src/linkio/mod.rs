//! Oriented planar link diagrams: PD codes, braid closures and the
//! crossing-sign data the gradings depend on.
//!
//! PD crossings follow the Knot Atlas convention: `X[a,b,c,d]` lists the
//! incoming under-strand first and the remaining strands counterclockwise, so
//! the under-strand always runs `a -> c`. A crossing is positive when the
//! over-strand runs `d -> b`.

mod braid;
mod ops;
mod parse;
mod planar;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};

pub use braid::{parse_braid, torus_knot};
pub use ops::{connected_sum, disjoint_union, mirror};
pub use parse::{parse_input, parse_pd};

/// Crossing sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// A position at a crossing: crossing index and PD slot `0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub crossing: usize,
    pub pos: u8,
}

impl Slot {
    pub fn new(crossing: usize, pos: u8) -> Self {
        Slot { crossing, pos }
    }

    fn opposite(self) -> Slot {
        Slot { crossing: self.crossing, pos: (self.pos + 2) % 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    /// Edge labels in PD order: incoming under, then counterclockwise.
    pub strands: [u32; 4],
    pub sign: Sign,
}

impl Crossing {
    /// The two labels joined by the 0-smoothing arcs `(a,b)`, `(c,d)` or the
    /// 1-smoothing arcs `(a,d)`, `(b,c)`.
    pub fn arcs(&self, one_smoothing: bool) -> [(u32, u32); 2] {
        let [a, b, c, d] = self.strands;
        if one_smoothing {
            [(a, d), (b, c)]
        } else {
            [(a, b), (c, d)]
        }
    }
}

/// Orientation data for one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub label: u32,
    /// Where the edge leaves a crossing.
    pub tail: Slot,
    /// Where the edge enters a crossing.
    pub head: Slot,
    pub component: usize,
}

/// An oriented link diagram. Immutable once built.
///
/// Crossingless unknotted components are kept as a count of free loops,
/// since PD codes cannot express them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    edges: BTreeMap<u32, Edge>,
    traced_components: usize,
    free_loops: usize,
    c_plus: usize,
    c_minus: usize,
}

/// How the constructor orients components.
pub(crate) enum Orientation<'a> {
    /// Under-strands run `a -> c`; components without an under-passage
    /// follow label succession. Components containing a listed label are
    /// reversed afterwards.
    Infer { reverse: &'a [u32] },
    /// Explicit head slot for (at least) one edge of every component.
    Heads(&'a HashMap<u32, Slot>),
}

impl LinkDiagram {
    /// The crossingless unknot.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `n` disjoint crossingless circles.
    pub fn unlink(n: usize) -> Self {
        LinkDiagram { crossings: Vec::new(), edges: BTreeMap::new(), traced_components: 0, free_loops: n, c_plus: 0, c_minus: 0 }
    }

    /// Build from PD tuples, validating incidence, orientability and
    /// planarity.
    pub fn from_pd(tuples: &[[u32; 4]], free_loops: usize, reverse: &[u32]) -> Result<Self> {
        Self::build(tuples.to_vec(), free_loops, Orientation::Infer { reverse })
    }

    pub(crate) fn build(mut tuples: Vec<[u32; 4]>, free_loops: usize, orientation: Orientation<'_>) -> Result<Self> {
        // Incidence: every label in exactly two slots.
        let mut slots: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (x, t) in tuples.iter().enumerate() {
            for (pos, &label) in t.iter().enumerate() {
                if label == 0 {
                    return Err(Error::MalformedPd("edge labels must be positive".into()));
                }
                slots.entry(label).or_default().push(Slot::new(x, pos as u8));
            }
        }
        if let Some((label, s)) = slots.iter().find(|(_, s)| s.len() != 2) {
            return Err(Error::InconsistentDiagram(format!("edge {label} appears {} time(s)", s.len())));
        }
        let other_slot = |label: u32, here: Slot| -> Slot {
            let s = &slots[&label];
            if s[0] == here {
                s[1]
            } else {
                s[0]
            }
        };

        // Trace components as cyclic sequences of (edge, slot it runs into).
        let mut component_of: HashMap<u32, usize> = HashMap::new();
        let mut traces: Vec<Vec<(u32, Slot)>> = Vec::new();
        for &start in slots.keys() {
            if component_of.contains_key(&start) {
                continue;
            }
            let comp = traces.len();
            let mut trace = Vec::new();
            let (mut label, mut toward) = (start, slots[&start][1]);
            loop {
                component_of.insert(label, comp);
                trace.push((label, toward));
                let exit = toward.opposite();
                let next = tuples[exit.crossing][exit.pos as usize];
                let next_toward = other_slot(next, exit);
                if next == start && next_toward == slots[&start][1] {
                    break;
                }
                (label, toward) = (next, next_toward);
                if trace.len() > 2 * slots.len() {
                    return Err(Error::InconsistentDiagram("component tracing did not close".into()));
                }
            }
            traces.push(trace);
        }

        // Decide a direction per component: true = along the trace.
        let mut forward = Vec::with_capacity(traces.len());
        for trace in &traces {
            let mut votes = trace.iter().filter_map(|(_, s)| match s.pos {
                0 => Some(true),
                2 => Some(false),
                _ => None,
            });
            let dir = match votes.next() {
                Some(first) => {
                    if votes.any(|v| v != first) {
                        return Err(Error::InconsistentDiagram(format!(
                            "under-strand directions disagree along the component of edge {}",
                            trace[0].0
                        )));
                    }
                    first
                }
                None => match &orientation {
                    Orientation::Heads(heads) => trace
                        .iter()
                        .find_map(|(l, toward)| heads.get(l).map(|h| h == toward))
                        .ok_or_else(|| Error::InconsistentDiagram(format!("no orientation for edge {}", trace[0].0)))?,
                    Orientation::Infer { .. } => succession_direction(trace)?,
                },
            };
            forward.push(dir);
        }
        if let Orientation::Heads(heads) = &orientation {
            for (ci, trace) in traces.iter().enumerate() {
                for (l, toward) in trace {
                    if let Some(h) = heads.get(l) {
                        if (h == toward) != forward[ci] {
                            return Err(Error::InconsistentDiagram(format!("orientation of edge {l} contradicts the PD")));
                        }
                    }
                }
            }
        }
        if let Orientation::Infer { reverse } = &orientation {
            for &label in reverse.iter() {
                let comp = *component_of
                    .get(&label)
                    .ok_or_else(|| Error::InconsistentDiagram(format!("reversed edge {label} not in diagram")))?;
                forward[comp] = !forward[comp];
            }
        }

        // Heads and tails, then rotate crossings whose under-strand now
        // enters at slot c so that `a` is incoming again.
        let mut heads: HashMap<u32, Slot> = HashMap::new();
        for (ci, trace) in traces.iter().enumerate() {
            for &(label, toward) in trace {
                let head = if forward[ci] { toward } else { other_slot(label, toward) };
                heads.insert(label, head);
            }
        }
        let rotate: Vec<bool> = tuples.iter().enumerate().map(|(x, t)| heads[&t[2]] == Slot::new(x, 2)).collect();
        for (x, t) in tuples.iter_mut().enumerate() {
            if rotate[x] {
                t.rotate_left(2);
            }
        }
        let remap = |s: Slot| if rotate[s.crossing] { s.opposite() } else { s };
        let mut edges = BTreeMap::new();
        for (&label, s) in &slots {
            let head = remap(heads[&label]);
            let tail = if remap(s[0]) == head { remap(s[1]) } else { remap(s[0]) };
            edges.insert(label, Edge { label, tail, head, component: component_of[&label] });
        }

        let mut crossings = Vec::with_capacity(tuples.len());
        let (mut c_plus, mut c_minus) = (0, 0);
        for (x, t) in tuples.iter().enumerate() {
            let d_in = edges[&t[3]].head == Slot::new(x, 3);
            let sign = if d_in { Sign::Positive } else { Sign::Negative };
            match sign {
                Sign::Positive => c_plus += 1,
                Sign::Negative => c_minus += 1,
            }
            debug_assert_eq!(edges[&t[0]].head, Slot::new(x, 0));
            crossings.push(Crossing { strands: *t, sign });
        }

        let diagram = LinkDiagram { crossings, edges, traced_components: traces.len(), free_loops, c_plus, c_minus };
        planar::check_planar(&diagram)?;
        Ok(diagram)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn c_plus(&self) -> usize {
        self.c_plus
    }

    pub fn c_minus(&self) -> usize {
        self.c_minus
    }

    pub fn writhe(&self) -> i64 {
        self.c_plus as i64 - self.c_minus as i64
    }

    /// Components traced through crossings plus free loops.
    pub fn n_components(&self) -> usize {
        self.traced_components + self.free_loops
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Number of components that pass through at least one crossing; these
    /// are indexed `0..traced_components` and free loops follow.
    pub fn traced_components(&self) -> usize {
        self.traced_components
    }

    pub fn is_knot(&self) -> bool {
        self.n_components() == 1
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge(&self, label: u32) -> Option<&Edge> {
        self.edges.get(&label)
    }

    /// Edge labels in ascending order.
    pub fn labels(&self) -> impl Iterator<Item = u32> + '_ {
        self.edges.keys().copied()
    }

    pub fn max_label(&self) -> u32 {
        self.edges.keys().next_back().copied().unwrap_or(0)
    }

    /// Crossing signs after reversing the components flagged in
    /// `reversed` (indexed like [`Edge::component`]).
    pub fn signs_with_orientation(&self, reversed: &[bool]) -> Vec<Sign> {
        self.crossings
            .iter()
            .map(|c| {
                let under = self.edges[&c.strands[0]].component;
                let over = self.edges[&c.strands[1]].component;
                if reversed[under] != reversed[over] {
                    c.sign.flip()
                } else {
                    c.sign
                }
            })
            .collect()
    }

    /// Colour (0/1) of the face to the left of each edge in a checkerboard
    /// colouring of the diagram's faces.
    pub fn left_face_colors(&self) -> HashMap<u32, u8> {
        planar::left_face_colors(self)
    }

    /// Renumber edges `1..` along each component in flow direction, so
    /// label succession matches orientation.
    pub(crate) fn relabeled(&self) -> LinkDiagram {
        if self.crossings.is_empty() {
            return self.clone();
        }
        let mut next_of: HashMap<u32, u32> = HashMap::new();
        for e in self.edges.values() {
            let exit = e.head.opposite();
            next_of.insert(e.label, self.crossings[exit.crossing].strands[exit.pos as usize]);
        }
        let mut new_label: HashMap<u32, u32> = HashMap::new();
        let mut counter = 0;
        for &start in self.edges.keys() {
            if new_label.contains_key(&start) {
                continue;
            }
            let mut l = start;
            while !new_label.contains_key(&l) {
                counter += 1;
                new_label.insert(l, counter);
                l = next_of[&l];
            }
        }
        let tuples: Vec<[u32; 4]> = self.crossings.iter().map(|c| c.strands.map(|l| new_label[&l])).collect();
        let heads: HashMap<u32, Slot> = self.edges.values().map(|e| (new_label[&e.label], e.head)).collect();
        LinkDiagram::build(tuples, self.free_loops, Orientation::Heads(&heads)).expect("relabelling preserves validity")
    }
}

/// Direction of an all-over component from label succession: within the
/// component's sorted labels, each label flows into the next, cyclically.
fn succession_direction(trace: &[(u32, Slot)]) -> Result<bool> {
    let mut labels: Vec<u32> = trace.iter().map(|t| t.0).collect();
    labels.sort_unstable();
    let succ = |l: u32| {
        let k = labels.binary_search(&l).expect("label in component");
        labels[(k + 1) % labels.len()]
    };
    let n = trace.len();
    let along = (0..n).all(|i| succ(trace[i].0) == trace[(i + 1) % n].0);
    let against = (0..n).all(|i| succ(trace[(i + 1) % n].0) == trace[i].0);
    match (along, against) {
        (true, _) => Ok(true),
        (false, true) => Ok(false),
        _ => Err(Error::InconsistentDiagram(format!(
            "cannot orient the component of edge {}: no under-crossing and labels are not successive",
            labels[0]
        ))),
    }
}
