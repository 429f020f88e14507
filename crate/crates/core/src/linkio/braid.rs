//! Braid closures. Strands run upward; `σ_i` (letter `i`) crosses strand
//! positions `i` and `i+1` with the left strand passing over, `-i` its
//! inverse.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::{LinkDiagram, Orientation, Slot};

/// Closure of the braid word on `strands` strands. Positions never touched
/// by a letter become free loops.
pub fn parse_braid(word: &[i64], strands: usize) -> Result<LinkDiagram> {
    if strands == 0 {
        return Err(Error::MalformedBraid("a braid needs at least one strand".into()));
    }
    for &letter in word {
        if letter == 0 || letter.unsigned_abs() as usize >= strands {
            return Err(Error::BadLetter { letter, strands });
        }
    }

    let mut next_label = strands as u32;
    let bottom: Vec<u32> = (1..=strands as u32).collect();
    let mut current = bottom.clone();
    let mut tuples = Vec::with_capacity(word.len());
    let mut heads: HashMap<u32, Slot> = HashMap::new();
    for (x, &letter) in word.iter().enumerate() {
        let left = letter.unsigned_abs() as usize - 1;
        let right = left + 1;
        let (new_left, new_right) = (next_label + 1, next_label + 2);
        next_label += 2;
        if letter > 0 {
            // Under-strand right -> left, over-strand left -> right.
            tuples.push([current[right], new_right, new_left, current[left]]);
            heads.insert(current[right], Slot::new(x, 0));
            heads.insert(current[left], Slot::new(x, 3));
        } else {
            // Under-strand left -> right, over-strand right -> left.
            tuples.push([current[left], current[right], new_right, new_left]);
            heads.insert(current[left], Slot::new(x, 0));
            heads.insert(current[right], Slot::new(x, 1));
        }
        current[left] = new_left;
        current[right] = new_right;
    }

    // Close up: the top label at each position is the bottom label.
    let rename: HashMap<u32, u32> = current.iter().zip(&bottom).map(|(&t, &b)| (t, b)).collect();
    for t in tuples.iter_mut() {
        for l in t.iter_mut() {
            if let Some(&b) = rename.get(l) {
                *l = b;
            }
        }
    }
    let free_loops = current.iter().zip(&bottom).filter(|(t, b)| t == b).count();
    let d = LinkDiagram::build(tuples, free_loops, Orientation::Heads(&heads))?;
    Ok(d.relabeled())
}

/// The `(p, q)` torus link as the closure of `(σ_1 ... σ_{p-1})^q`.
pub fn torus_knot(p: usize, q: usize) -> Result<LinkDiagram> {
    if p < 2 || q < 2 {
        return Err(Error::BadTorusParameters { p, q });
    }
    let word: Vec<i64> = (0..q).flat_map(|_| 1..p as i64).collect();
    parse_braid(&word, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_letters() {
        assert!(matches!(parse_braid(&[0], 3), Err(Error::BadLetter { letter: 0, .. })));
        assert!(matches!(parse_braid(&[3], 3), Err(Error::BadLetter { letter: 3, .. })));
        assert!(matches!(parse_braid(&[-3], 3), Err(Error::BadLetter { letter: -3, .. })));
        assert!(parse_braid(&[], 0).is_err());
    }

    #[test]
    fn torus_parameters() {
        assert!(matches!(torus_knot(1, 3), Err(Error::BadTorusParameters { p: 1, q: 3 })));
        let t = torus_knot(2, 3).unwrap();
        assert_eq!((t.n_crossings(), t.c_plus(), t.n_components()), (3, 3, 1));
        let t = torus_knot(3, 4).unwrap();
        assert_eq!((t.n_crossings(), t.c_plus(), t.n_components()), (8, 8, 1));
        assert_eq!(torus_knot(2, 4).unwrap().n_components(), 2);
        assert_eq!(torus_knot(3, 3).unwrap().n_components(), 3);
    }

    #[test]
    fn trivial_braids_are_unlinks() {
        let d = parse_braid(&[], 3).unwrap();
        assert_eq!((d.n_crossings(), d.n_components()), (0, 3));
        let d = parse_braid(&[1], 3).unwrap();
        assert_eq!((d.n_components(), d.free_loops()), (2, 1));
        assert_eq!(d.c_plus(), 1);
    }

    #[test]
    fn figure_eight_signs() {
        let d = parse_braid(&[1, -2, 1, -2], 3).unwrap();
        assert_eq!((d.c_plus(), d.c_minus(), d.n_components()), (2, 2, 1));
    }

    #[test]
    fn closure_matches_knot_atlas_orientation() {
        // Relabelled closures are oriented by plain inference.
        for word in [vec![1, 1, 1], vec![1, -2, 1, -2], vec![1, 1], vec![-1, -1, 2, -1, 2]] {
            let d = parse_braid(&word, 3.max(word.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap())).unwrap();
            let s = d.to_pd_string();
            assert!(!s.contains("reverse"), "{s}");
            assert_eq!(super::super::parse_pd(&s).unwrap(), d);
        }
    }
}
