//! Independent oracle: tabulated s-invariants and unreduced integral
//! Khovanov homology for every knot of the bundled corpus.

use std::collections::BTreeMap;

use khlab::cli::{ingest_table_str, NamedDiagram, KNOTS_CSV};
use khlab::frobenius::TheoryTriple;
use khlab::homology::{analyze, ComputeOptions};
use khlab::invariant::s_invariant;
use rayon::prelude::*;

const REFERENCE: &str = include_str!("data/knotinfo-reference.csv");

struct Reference {
    s: i64,
    /// (degree, q) -> free rank.
    free: BTreeMap<(i64, i64), usize>,
    /// degree -> sorted torsion orders with multiplicity.
    torsion: BTreeMap<i64, Vec<u64>>,
}

fn fields(s: &str) -> impl Iterator<Item = Vec<i64>> + '_ {
    s.split(';').filter(|e| !e.is_empty()).map(|e| e.split(':').map(|v| v.parse().expect("integer field")).collect())
}

fn reference() -> BTreeMap<String, Reference> {
    let mut rdr = csv::Reader::from_reader(REFERENCE.as_bytes());
    rdr.records()
        .map(|rec| {
            let rec = rec.expect("well-formed reference");
            let mut free = BTreeMap::new();
            for f in fields(&rec[2]) {
                *free.entry((f[0], f[1])).or_default() += f[2] as usize;
            }
            let mut torsion: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
            for f in fields(&rec[3]) {
                torsion.entry(f[0]).or_default().extend(std::iter::repeat_n(f[3] as u64, f[2] as usize));
            }
            torsion.values_mut().for_each(|v| v.sort_unstable());
            (rec[0].to_owned(), Reference { s: rec[1].parse().expect("integer s"), free, torsion })
        })
        .collect()
}

/// Corpus knots with a reference row (the unknot has none).
fn tabulated(r: &BTreeMap<String, Reference>) -> Vec<NamedDiagram> {
    ingest_table_str(KNOTS_CSV).unwrap().rows.into_iter().filter(|k| r.contains_key(&k.name)).collect()
}

fn triple(s: &str) -> TheoryTriple {
    TheoryTriple::parse(s).unwrap()
}

#[test]
fn reference_covers_corpus() {
    let knots = ingest_table_str(KNOTS_CSV).unwrap();
    let r = reference();
    let missing: Vec<&str> = knots.rows.iter().map(|k| k.name.as_str()).filter(|n| !r.contains_key(*n)).collect();
    assert_eq!(missing, ["0_1"]);
    assert_eq!(r.len(), knots.rows.len() - 1);
}

#[test]
fn s_matches_reference() {
    let r = reference();
    let knots = tabulated(&r);
    let wrong: Vec<String> = knots
        .par_iter()
        .flat_map_iter(|k| {
            let want = r[&k.name].s;
            ["q/0/1", "fp:2/1/0", "z/1/0"].into_iter().filter_map(move |t| {
                let got = s_invariant(&k.diagram, &triple(t), ComputeOptions::default()).map(|x| x.s);
                (got != Ok(want)).then(|| format!("{} {t}: {got:?} != {want}", k.name))
            })
        })
        .collect();
    assert!(wrong.is_empty(), "{wrong:#?}");
}

/// For the graded theory the profile steps give the q-graded free part:
/// the multiplicity at a step is the drop to the next step.
#[test]
fn integral_khovanov_matches_reference() {
    let r = reference();
    let knots = tabulated(&r);
    let kh = triple("z/0/0");
    let wrong: Vec<String> = knots
        .par_iter()
        .filter_map(|k| {
            let a = analyze(&k.diagram, &kh, ComputeOptions::default()).unwrap();
            let mut free = BTreeMap::new();
            for (&i, steps) in &a.profile.degrees {
                for (n, s) in steps.iter().enumerate() {
                    let next = steps.get(n + 1).map_or(0, |t| t.dim);
                    free.insert((i, s.q), s.dim - next);
                }
            }
            let torsion: BTreeMap<i64, Vec<u64>> =
                a.homology.degrees.iter().filter(|(_, h)| !h.torsion.is_empty()).map(|(i, h)| (*i, h.torsion.clone())).collect();
            let want = &r[&k.name];
            (free != want.free || torsion != want.torsion).then(|| format!("{}: free {free:?} torsion {torsion:?}", k.name))
        })
        .collect();
    assert!(wrong.is_empty(), "{wrong:#?}");
}
