//! One report item per verb invocation on a single diagram.

use serde_json::{json, Map, Value};

use super::{DiagramPair, Item, NamedDiagram, Status};
use crate::error::{Error, Result};
use crate::frobenius::TheoryTriple;
use crate::homology::{analyze, compare_uct, Analysis, ComputeOptions, FiltrationProfile, HomologyResult};
use crate::invariant::{
    canonical_generators, s_from_profile, s_invariant, verify_main_theorem, verify_twist_equivalence, EntryStatus,
};
use crate::linkio::LinkDiagram;

fn verdict(pass: bool) -> (&'static str, Status) {
    if pass {
        ("PASS", Status::Ok)
    } else {
        ("FAIL", Status::Fail)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// `{degree: {rank, torsion, profile}}` with degrees as keys.
fn homology_json(h: &HomologyResult, p: &FiltrationProfile) -> Value {
    let mut degrees: Vec<i64> = h.degrees.keys().chain(p.degrees.keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = Map::new();
    for i in degrees {
        out.insert(i.to_string(), json!({ "rank": h.rank(i), "torsion": h.torsion(i), "profile": to_value(&p.steps(i)) }));
    }
    Value::Object(out)
}

fn summary_text(h: &HomologyResult) -> String {
    h.degrees
        .iter()
        .map(|(i, d)| {
            let tors: String = d.torsion.iter().map(|o| format!("+Z/{o}")).collect();
            format!("{i}:{}{tors}", d.rank)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn header(row: &NamedDiagram) -> Value {
    json!({
        "name": row.name,
        "components": row.diagram.n_components(),
        "crossings": row.diagram.n_crossings(),
    })
}

pub(super) fn homology_item(row: &NamedDiagram, t: &TheoryTriple, opts: ComputeOptions) -> Item {
    match analyze(&row.diagram, t, opts) {
        Ok(a) => {
            let mut v = header(row);
            v["triple"] = to_value(t);
            v["total"] = json!(a.homology.total_rank());
            v["complex_size"] = json!(a.complex_size);
            v["homology"] = homology_json(&a.homology, &a.profile);
            let text = format!("{} {t}: total {} [{}]", row.name, a.homology.total_rank(), summary_text(&a.homology));
            Item { value: v, text, status: Status::Ok }
        }
        Err(e) => Item::error(&row.name, Some(t), &e),
    }
}

pub(super) fn s_item(row: &NamedDiagram, t: &TheoryTriple, opts: ComputeOptions) -> Item {
    match s_invariant(&row.diagram, t, opts) {
        Ok(r) => {
            let text = format!("{} {t}: s = {} (s_min {}, s_max {})", row.name, r.s, r.s_min, r.s_max);
            let mut v = json!({ "name": row.name });
            if let (Value::Object(dst), Value::Object(src)) = (&mut v, to_value(&r)) {
                dst.extend(src);
            }
            Item { value: v, text, status: Status::Ok }
        }
        Err(e) => Item::error(&row.name, Some(t), &e),
    }
}

pub(super) fn theorem_item(row: &NamedDiagram, triples: &[TheoryTriple], opts: ComputeOptions) -> Item {
    match verify_main_theorem(&row.diagram, triples, opts) {
        Ok(r) => {
            let (word, status) = verdict(r.pass);
            let entries: Vec<String> = r
                .entries
                .iter()
                .map(|e| match (e.status, e.s) {
                    (EntryStatus::Ok, Some(s)) => format!("{}={s}", e.triple),
                    _ => format!("{}=HYPOTHESIS_VIOLATED", e.triple),
                })
                .collect();
            let text = format!("{} {word} s = {} [{}]", row.name, r.s.map_or("-".into(), |s| s.to_string()), entries.join(" "));
            let mut v = json!({ "name": row.name, "verdict": word });
            if let (Value::Object(dst), Value::Object(src)) = (&mut v, to_value(&r)) {
                dst.extend(src);
            }
            Item { value: v, text, status }
        }
        Err(e) => Item::error(&row.name, None, &e),
    }
}

pub(super) fn twist_item(row: &NamedDiagram, src: &TheoryTriple, dst: &TheoryTriple, max_crossings: usize) -> Item {
    match verify_twist_equivalence(&row.diagram, src, dst, max_crossings) {
        Ok(r) => {
            let (word, status) = verdict(r.pass);
            let text = format!("{} {src} -> {dst}: {word} (a = {}, b = {}, {} chains)", row.name, r.a, r.b, r.chains_tested);
            let mut v = json!({ "name": row.name, "verdict": word });
            if let (Value::Object(dst), Value::Object(src)) = (&mut v, to_value(&r)) {
                dst.extend(src);
            }
            Item { value: v, text, status }
        }
        Err(e) => Item::error(&row.name, Some(src), &e),
    }
}

pub(super) fn torsion_item(row: &NamedDiagram, t: &TheoryTriple, p: u64, opts: ComputeOptions) -> Item {
    match compare_uct(&row.diagram, t, p, opts) {
        Ok(r) => {
            let (word, status) = verdict(r.holds);
            let text = format!(
                "{} {t} mod {p}: {word} (Z [{}], F_{p} [{}])",
                row.name,
                summary_text(&r.integral),
                summary_text(&r.mod_p)
            );
            let v = json!({
                "name": row.name,
                "triple": to_value(t),
                "p": p,
                "verdict": word,
                "scalars_below_p": r.scalars_below_p,
                "rank_mismatches": r.rank_mismatches,
                "p_torsion_degrees": r.p_torsion_degrees,
                "profiles_agree": r.profiles_agree,
                "integral": homology_json(&r.integral, &r.integral_profile),
                "mod_p": homology_json(&r.mod_p, &r.mod_p_profile),
                "tensored_profile": to_value(&r.tensored_profile.degrees),
            });
            Item { value: v, text, status }
        }
        Err(e @ (Error::GammaVanishesModP { .. } | Error::NotDiagonalizable(_))) => {
            let v = json!({
                "name": row.name,
                "triple": to_value(t),
                "p": p,
                "verdict": "HYPOTHESIS_VIOLATED",
                "message": e.to_string(),
            });
            Item { value: v, text: format!("{} {t} mod {p}: HYPOTHESIS_VIOLATED ({e})", row.name), status: Status::Ok }
        }
        Err(e) => Item::error(&row.name, Some(t), &e),
    }
}

pub(super) fn canonical_item(row: &NamedDiagram, t: &TheoryTriple, max_crossings: usize) -> Item {
    let result: Result<(Value, String, bool)> = crate::with_ring!(t.ring(), |r| {
        canonical_generators(r, &row.diagram, t, max_crossings).map(|set| {
            let gens: Vec<Value> = set
                .generators
                .iter()
                .map(|g| {
                    let basis = set.complex.generators(g.degree);
                    let cycle: Vec<Value> = g
                        .cycle
                        .iter()
                        .map(|(i, c)| json!({ "vertex": basis[*i].vertex, "labels": basis[*i].labels, "coefficient": c.to_string() }))
                        .collect();
                    json!({
                        "reversed": g.reversed,
                        "degree": g.degree,
                        "vertex": g.vertex,
                        "circles": g.circle_labels.iter().map(|&b| if b { "beta" } else { "alpha" }).collect::<Vec<_>>(),
                        "q": g.q,
                        "cycle": cycle,
                    })
                })
                .collect();
            let expected = set.generators.len();
            let pass = set.class_rank == expected && set.homology_dim == expected;
            let v = json!({
                "name": row.name,
                "triple": to_value(t),
                "class_rank": set.class_rank,
                "homology_dim": set.homology_dim,
                "generators": gens,
            });
            let text = format!(
                "{} {t}: {} generators, classes span {}, homology {}",
                row.name, expected, set.class_rank, set.homology_dim
            );
            (v, text, pass)
        })
    });
    match result {
        Ok((mut v, text, pass)) => {
            let (word, status) = verdict(pass);
            v["verdict"] = json!(word);
            Item { value: v, text: format!("{text}: {word}"), status }
        }
        Err(e) => Item::error(&row.name, Some(t), &e),
    }
}

/// Per triple: total dimension, and when `γ` exists the dimension law
/// `2^components` in even degrees and (for knots) `s`. Fails when a law
/// breaks or two values of `s` differ.
pub(super) fn table_item(row: &NamedDiagram, triples: &[TheoryTriple], opts: ComputeOptions) -> Item {
    let d = &row.diagram;
    let expected = 1usize << d.n_components();
    let mut pass = true;
    let mut s_values = Vec::new();
    let mut entries = Vec::new();
    let mut texts = Vec::new();
    for t in triples {
        let a = match analyze(d, t, opts) {
            Ok(a) => a,
            Err(e) => return Item::error(&row.name, Some(t), &e),
        };
        let total = a.homology.total_rank();
        let mut entry = json!({ "triple": to_value(t), "total": total });
        let mut text = format!("{t}: {total}");
        if t.gamma().is_some() {
            let even = a.homology.degrees.iter().all(|(i, h)| i % 2 == 0 || h.rank == 0);
            let law = total == expected && even;
            pass &= law;
            entry["dim_law"] = json!(law);
            if !law {
                text.push_str(" (dimension law fails)");
            }
            if d.is_knot() {
                match s_from_profile(d, t, a.profile.steps(0)) {
                    Ok(r) => {
                        entry["s"] = json!(r.s);
                        text.push_str(&format!(" s={}", r.s));
                        s_values.push(r.s);
                    }
                    Err(e) => return Item::error(&row.name, Some(t), &e),
                }
            }
        }
        entries.push(entry);
        texts.push(text);
    }
    let s_agree = s_values.windows(2).all(|w| w[0] == w[1]);
    pass &= s_agree;
    let (word, status) = verdict(pass);
    let mut v = header(row);
    v["verdict"] = json!(word);
    v["s"] = if s_agree { json!(s_values.first()) } else { Value::Null };
    v["entries"] = Value::Array(entries);
    Item { value: v, text: format!("{} {word} [{}]", row.name, texts.join("; ")), status }
}

fn same_analysis(a: &Analysis, b: &Analysis) -> bool {
    a.homology.degrees == b.homology.degrees && a.profile == b.profile
}

/// Two diagrams of one link must agree in homology and profile under every
/// triple (hence in `s` for knots).
pub(super) fn pair_item(pair: &DiagramPair, triples: &[TheoryTriple], opts: ComputeOptions) -> Item {
    let mut entries = Vec::new();
    let mut pass = true;
    let mut failed = Vec::new();
    for t in triples {
        let both = analyze(&pair.left.diagram, t, opts).and_then(|l| Ok((l, analyze(&pair.right.diagram, t, opts)?)));
        let (l, r) = match both {
            Ok(x) => x,
            Err(e) => return Item::error(&pair.name, Some(t), &e),
        };
        let same = same_analysis(&l, &r);
        pass &= same;
        if !same {
            failed.push(t.to_string());
        }
        let s = knot_s(&pair.left.diagram, t, &l);
        entries.push(json!({
            "triple": to_value(t),
            "total": l.homology.total_rank(),
            "agree": same,
            "s": s,
        }));
    }
    let (word, status) = verdict(pass);
    let v = json!({
        "name": pair.name,
        "move": pair.kind,
        "verdict": word,
        "entries": entries,
    });
    let detail = if failed.is_empty() { String::new() } else { format!(" (differs under {})", failed.join(", ")) };
    Item { value: v, text: format!("{} {} {word}{detail}", pair.name, pair.kind), status }
}

fn knot_s(d: &LinkDiagram, t: &TheoryTriple, a: &Analysis) -> Option<i64> {
    if !d.is_knot() || t.gamma().is_none() {
        return None;
    }
    s_from_profile(d, t, a.profile.steps(0)).ok().map(|r| r.s)
}
