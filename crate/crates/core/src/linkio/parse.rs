//! Text formats: `PD[X[a,b,c,d],...]` with optional `;reverse=e1,e2` and
//! `;loops=n` extras, and `braid:<strands>:<letters>`.

use std::fmt;

use crate::error::{Error, Result};

use super::{braid, LinkDiagram, Orientation};

/// Parse a PD code. `PD[]` is the crossingless unknot.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parts = compact.split(';');
    let body = parts.next().unwrap_or_default();
    let tuples = parse_pd_body(body)?;

    let mut reverse = Vec::new();
    let mut loops = None;
    for extra in parts {
        let (key, value) =
            extra.split_once('=').ok_or_else(|| Error::MalformedPd(format!("expected key=value, got {extra:?}")))?;
        match key {
            "reverse" => {
                for v in value.split(',').filter(|v| !v.is_empty()) {
                    reverse.push(parse_label(v)?);
                }
            }
            "loops" => loops = Some(value.parse::<usize>().map_err(|_| Error::MalformedPd(format!("bad loop count {value:?}")))?),
            _ => return Err(Error::MalformedPd(format!("unknown extra {key:?}"))),
        }
    }
    let free_loops = loops.unwrap_or(if tuples.is_empty() { 1 } else { 0 });
    LinkDiagram::build(tuples, free_loops, Orientation::Infer { reverse: &reverse })
}

fn parse_label(s: &str) -> Result<u32> {
    match s.parse::<u32>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::MalformedPd(format!("edge label {s:?} is not a positive integer"))),
    }
}

fn parse_pd_body(body: &str) -> Result<Vec<[u32; 4]>> {
    let inner = body
        .strip_prefix("PD[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::MalformedPd(format!("expected PD[...], got {body:?}")))?;
    let mut tuples = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let after = rest.strip_prefix("X[").ok_or_else(|| Error::MalformedPd(format!("expected X[...] at {rest:?}")))?;
        let close = after.find(']').ok_or_else(|| Error::MalformedPd("unclosed X[".into()))?;
        let labels: Vec<u32> = after[..close].split(',').map(parse_label).collect::<Result<_>>()?;
        let tuple: [u32; 4] = labels
            .try_into()
            .map_err(|v: Vec<u32>| Error::MalformedPd(format!("crossing has {} strands, expected 4", v.len())))?;
        tuples.push(tuple);
        rest = &after[close + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(Error::MalformedPd("trailing comma".into()));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(Error::MalformedPd(format!("expected ',' at {rest:?}")));
        }
    }
    Ok(tuples)
}

/// Parse any accepted diagram string: a PD code or
/// `braid:<strands>:<letters>` with comma-separated signed letters.
pub fn parse_input(text: &str) -> Result<LinkDiagram> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("braid:") {
        let (strands, letters) = rest
            .split_once(':')
            .ok_or_else(|| Error::MalformedBraid(format!("expected braid:<strands>:<letters>, got {t:?}")))?;
        let strands =
            strands.trim().parse::<usize>().map_err(|_| Error::MalformedBraid(format!("bad strand count {strands:?}")))?;
        let word = parse_letters(letters)?;
        braid::parse_braid(&word, strands)
    } else {
        parse_pd(t)
    }
}

/// Comma- or space-separated signed integers; an empty list is allowed.
pub(crate) fn parse_letters(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| w.parse::<i64>().map_err(|_| Error::MalformedBraid(format!("bad letter {w:?}"))))
        .collect()
}

impl LinkDiagram {
    /// PD code with the extras needed to reproduce this exact diagram.
    pub fn to_pd_string(&self) -> String {
        let tuples: Vec<[u32; 4]> = self.crossings.iter().map(|c| c.strands).collect();
        let mut out = String::from("PD[");
        for (i, t) in tuples.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("X[{},{},{},{}]", t[0], t[1], t[2], t[3]));
        }
        out.push(']');

        // Components whose stored orientation differs from plain inference.
        let inferred = LinkDiagram::build(tuples, 0, Orientation::Infer { reverse: &[] }).ok();
        let mut reverse = Vec::new();
        let mut seen = vec![false; self.traced_components];
        for e in self.edges.values() {
            if seen[e.component] {
                continue;
            }
            seen[e.component] = true;
            let agrees = inferred.as_ref().and_then(|d| d.edge(e.label)).is_some_and(|f| f.head == e.head);
            if !agrees {
                reverse.push(e.label.to_string());
            }
        }
        if !reverse.is_empty() {
            out.push_str(";reverse=");
            out.push_str(&reverse.join(","));
        }
        let default_loops = if self.crossings.is_empty() { 1 } else { 0 };
        if self.free_loops != default_loops {
            out.push_str(&format!(";loops={}", self.free_loops));
        }
        out
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_errors() {
        for bad in ["", "PD", "PD[X[1,2,3]]", "PD[X[1,2,3,4,5]]", "PD[X[0,1,1,0]]", "PD[X[1,1,2,2],]", "PD[Y[1,1,2,2]]"] {
            assert!(matches!(parse_pd(bad), Err(Error::MalformedPd(_))), "{bad}");
        }
        assert!(matches!(parse_pd("PD[X[1,1,2,2]];foo=1"), Err(Error::MalformedPd(_))));
    }

    #[test]
    fn whitespace_is_ignored() {
        let a = parse_pd("PD[ X[1, 4, 2, 5], X[3,6,4,1], X[5,2,6,3] ]").unwrap();
        let b = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reverse_extra_flips_linking_signs() {
        let d = parse_pd("PD[X[4,1,3,2],X[2,3,1,4]]").unwrap();
        let r = parse_pd("PD[X[4,1,3,2],X[2,3,1,4]];reverse=1").unwrap();
        assert_eq!((r.c_plus(), r.c_minus()), (d.c_minus(), d.c_plus()));
        assert_eq!(parse_pd(&r.to_pd_string()).unwrap(), r);
        assert!(!d.to_pd_string().contains(';'));
    }

    #[test]
    fn reverse_of_over_only_component_is_serialized() {
        let d = parse_pd("PD[X[1,3,2,4],X[2,3,1,4]]").unwrap();
        assert_eq!((d.c_plus(), d.c_minus()), (1, 1));
        let r = parse_pd("PD[X[1,3,2,4],X[2,3,1,4]];reverse=3").unwrap();
        assert_ne!(d, r);
        assert!(r.to_pd_string().ends_with(";reverse=3"));
        assert_eq!(parse_pd(&r.to_pd_string()).unwrap(), r);
    }

    #[test]
    fn loops_extra() {
        let d = parse_pd("PD[];loops=3").unwrap();
        assert_eq!(d.n_components(), 3);
        assert_eq!(d.to_pd_string(), "PD[];loops=3");
        assert_eq!(parse_pd("PD[]").unwrap().to_pd_string(), "PD[]");
        let e = parse_pd("PD[X[1,1,2,2]];loops=1").unwrap();
        assert_eq!(e.n_components(), 2);
        assert_eq!(parse_pd(&e.to_pd_string()).unwrap(), e);
    }

    #[test]
    fn braid_input_strings() {
        let d = parse_input("braid:2:1,1,1").unwrap();
        assert_eq!((d.c_plus(), d.c_minus()), (3, 0));
        let d = parse_input("braid:3:1 -2 1 -2").unwrap();
        assert_eq!(d.n_crossings(), 4);
        assert!(matches!(parse_input("braid:x:1"), Err(Error::MalformedBraid(_))));
        assert!(matches!(parse_input("braid:2:3"), Err(Error::BadLetter { letter: 3, strands: 2 })));
    }
}
