//! Line-oriented text format for structures.
//!
//! ```text
//! structure A4
//! n 4
//! R 0 1
//! R 1 2
//! R 2 3
//! R 3 0
//! S 0 1 2 3
//! end
//! ```
//!
//! Vertices may also be written as names; names are assigned indices in
//! order of first appearance. `S` lines give one tuple and the loader adds
//! its partner. Output lists `R` atoms and canonical `S` representatives in
//! lexicographic order, so serialising and re-parsing is the identity.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::perms::format::content_lines;
use crate::structure::{canonical_rep, Flags, Structure};

enum Names {
    Unknown,
    Numeric,
    Named(HashMap<String, usize>),
}

impl Names {
    fn resolve(&mut self, tok: &str, line: usize) -> Result<usize> {
        let numeric = tok.parse::<usize>().ok();
        match (self, numeric) {
            (s @ Names::Unknown, Some(v)) => {
                *s = Names::Numeric;
                Ok(v)
            }
            (Names::Numeric, Some(v)) => Ok(v),
            (s @ Names::Unknown, None) => {
                *s = Names::Named(HashMap::from([(tok.to_string(), 0)]));
                Ok(0)
            }
            (Names::Named(map), None) => {
                let next = map.len();
                Ok(*map.entry(tok.to_string()).or_insert(next))
            }
            _ => Err(Error::Parse {
                line,
                msg: format!("vertex {tok:?} mixes numeric and named vertices"),
            }),
        }
    }
}

/// Parses every `structure ... end` block in `text`.
pub fn parse_structures(text: &str) -> Result<Vec<Structure>> {
    struct Pending {
        name: String,
        n: Option<usize>,
        flags: Flags,
        names: Names,
        r: Vec<(usize, usize)>,
        s: Vec<[usize; 4]>,
        start: usize,
    }
    let mut out = Vec::new();
    let mut cur: Option<Pending> = None;
    for (lineno, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let perr = |msg: String| Error::Parse { line: lineno, msg };
        match (toks[0], cur.as_mut()) {
            ("structure", None) => {
                if toks.len() != 2 {
                    return Err(perr("expected `structure <name>`".into()));
                }
                cur = Some(Pending {
                    name: toks[1].to_string(),
                    n: None,
                    flags: Flags::default(),
                    names: Names::Unknown,
                    r: Vec::new(),
                    s: Vec::new(),
                    start: lineno,
                });
            }
            ("n", Some(p)) if toks.len() == 2 => {
                p.n = Some(crate::perms::format::parse_usize(toks[1], lineno)?);
            }
            ("flags", Some(p)) => {
                for f in &toks[1..] {
                    match *f {
                        "allow_loops" => p.flags.allow_loops = true,
                        "undirected" => p.flags.undirected = true,
                        other => return Err(perr(format!("unknown flag {other:?}"))),
                    }
                }
            }
            ("R", Some(p)) if toks.len() == 3 => {
                let u = p.names.resolve(toks[1], lineno)?;
                let v = p.names.resolve(toks[2], lineno)?;
                p.r.push((u, v));
            }
            ("S", Some(p)) if toks.len() == 5 => {
                let mut t = [0; 4];
                for i in 0..4 {
                    t[i] = p.names.resolve(toks[i + 1], lineno)?;
                }
                p.s.push(t);
            }
            ("end", Some(_)) => {
                let p = cur.take().expect("inside block");
                let n = p.n.ok_or_else(|| Error::Parse {
                    line: p.start,
                    msg: "structure block lacks an `n` line".into(),
                })?;
                if let Names::Named(map) = &p.names {
                    if map.len() > n {
                        return Err(perr(format!("{} named vertices exceed n = {n}", map.len())));
                    }
                }
                let st = Structure::with_flags(p.name, n, p.flags, p.r, p.s).map_err(|e| {
                    Error::Parse {
                        line: lineno,
                        msg: e.to_string(),
                    }
                })?;
                out.push(st);
            }
            _ => return Err(perr(format!("unexpected line {line:?}"))),
        }
    }
    if let Some(p) = cur {
        return Err(Error::Parse {
            line: p.start,
            msg: "unterminated structure block".into(),
        });
    }
    Ok(out)
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut all = parse_structures(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        k => Err(Error::input(format!("expected exactly one structure, found {k}"))),
    }
}

pub fn format_structure(m: &Structure) -> String {
    let mut out = format!("structure {}\nn {}\n", m.name(), m.n());
    let f = m.flags();
    match (f.allow_loops, f.undirected) {
        (true, true) => out.push_str("flags allow_loops undirected\n"),
        (true, false) => out.push_str("flags allow_loops\n"),
        (false, true) => out.push_str("flags undirected\n"),
        (false, false) => {}
    }
    for &(u, v) in m.r() {
        if f.undirected && u > v {
            continue;
        }
        let _ = writeln!(out, "R {u} {v}");
    }
    for t in m.s() {
        if *t == canonical_rep(*t) {
            let _ = writeln!(out, "S {} {} {} {}", t[0], t[1], t[2], t[3]);
        }
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_vertices_follow_file_order() {
        let text = "structure B\nn 3\nR x y\nR z x # comment\nend\n";
        let m = parse_structure(text).unwrap();
        assert!(m.has_edge(0, 1));
        assert!(m.has_edge(2, 0));
    }

    #[test]
    fn mixing_names_and_indices_fails() {
        let text = "structure B\nn 3\nR x 1\nend\n";
        assert!(matches!(parse_structure(text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn serialisation_is_canonical() {
        let text = "structure A\nn 4\nS 2 3 0 1\nR 1 0\nend\n";
        let m = parse_structure(text).unwrap();
        let out = format_structure(&m);
        assert_eq!(out, "structure A\nn 4\nR 1 0\nS 0 1 2 3\nend\n");
        assert_eq!(parse_structure(&out).unwrap(), m);
    }

    #[test]
    fn missing_n_is_reported() {
        assert!(parse_structure("structure A\nend\n").is_err());
        assert!(parse_structure("structure A\nn 2\n").is_err());
    }
}
