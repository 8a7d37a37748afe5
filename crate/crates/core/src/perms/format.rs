//! Text formats for permutations, groups and actions.
//!
//! ```text
//! group C4
//! perm 4: 1 2 3 0
//! end
//!
//! action rot over C4
//! points 2
//! map 0: 1 0
//! end
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perms::{GroupAction, PermGroup, Permutation};

/// Non-empty lines with `#` comments stripped, paired with 1-based line
/// numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, found {tok:?}"),
    })
}

/// Parses `perm <n>: i0 i1 ... i(n-1)`.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    parse_perm_line(text.trim(), 1)
}

fn parse_perm_line(line: &str, lineno: usize) -> Result<Permutation> {
    let rest = line.strip_prefix("perm").ok_or_else(|| Error::Parse {
        line: lineno,
        msg: "expected `perm <n>: ...`".into(),
    })?;
    let (n, images) = rest.split_once(':').ok_or_else(|| Error::Parse {
        line: lineno,
        msg: "missing ':' in perm line".into(),
    })?;
    let n = parse_usize(n.trim(), lineno)?;
    let images: Vec<usize> = images
        .split_whitespace()
        .map(|t| parse_usize(t, lineno))
        .collect::<Result<_>>()?;
    if images.len() != n {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("perm declares degree {n} but lists {} images", images.len()),
        });
    }
    Permutation::new(images).map_err(|e| Error::Parse {
        line: lineno,
        msg: e.to_string(),
    })
}

pub fn format_permutation(p: &Permutation) -> String {
    let imgs: Vec<String> = p.images().iter().map(|x| x.to_string()).collect();
    if imgs.is_empty() {
        format!("perm {}:", p.degree())
    } else {
        format!("perm {}: {}", p.degree(), imgs.join(" "))
    }
}

#[derive(Debug, Clone)]
pub struct NamedGroup {
    pub name: String,
    pub group: Arc<PermGroup>,
}

/// Parses one or more `group` blocks. A block with no `perm` lines is the
/// trivial group of degree 0 unless a `degree <n>` line is present.
pub fn parse_groups(text: &str) -> Result<Vec<NamedGroup>> {
    let mut out = Vec::new();
    let mut current: Option<(String, Option<usize>, Vec<Permutation>)> = None;
    for (lineno, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or_default();
        match (head, current.as_mut()) {
            ("group", None) => {
                let name = toks.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "group needs a name".into(),
                })?;
                current = Some((name.to_string(), None, Vec::new()));
            }
            ("degree", Some(cur)) => {
                let n = toks.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "degree needs a value".into(),
                })?;
                cur.1 = Some(parse_usize(n, lineno)?);
            }
            ("perm", Some(cur)) => cur.2.push(parse_perm_line(line, lineno)?),
            ("end", Some(_)) => {
                let (name, degree, gens) = current.take().expect("inside block");
                let degree = degree
                    .or_else(|| gens.first().map(|g| g.degree()))
                    .unwrap_or(0);
                let group = PermGroup::closure(degree, gens)?;
                out.push(NamedGroup {
                    name,
                    group: Arc::new(group),
                });
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unexpected line {line:?}"),
                })
            }
        }
    }
    if current.is_some() {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: "unterminated group block".into(),
        });
    }
    Ok(out)
}

pub fn parse_group(text: &str) -> Result<NamedGroup> {
    let mut groups = parse_groups(text)?;
    match groups.len() {
        1 => Ok(groups.remove(0)),
        k => Err(Error::input(format!("expected exactly one group, found {k}"))),
    }
}

pub fn format_group(name: &str, group: &PermGroup) -> String {
    let mut s = format!("group {name}\n");
    if group.generators().is_empty() {
        let _ = writeln!(s, "degree {}", group.degree());
    }
    for g in group.generators() {
        let _ = writeln!(s, "{}", format_permutation(g));
    }
    s.push_str("end\n");
    s
}

#[derive(Debug, Clone)]
pub struct NamedAction {
    pub name: String,
    pub group_name: String,
    pub action: GroupAction,
}

/// Parses `action` blocks; `groups` resolves the `over <groupname>` clause.
pub fn parse_actions(text: &str, groups: &[NamedGroup]) -> Result<Vec<NamedAction>> {
    let mut out = Vec::new();
    let mut current: Option<(String, String, Option<usize>, Vec<(usize, Vec<usize>)>)> = None;
    for (lineno, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or_default();
        let perr = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        match (head, current.as_mut()) {
            ("action", None) => {
                let name = toks.next().ok_or_else(|| perr("action needs a name"))?;
                if toks.next() != Some("over") {
                    return Err(perr("expected `action <name> over <group>`"));
                }
                let g = toks.next().ok_or_else(|| perr("missing group name"))?;
                current = Some((name.into(), g.into(), None, Vec::new()));
            }
            ("points", Some(cur)) => {
                let m = toks.next().ok_or_else(|| perr("points needs a value"))?;
                cur.2 = Some(parse_usize(m, lineno)?);
            }
            ("map", Some(cur)) => {
                let rest = line["map".len()..].trim();
                let (gi, imgs) = rest.split_once(':').ok_or_else(|| perr("missing ':'"))?;
                let gi = parse_usize(gi.trim(), lineno)?;
                let imgs = imgs
                    .split_whitespace()
                    .map(|t| parse_usize(t, lineno))
                    .collect::<Result<Vec<_>>>()?;
                cur.3.push((gi, imgs));
            }
            ("end", Some(_)) => {
                let (name, gname, points, mut maps) = current.take().expect("inside block");
                let group = groups
                    .iter()
                    .find(|g| g.name == gname)
                    .ok_or_else(|| Error::input(format!("action {name}: unknown group {gname}")))?;
                let points = points.ok_or_else(|| perr("action lacks a `points` line"))?;
                maps.sort_by_key(|m| m.0);
                let ngen = group.group.generators().len();
                if maps.iter().map(|m| m.0).ne(0..ngen) {
                    return Err(perr("need exactly one map line per generator index"));
                }
                let maps: Vec<Vec<usize>> = maps.into_iter().map(|m| m.1).collect();
                let action = GroupAction::from_generator_maps(group.group.clone(), points, &maps)?;
                out.push(NamedAction {
                    name,
                    group_name: gname,
                    action,
                });
            }
            _ => return Err(perr(&format!("unexpected line {line:?}"))),
        }
    }
    if current.is_some() {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: "unterminated action block".into(),
        });
    }
    Ok(out)
}

pub fn format_action(name: &str, group_name: &str, action: &GroupAction) -> String {
    let mut s = format!("action {name} over {group_name}\npoints {}\n", action.points());
    for (i, g) in action.group().generator_indices().into_iter().enumerate() {
        let imgs: Vec<String> = action.row(g).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "map {i}: {}", imgs.join(" "));
    }
    s.push_str("end\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_round_trip() {
        let text = "# cyclic\ngroup C4\nperm 4: 1 2 3 0\nend\n";
        let g = parse_group(text).unwrap();
        assert_eq!(g.name, "C4");
        assert_eq!(g.group.order(), 4);
        assert_eq!(format_group("C4", &g.group), "group C4\nperm 4: 1 2 3 0\nend\n");
    }

    #[test]
    fn action_block() {
        let groups = parse_groups("group C4\nperm 4: 1 2 3 0\nend\n").unwrap();
        let text = "action flip over C4\npoints 2\nmap 0: 1 0\nend\n";
        let a = &parse_actions(text, &groups).unwrap()[0];
        assert_eq!(a.action.points(), 2);
        assert_eq!(format_action("flip", "C4", &a.action), text);
    }

    #[test]
    fn bad_perm_line_reports_line_number() {
        let err = parse_groups("group X\nperm 3: 0 0 1\nend\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
