//! The line-oriented system file format.
//!
//! ```text
//! system direct            # or: system inverse
//! levels 3
//! dim 1 1
//! dim 2 2
//! dim 3 3
//! map 1 2                  # inverse systems: map 2 1
//!   1: 1 1                 # row 1 reads column 1 with weight 1
//!   2: -                   # zero row
//! map 2 3
//!   1: 1 1
//!   2: 2 1
//!   3: -
//! extend inclusion         # or: restriction | repeat_last | none
//! ```
//!
//! Indices are 1-based; weights are integers or `a/b` literals.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hom::{CanonicalHom, Row};
use crate::scalar::Scalar;

use super::{DirectSystem, ExtensionRule, InverseSystem, Orientation, SequentialSystem};

/// Either kind of system, as read from a file.
#[derive(Clone, Debug)]
pub enum AnySystem {
    Direct(DirectSystem),
    Inverse(InverseSystem),
}

impl AnySystem {
    pub fn orientation(&self) -> Orientation {
        match self {
            AnySystem::Direct(_) => Orientation::Direct,
            AnySystem::Inverse(_) => Orientation::Inverse,
        }
    }
}

fn err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

struct MapBlock {
    line: usize,
    level: usize,
    rows: Vec<(usize, usize, Row)>,
}

pub fn parse_system(text: &str) -> Result<AnySystem> {
    let mut orientation: Option<Orientation> = None;
    let mut levels: Option<(usize, usize)> = None;
    let mut dims: Vec<Option<usize>> = Vec::new();
    let mut maps: Vec<MapBlock> = Vec::new();
    let mut rule: Option<ExtensionRule> = None;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if rule.is_some() {
            return Err(err(line_no, "content after `extend`"));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if let Some(head) = tokens[0].strip_suffix(':') {
            let block = maps
                .last_mut()
                .ok_or_else(|| err(line_no, "row outside a `map` block"))?;
            let x: usize = head
                .parse()
                .map_err(|_| err(line_no, format!("bad row index `{}`", head)))?;
            let row = match tokens[1..] {
                ["-"] => None,
                [j, w] => {
                    let j: usize = j
                        .parse()
                        .map_err(|_| err(line_no, format!("bad column index `{}`", j)))?;
                    let w: Scalar = w
                        .parse()
                        .map_err(|_| err(line_no, format!("bad weight `{}`", w)))?;
                    if !w.is_positive() {
                        return Err(err(
                            line_no,
                            "weights must be positive; write `-` for a zero row",
                        ));
                    }
                    if j == 0 {
                        return Err(err(line_no, "column indices start at 1"));
                    }
                    Some((j - 1, w))
                }
                _ => return Err(err(line_no, "expected `x: j w` or `x: -`")),
            };
            block.rows.push((line_no, x, row));
            continue;
        }
        match tokens[0] {
            "system" => {
                if orientation.is_some() {
                    return Err(err(line_no, "duplicate `system` line"));
                }
                orientation = Some(match tokens[1..] {
                    ["direct"] => Orientation::Direct,
                    ["inverse"] => Orientation::Inverse,
                    _ => return Err(err(line_no, "expected `system direct` or `system inverse`")),
                });
            }
            _ if orientation.is_none() => {
                return Err(err(line_no, "file must start with `system`"))
            }
            "levels" => {
                if levels.is_some() {
                    return Err(err(line_no, "duplicate `levels` line"));
                }
                let n = parse_count(&tokens, line_no)?;
                if n == 0 {
                    return Err(err(line_no, "at least one level is required"));
                }
                levels = Some((line_no, n));
                dims = vec![None; n];
            }
            _ if levels.is_none() => {
                return Err(err(line_no, "`levels` must precede dims and maps"))
            }
            "dim" => {
                let [k, d] = parse_pair(&tokens, line_no)?;
                let slot = dims
                    .get_mut(k.wrapping_sub(1))
                    .ok_or_else(|| err(line_no, format!("level {} out of range", k)))?;
                if slot.is_some() {
                    return Err(err(line_no, format!("duplicate dim for level {}", k)));
                }
                if d == 0 {
                    return Err(err(line_no, "dimensions must be positive"));
                }
                *slot = Some(d);
            }
            "map" => {
                let [a, b] = parse_pair(&tokens, line_no)?;
                let o = orientation.expect("checked above");
                let level = match o {
                    Orientation::Direct if b == a + 1 => a,
                    Orientation::Inverse if a == b + 1 => b,
                    Orientation::Direct => {
                        return Err(err(line_no, "direct maps go from level k to k+1"))
                    }
                    Orientation::Inverse => {
                        return Err(err(line_no, "inverse maps go from level k+1 to k"))
                    }
                };
                maps.push(MapBlock {
                    line: line_no,
                    level,
                    rows: Vec::new(),
                });
            }
            "extend" => {
                rule = Some(match tokens[1..] {
                    [name] => ExtensionRule::from_name(name).ok_or_else(|| {
                        err(line_no, format!("unknown extension rule `{}`", name))
                    })?,
                    _ => return Err(err(line_no, "expected `extend <rule>`")),
                });
            }
            other => return Err(err(line_no, format!("unknown directive `{}`", other))),
        }
    }

    let orientation = orientation.ok_or_else(|| err(last_line.max(1), "missing `system` line"))?;
    let (levels_line, n_levels) =
        levels.ok_or_else(|| err(last_line.max(1), "missing `levels` line"))?;
    let dims: Vec<usize> = dims
        .into_iter()
        .enumerate()
        .map(|(k, d)| d.ok_or_else(|| err(levels_line, format!("missing dim for level {}", k + 1))))
        .collect::<Result<_>>()?;

    let mut steps: Vec<Option<CanonicalHom>> = vec![None; n_levels - 1];
    for block in maps {
        let k = block.level;
        if k == 0 || k >= n_levels {
            return Err(err(
                block.line,
                format!("map touches a level outside 1..{}", n_levels),
            ));
        }
        if steps[k - 1].is_some() {
            return Err(err(block.line, format!("duplicate map for step {}", k)));
        }
        let (dom, cod) = orientation.step_dims(dims[k - 1], dims[k]);
        let mut rows: Vec<Option<Row>> = vec![None; cod];
        for (line, x, row) in block.rows {
            if x == 0 || x > cod {
                return Err(err(line, format!("row {} out of range 1..{}", x, cod)));
            }
            if rows[x - 1].is_some() {
                return Err(err(line, format!("duplicate row {}", x)));
            }
            if let Some((j, _)) = &row {
                if *j >= dom {
                    return Err(err(
                        line,
                        format!("column {} out of range 1..{}", j + 1, dom),
                    ));
                }
            }
            rows[x - 1] = Some(row);
        }
        let rows: Vec<Row> = rows
            .into_iter()
            .enumerate()
            .map(|(x, r)| r.ok_or_else(|| err(block.line, format!("missing row {}", x + 1))))
            .collect::<Result<_>>()?;
        steps[k - 1] =
            Some(CanonicalHom::new(dom, rows).map_err(|e| err(block.line, e.to_string()))?);
    }
    let steps: Vec<CanonicalHom> = steps
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            s.ok_or_else(|| err(last_line.max(1), format!("missing map for step {}", k + 1)))
        })
        .collect::<Result<_>>()?;

    let rule = rule.unwrap_or(ExtensionRule::None);
    let built = match orientation {
        Orientation::Direct => DirectSystem::from_prefix(dims, steps, rule).map(AnySystem::Direct),
        Orientation::Inverse => {
            InverseSystem::from_prefix(dims, steps, rule).map(AnySystem::Inverse)
        }
    };
    built.map_err(|e| err(last_line.max(1), e.to_string()))
}

fn parse_count(tokens: &[&str], line: usize) -> Result<usize> {
    match tokens[1..] {
        [n] => n
            .parse()
            .map_err(|_| err(line, format!("bad count `{}`", n))),
        _ => Err(err(line, format!("expected `{} <n>`", tokens[0]))),
    }
}

fn parse_pair(tokens: &[&str], line: usize) -> Result<[usize; 2]> {
    match tokens[1..] {
        [a, b] => {
            let a = a
                .parse()
                .map_err(|_| err(line, format!("bad number `{}`", a)))?;
            let b = b
                .parse()
                .map_err(|_| err(line, format!("bad number `{}`", b)))?;
            Ok([a, b])
        }
        _ => Err(err(line, format!("expected `{} <a> <b>`", tokens[0]))),
    }
}

/// Writes levels `1..=depth` in canonical form. Systems that are not a
/// prefix plus rule are written with `extend none`.
pub fn emit_system<S: SequentialSystem>(s: &S, depth: usize) -> Result<String> {
    if depth == 0 {
        return Err(Error::InvalidLevels { from: 1, to: 0 });
    }
    let mut out = String::new();
    let o = S::ORIENTATION;
    writeln!(out, "system {}", o.name()).unwrap();
    writeln!(out, "levels {}", depth).unwrap();
    for k in 1..=depth {
        writeln!(out, "dim {} {}", k, s.dim(k)?).unwrap();
    }
    for k in 1..depth {
        match o {
            Orientation::Direct => writeln!(out, "map {} {}", k, k + 1).unwrap(),
            Orientation::Inverse => writeln!(out, "map {} {}", k + 1, k).unwrap(),
        }
        for (x, row) in s.step(k)?.rows().iter().enumerate() {
            match row {
                Some((j, w)) => writeln!(out, "  {}: {} {}", x + 1, j + 1, w.to_literal()).unwrap(),
                None => writeln!(out, "  {}: -", x + 1).unwrap(),
            }
        }
    }
    let rule = s.extension_rule().unwrap_or(ExtensionRule::None);
    writeln!(out, "extend {}", rule.name()).unwrap();
    Ok(out)
}

impl AnySystem {
    pub fn emit(&self, depth: usize) -> Result<String> {
        match self {
            AnySystem::Direct(s) => emit_system(s, depth),
            AnySystem::Inverse(s) => emit_system(s, depth),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "system direct            # or: system inverse
levels 4                 # explicit prefix length
dim 1 1
dim 2 2
dim 3 3
dim 4 4
map 1 2                  # step from level 1 to level 2
  1: 1 1
  2: -
map 2 3
  1: 1 1
  2: 2 1
  3: -
map 3 4
  1: 1 1
  2: 2 1
  3: 3 1
  4: -
extend inclusion
";

    #[test]
    fn sample_is_inclusion_chain() {
        let AnySystem::Direct(s) = parse_system(SAMPLE).unwrap() else {
            panic!("expected direct")
        };
        for k in 1..8 {
            assert_eq!(s.step(k).unwrap(), CanonicalHom::inclusion(k, k + 1));
        }
    }

    #[test]
    fn canonical_round_trip() {
        let s = parse_system(SAMPLE).unwrap();
        let canonical = s.emit(4).unwrap();
        assert_eq!(
            parse_system(&canonical).unwrap().emit(4).unwrap(),
            canonical
        );
        let deeper = s.emit(6).unwrap();
        assert_eq!(parse_system(&deeper).unwrap().emit(6).unwrap(), deeper);
    }

    #[test]
    fn inverse_with_fractions() {
        let text =
            "system inverse\nlevels 2\ndim 1 1\ndim 2 2\nmap 2 1\n  1: 2 3/2\nextend restriction\n";
        let AnySystem::Inverse(s) = parse_system(text).unwrap() else {
            panic!("expected inverse")
        };
        let h = s.step(1).unwrap();
        assert_eq!(h.idx(0), Some(1));
        assert_eq!(h.weight().get(0), &Scalar::ratio(3, 2));
        assert_eq!(emit_system(&s, 2).unwrap(), text);
    }

    fn line_of(text: &str) -> usize {
        match parse_system(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!(
                "expected parse error, got {:?}",
                other.map(|s| s.orientation())
            ),
        }
    }

    #[test]
    fn errors_carry_lines() {
        // Row count disagrees with the codomain dimension.
        assert_eq!(
            line_of("system direct\nlevels 2\ndim 1 1\ndim 2 3\nmap 1 2\n  1: 1 1\n  2: -\n"),
            5
        );
        // Column out of range.
        assert_eq!(
            line_of("system direct\nlevels 2\ndim 1 1\ndim 2 2\nmap 1 2\n  1: 2 1\n  2: -\n"),
            6
        );
        assert_eq!(line_of("levels 2\n"), 1);
        assert_eq!(line_of("system direct\nlevels 1\ndim 1 1\nbogus\n"), 4);
        assert_eq!(
            line_of("system direct\nlevels 2\ndim 1 1\ndim 2 2\nmap 2 1\n"),
            5
        );
        assert_eq!(
            line_of("system direct\nlevels 1\ndim 1 1\nextend restriction\n"),
            4
        );
        assert_eq!(
            line_of("system direct\nlevels 2\ndim 1 1\ndim 2 2\nmap 1 2\n  1: 1 0\n  2: -\n"),
            6
        );
    }
}
