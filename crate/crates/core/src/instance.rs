//! Plain-text instance files.
//!
//! ```text
//! # three lines of GF(2)^2
//! policy TOTAL
//! ambient A p=2 n=2
//! space V1 in A gen 1,0
//! space V2 in A gen 0,1
//! space V3 in A gen 1,1
//! ```
//!
//! `#` starts a comment. One `policy` line comes first, then one or more
//! `ambient` lines, then one or more `space` lines. Generators are separated by
//! `;` and coordinates by `,`; an empty generator list is the zero subspace.
//! Residues must already be reduced mod p.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::field::Prime;
use crate::multispace::{MultiVectorSpace, OperationPolicy};
use crate::subspace::{AmbientId, Subspace};

/// Largest ambient dimension accepted from a file.
pub const MAX_AMBIENT_DIM: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

impl InstanceError {
    pub fn line(&self) -> usize {
        match self {
            InstanceError::Parse { line, .. } | InstanceError::Semantic { line, .. } => *line,
        }
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn column(&self, offset: usize) -> usize {
        self.text[..offset].chars().count() + 1
    }

    fn parse_err(&self, offset: usize, message: impl Into<String>) -> InstanceError {
        InstanceError::Parse {
            line: self.number,
            column: self.column(offset),
            message: message.into(),
        }
    }

    fn semantic_err(&self, message: impl Into<String>) -> InstanceError {
        InstanceError::Semantic {
            line: self.number,
            message: message.into(),
        }
    }

    /// Whitespace-separated tokens with their byte offsets.
    fn tokens(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices() {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push((s, &self.text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, &self.text[s..]));
        }
        out
    }
}

fn parse_number(
    line: &Line<'_>,
    offset: usize,
    text: &str,
    what: &str,
) -> Result<u64, InstanceError> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(line.parse_err(offset, format!("expected {what}, found `{text}`")));
    }
    text.parse::<u64>()
        .map_err(|_| line.parse_err(offset, format!("{what} `{text}` is too large")))
}

fn keyed<'a>(
    line: &Line<'_>,
    token: Option<&(usize, &'a str)>,
    key: &str,
    end: usize,
) -> Result<(usize, &'a str), InstanceError> {
    match token {
        Some(&(off, t)) => match t.strip_prefix(key) {
            Some(rest) => Ok((off + key.len(), rest)),
            None => Err(line.parse_err(off, format!("expected `{key}<value>`, found `{t}`"))),
        },
        None => Err(line.parse_err(end, format!("missing `{key}<value>`"))),
    }
}

#[derive(PartialEq, PartialOrd)]
enum Section {
    Start,
    Policy,
    Ambients,
    Spaces,
}

/// Parses an instance file into a validated multi-vector space.
pub fn parse_instance(text: &str) -> Result<MultiVectorSpace, InstanceError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut section = Section::Start;
    let mut policy = OperationPolicy::Total;
    let mut ambients: HashMap<String, AmbientId> = HashMap::new();
    let mut components: Vec<Subspace> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = Line {
            number: idx + 1,
            text: content,
        };
        last_line = idx + 1;
        let tokens = line.tokens();
        let Some(&(kw_off, keyword)) = tokens.first() else {
            continue;
        };
        let end = content.trim_end().len();
        match keyword {
            "policy" => {
                if section != Section::Start {
                    return Err(line.parse_err(
                        kw_off,
                        "only one `policy` line is allowed, and it must come first",
                    ));
                }
                let Some(&(off, value)) = tokens.get(1) else {
                    return Err(line.parse_err(end, "missing policy (TOTAL or CLOSED)"));
                };
                policy = value.parse().map_err(|e: String| line.parse_err(off, e))?;
                if let Some(&(off, extra)) = tokens.get(2) {
                    return Err(line.parse_err(off, format!("unexpected `{extra}`")));
                }
                section = Section::Policy;
            }
            "ambient" => {
                match section {
                    Section::Start => {
                        return Err(line.parse_err(kw_off, "expected a `policy` line first"))
                    }
                    Section::Spaces => {
                        return Err(
                            line.parse_err(kw_off, "`ambient` lines must precede `space` lines")
                        )
                    }
                    _ => {}
                }
                let Some(&(_, label)) = tokens.get(1) else {
                    return Err(line.parse_err(end, "missing ambient label"));
                };
                let (p_off, p_text) = keyed(&line, tokens.get(2), "p=", end)?;
                let p_value = parse_number(&line, p_off, p_text, "a prime")?;
                let (n_off, n_text) = keyed(&line, tokens.get(3), "n=", end)?;
                let n = parse_number(&line, n_off, n_text, "a dimension")?;
                if let Some(&(off, extra)) = tokens.get(4) {
                    return Err(line.parse_err(off, format!("unexpected `{extra}`")));
                }
                let p = Prime::new(p_value).map_err(|e| line.semantic_err(e.to_string()))?;
                if n == 0 || n > MAX_AMBIENT_DIM {
                    return Err(line.semantic_err(format!(
                        "ambient dimension must be between 1 and {MAX_AMBIENT_DIM}"
                    )));
                }
                if ambients.contains_key(label) {
                    return Err(line.semantic_err(format!("ambient `{label}` is defined twice")));
                }
                ambients.insert(label.to_string(), AmbientId::new(label, p, n as usize));
                section = Section::Ambients;
            }
            "space" => {
                match section {
                    Section::Start => {
                        return Err(line.parse_err(kw_off, "expected a `policy` line first"))
                    }
                    Section::Policy => {
                        return Err(line
                            .parse_err(kw_off, "expected an `ambient` line before `space` lines"))
                    }
                    _ => {}
                }
                let Some(&(_, name)) = tokens.get(1) else {
                    return Err(line.parse_err(end, "missing space name"));
                };
                match tokens.get(2) {
                    Some(&(_, "in")) => {}
                    Some(&(off, t)) => {
                        return Err(line.parse_err(off, format!("expected `in`, found `{t}`")))
                    }
                    None => return Err(line.parse_err(end, "expected `in`")),
                }
                let Some(&(_, label)) = tokens.get(3) else {
                    return Err(line.parse_err(end, "missing ambient label"));
                };
                let gen_off = match tokens.get(4) {
                    Some(&(off, "gen")) => off,
                    Some(&(off, t)) => {
                        return Err(line.parse_err(off, format!("expected `gen`, found `{t}`")))
                    }
                    None => return Err(line.parse_err(end, "expected `gen`")),
                };
                let vectors = parse_generators(&line, gen_off + 3)?;
                let ambient = ambients
                    .get(label)
                    .ok_or_else(|| line.semantic_err(format!("unknown ambient `{label}`")))?;
                for v in &vectors {
                    if v.len() != ambient.dim() {
                        return Err(line.semantic_err(format!(
                            "vector has {} coordinates but ambient `{label}` has dimension {}",
                            v.len(),
                            ambient.dim()
                        )));
                    }
                    if let Some(&x) = v.iter().find(|&&x| x >= ambient.prime().get() as u64) {
                        return Err(line.semantic_err(format!(
                            "residue {x} is not reduced mod {}",
                            ambient.prime()
                        )));
                    }
                }
                if names.iter().any(|n| n == name) {
                    return Err(line.semantic_err(format!("space `{name}` is defined twice")));
                }
                let rows: Vec<Vec<u32>> = vectors
                    .into_iter()
                    .map(|v| v.into_iter().map(|x| x as u32).collect())
                    .collect();
                let space = Subspace::from_vectors(ambient, &rows)
                    .map_err(|e| line.semantic_err(e.to_string()))?;
                components.push(space);
                names.push(name.to_string());
                section = Section::Spaces;
            }
            other => {
                return Err(line.parse_err(
                    kw_off,
                    format!("expected `policy`, `ambient` or `space`, found `{other}`"),
                ))
            }
        }
    }

    let missing = match section {
        Section::Start => Some("missing `policy` line"),
        Section::Policy => Some("missing `ambient` line"),
        Section::Ambients => Some("missing `space` line"),
        Section::Spaces => None,
    };
    if let Some(message) = missing {
        return Err(InstanceError::Parse {
            line: last_line.max(1),
            column: 1,
            message: message.to_string(),
        });
    }
    MultiVectorSpace::with_names(components, names, policy).map_err(|e| InstanceError::Semantic {
        line: last_line,
        message: e.to_string(),
    })
}

/// Parses `v1; v2; ...` starting at byte `from` of the line.
fn parse_generators(line: &Line<'_>, from: usize) -> Result<Vec<Vec<u64>>, InstanceError> {
    let rest = &line.text[from..];
    if rest.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut vectors = Vec::new();
    let mut item_start = from;
    for item in rest.split(';') {
        let mut coords = Vec::new();
        let mut coord_start = item_start;
        for coord in item.split(',') {
            let lead = coord.len() - coord.trim_start().len();
            let t = coord.trim();
            if t.is_empty() {
                return Err(line.parse_err(coord_start + lead.min(coord.len()), "empty coordinate"));
            }
            coords.push(parse_number(line, coord_start + lead, t, "a residue")?);
            coord_start += coord.len() + 1;
        }
        vectors.push(coords);
        item_start += item.len() + 1;
    }
    Ok(vectors)
}

/// Writes `m` back out in instance-file syntax. Generators are the canonical
/// basis rows, so the output parses back to an equal instance.
pub fn render_instance(m: &MultiVectorSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "policy {}", m.policy());
    for a in m.ambients() {
        let _ = writeln!(out, "ambient {} p={} n={}", a.label(), a.prime(), a.dim());
    }
    for (name, c) in m.names().iter().zip(m.components()) {
        let rows: Vec<String> = c
            .basis()
            .row_iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        let gens = if rows.is_empty() {
            String::new()
        } else {
            format!(" {}", rows.join("; "))
        };
        let _ = writeln!(out, "space {} in {} gen{}", name, c.ambient().label(), gens);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_LINES: &str = "\
# three distinct lines of GF(2)^2
policy TOTAL
ambient A p=2 n=2
space V1 in A gen 1,0
space V2 in A gen 0,1   # comment after data
space V3 in A gen 1,1
";

    #[test]
    fn minimal_file() {
        let m = parse_instance("policy TOTAL\nambient A p=2 n=2\nspace V1 in A gen 1,0").unwrap();
        assert_eq!(m.k(), 1);
        assert_eq!(m.dim_greedy().unwrap(), 1);
        assert_eq!(m.policy(), OperationPolicy::Total);
    }

    #[test]
    fn three_lines_file() {
        let m = parse_instance(THREE_LINES).unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.names(), ["V1", "V2", "V3"]);
        assert_eq!(m.dim_greedy().unwrap(), 2);
        assert_eq!(m.dim_inclusion_exclusion().unwrap(), 3);
    }

    #[test]
    fn crlf_and_blank_lines() {
        let text = "policy CLOSED\r\n\r\nambient B p=3 n=3\r\nspace S in B gen 1, 2, 0 ; 0,0,1\r\n";
        let m = parse_instance(text).unwrap();
        assert_eq!(m.policy(), OperationPolicy::Closed);
        assert_eq!(m.components()[0].dim(), 2);
    }

    #[test]
    fn empty_generator_list_is_zero_space() {
        let m = parse_instance("policy TOTAL\nambient A p=5 n=2\nspace Z in A gen\n").unwrap();
        assert_eq!(m.components()[0].dim(), 0);
    }

    #[test]
    fn wrong_vector_length() {
        let err = parse_instance("policy TOTAL\nambient A p=2 n=2\nspace V in A gen 1,0,1\n")
            .unwrap_err();
        assert!(
            matches!(err, InstanceError::Semantic { line: 3, .. }),
            "{err}"
        );
    }

    #[test]
    fn semantic_errors() {
        let cases = [
            ("policy TOTAL\nambient A p=4 n=2\nspace V in A gen 1,0\n", 2),
            ("policy TOTAL\nambient A p=2 n=2\nspace V in B gen 1,0\n", 3),
            ("policy TOTAL\nambient A p=3 n=2\nspace V in A gen 1,3\n", 3),
            (
                "policy TOTAL\nambient A p=3 n=2\nambient A p=3 n=2\nspace V in A gen\n",
                3,
            ),
            (
                "policy TOTAL\nambient A p=3 n=2\nspace V in A gen\nspace V in A gen\n",
                4,
            ),
            ("policy TOTAL\nambient A p=3 n=0\nspace V in A gen\n", 2),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(InstanceError::Semantic { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn parse_errors_carry_columns() {
        let cases = [
            ("polcy TOTAL\n", 1, 1),
            ("policy total\n", 1, 8),
            ("policy TOTAL\nambient A q=2 n=2\n", 2, 11),
            ("policy TOTAL\nambient A p=x n=2\n", 2, 13),
            (
                "policy TOTAL\nambient A p=2 n=2\nspace V at A gen 1\n",
                3,
                9,
            ),
            (
                "policy TOTAL\nambient A p=2 n=2\nspace V in A gen 1,,0\n",
                3,
                20,
            ),
            (
                "policy TOTAL\nambient A p=2 n=2\nspace V in A gen 1,0;\n",
                3,
                22,
            ),
            (
                "policy TOTAL\nambient A p=2 n=2\nspace V in A gen 1,0\nambient B p=2 n=1\n",
                4,
                1,
            ),
            ("ambient A p=2 n=2\n", 1, 1),
            ("policy TOTAL\npolicy TOTAL\n", 2, 1),
        ];
        for (text, line, column) in cases {
            match parse_instance(text) {
                Err(InstanceError::Parse {
                    line: l, column: c, ..
                }) => assert_eq!((l, c), (line, column), "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn missing_sections() {
        for text in [
            "",
            "# nothing\n",
            "policy TOTAL\n",
            "policy TOTAL\nambient A p=2 n=1\n",
        ] {
            assert!(
                matches!(parse_instance(text), Err(InstanceError::Parse { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn render_parses_back() {
        let m = parse_instance(THREE_LINES).unwrap();
        let text = render_instance(&m);
        assert_eq!(parse_instance(&text).unwrap(), m);
        assert!(text.starts_with("policy TOTAL\nambient A p=2 n=2\nspace V1 in A gen 1,0\n"));
    }
}
