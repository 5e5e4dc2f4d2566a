//! Text formats: `.adm` adjacency matrices, arc-list JSON and DOT export.
//!
//! `.adm`: the first line holds the decimal order `n`, followed by exactly
//! `n` lines of `n` characters `0`/`1`; every line ends with `\n` and no
//! other whitespace is allowed.

use serde::{Deserialize, Serialize};

use crate::digraph::DenseDigraph;
use crate::error::ParseError;

/// Serializes to `.adm`.
pub fn to_adm(d: &DenseDigraph) -> String {
    let mut out = format!("{}\n", d.order());
    for row in d.bit_rows() {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// Parses `.adm` text with line/column diagnostics.
pub fn parse_adm(text: &str) -> Result<DenseDigraph, ParseError> {
    if text.is_empty() {
        return Err(ParseError::new(1, 0, "empty input"));
    }
    if !text.ends_with('\n') {
        let line = text.split('\n').count();
        return Err(ParseError::new(line, 0, "missing final newline"));
    }
    let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
    let header = lines[0];
    if header.is_empty() || !header.bytes().all(|b| b.is_ascii_digit()) {
        let col = header.bytes().position(|b| !b.is_ascii_digit()).map_or(1, |p| p + 1);
        return Err(ParseError::new(1, col, "order must be a decimal integer"));
    }
    let n: usize = header
        .parse()
        .map_err(|_| ParseError::new(1, 1, "order does not fit"))?;
    if n == 0 || n > crate::digraph::MAX_ORDER {
        return Err(ParseError::new(1, 1, format!("order {n} is outside 1..=64")));
    }
    if lines.len() - 1 != n {
        let line = (lines.len() + 1).min(n + 2);
        return Err(ParseError::new(
            line,
            0,
            format!("expected {n} matrix rows, found {}", lines.len() - 1),
        ));
    }
    let mut rows = vec![0u64; n];
    for (i, line) in lines[1..].iter().enumerate() {
        let lineno = i + 2;
        for (j, b) in line.bytes().enumerate() {
            if j >= n {
                return Err(ParseError::new(
                    lineno,
                    j + 1,
                    format!("row has {} entries, expected {n}", line.len()),
                ));
            }
            match b {
                b'0' => {}
                b'1' if i == j => {
                    return Err(ParseError::new(lineno, j + 1, "diagonal entry must be 0"));
                }
                b'1' => rows[i] |= 1u64 << j,
                _ => {
                    return Err(ParseError::new(
                        lineno,
                        j + 1,
                        format!("unexpected character {:?}", b as char),
                    ));
                }
            }
        }
        if line.len() < n {
            return Err(ParseError::new(
                lineno,
                line.len() + 1,
                format!("row has {} entries, expected {n}", line.len()),
            ));
        }
    }
    Ok(DenseDigraph::from_rows(n, &rows).expect("rows validated above"))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcListJson {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

/// Serializes to `{"n": .., "arcs": [[i,j], ..]}` with arcs sorted.
pub fn to_json(d: &DenseDigraph) -> String {
    let doc = ArcListJson {
        n: d.order(),
        arcs: d.arcs().map(|(i, j)| [i, j]).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Parses arc-list JSON. Duplicate arcs are accepted and merged.
pub fn parse_json(text: &str) -> Result<DenseDigraph, ParseError> {
    let doc: ArcListJson =
        serde_json::from_str(text).map_err(|e| ParseError::new(e.line(), e.column(), e.to_string()))?;
    let arcs: Vec<(usize, usize)> = doc.arcs.iter().map(|a| (a[0], a[1])).collect();
    DenseDigraph::from_arc_list(doc.n, &arcs).map_err(|e| ParseError::new(1, 0, e.to_string()))
}

/// Graphviz export with vertices `v0..v(n-1)`.
pub fn to_dot(d: &DenseDigraph) -> String {
    let mut out = String::from("digraph D {\n");
    for v in 0..d.order() {
        out.push_str(&format!("  v{v};\n"));
    }
    for (i, j) in d.arcs() {
        out.push_str(&format!("  v{i} -> v{j};\n"));
    }
    out.push_str("}\n");
    out
}

/// Serialized digraph formats. DOT is write-only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Adm,
    Json,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "adm" => Ok(Format::Adm),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown format {other:?} (expected adm, json or dot)")),
        }
    }
}

pub fn serialize(d: &DenseDigraph, format: Format) -> String {
    match format {
        Format::Adm => to_adm(d),
        Format::Json => to_json(d),
        Format::Dot => to_dot(d),
    }
}

pub fn parse(text: &str, format: Format) -> Result<DenseDigraph, ParseError> {
    match format {
        Format::Adm => parse_adm(text),
        Format::Json => parse_json(text),
        Format::Dot => Err(ParseError::new(1, 0, "dot is an export-only format")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_digraph(max_n: usize) -> impl Strategy<Value = DenseDigraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<u64>(), n).prop_map(move |raw| {
                let mask = crate::digraph::full_mask(n);
                let rows: Vec<u64> = raw.iter().enumerate().map(|(i, r)| r & mask & !(1u64 << i)).collect();
                DenseDigraph::from_rows(n, &rows).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn adm_round_trip(d in arb_digraph(10)) {
            prop_assert_eq!(parse_adm(&to_adm(&d)).unwrap(), d);
        }

        #[test]
        fn json_round_trip(d in arb_digraph(10)) {
            prop_assert_eq!(parse_json(&to_json(&d)).unwrap(), d);
        }
    }

    #[test]
    fn adm_layout() {
        let c3 = DenseDigraph::directed_cycle(3).unwrap();
        assert_eq!(to_adm(&c3), "3\n010\n001\n100\n");
        assert_eq!(to_json(&c3), r#"{"n":3,"arcs":[[0,1],[1,2],[2,0]]}"#);
    }

    #[test]
    fn adm_json_adm_is_byte_identical() {
        let text = "4\n0110\n0010\n1001\n0100\n";
        let d = parse_adm(text).unwrap();
        let back = parse_json(&to_json(&d)).unwrap();
        assert_eq!(to_adm(&back), text);
    }

    #[test]
    fn adm_errors_name_the_line() {
        let e = parse_adm("3\n010\n0010\n100\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 4));
        let e = parse_adm("3\n010\n00\n100\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_adm("3\n010\n001\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_adm("3\n010\n011\n100\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 2));
        let e = parse_adm("3\n010\n0x1\n100\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 2));
        let e = parse_adm("3\n010\n001\n100").unwrap_err();
        assert!(e.message.contains("newline"));
        let e = parse_adm("3 \n010\n001\n100\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 2));
        assert!(parse_adm("0\n").is_err());
        assert!(parse_adm("2\n01\n10\n\n").is_err());
    }

    #[test]
    fn json_duplicates_normalized() {
        let d = parse_json(r#"{"n":2,"arcs":[[0,1],[1,0],[0,1]]}"#).unwrap();
        assert_eq!(to_json(&d), r#"{"n":2,"arcs":[[0,1],[1,0]]}"#);
        assert!(parse_json(r#"{"n":2,"arcs":[[0,2]]}"#).is_err());
        assert!(parse_json(r#"{"n":2,"arcs":[[1,1]]}"#).is_err());
        assert!(parse_json(r#"{"n":2}"#).is_err());
    }

    #[test]
    fn dot_names_vertices() {
        let d = DenseDigraph::from_arc_list(2, &[(0, 1)]).unwrap();
        assert_eq!(to_dot(&d), "digraph D {\n  v0;\n  v1;\n  v0 -> v1;\n}\n");
    }
}
