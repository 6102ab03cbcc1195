//! Burmeister `.cxt` reading and writing.
//!
//! ```text
//! B
//! <blank or context name>
//! |G|
//! |M|
//! <blank>
//! object names, one per line
//! attribute names, one per line
//! one row per object over {'.', 'X'}
//! ```

use std::path::Path;

use crate::bitset::AttributeSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Cxt {
        line,
        message: message.into(),
    }
}

/// Parses Burmeister text. Accepts LF or CRLF line endings and lowercase `x`.
pub fn parse_cxt(text: &str) -> Result<FormalContext> {
    let lines: Vec<&str> = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    let get = |i: usize| -> Result<&str> { lines.get(i).copied().ok_or_else(|| err(i + 1, "unexpected end of file")) };

    if get(0)?.trim() != "B" {
        return Err(err(1, "header must be 'B'"));
    }
    // line 2 holds an optional context name
    let count = |i: usize, what: &str| -> Result<usize> {
        let raw = get(i)?.trim();
        raw.parse::<usize>()
            .map_err(|_| err(i + 1, format!("expected {what} count, found '{raw}'")))
    };
    let n_obj = count(2, "object")?;
    let n_att = count(3, "attribute")?;
    if !get(4)?.trim().is_empty() {
        return Err(err(5, "expected blank line after counts"));
    }

    let mut at = 5;
    let mut objects = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        objects.push(get(at)?.to_string());
        at += 1;
    }
    let mut attributes = Vec::with_capacity(n_att);
    for _ in 0..n_att {
        attributes.push(get(at)?.to_string());
        at += 1;
    }
    let mut rows = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        let line = get(at)?.trim_end();
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != n_att {
            return Err(err(at + 1, format!("row has {} entries, expected {n_att}", chars.len())));
        }
        let mut row = AttributeSet::empty(n_att);
        for (m, c) in chars.into_iter().enumerate() {
            match c {
                'X' | 'x' => row.insert(m),
                '.' => {}
                other => return Err(err(at + 1, format!("illegal character '{other}' in row"))),
            }
        }
        rows.push(row);
        at += 1;
    }
    if let Some(extra) = lines[at..].iter().position(|l| !l.trim().is_empty()) {
        return Err(err(at + extra + 1, "trailing content after last row"));
    }
    FormalContext::new(objects, attributes, rows).map_err(|e| err(1, e.to_string()))
}

/// Writes canonical Burmeister text (blank name line, LF endings, `X`/`.`).
pub fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    out.push_str("B\n\n");
    out.push_str(&format!("{}\n{}\n\n", ctx.num_objects(), ctx.num_attributes()));
    for o in ctx.objects() {
        out.push_str(o);
        out.push('\n');
    }
    for a in ctx.attributes() {
        out.push_str(a);
        out.push('\n');
    }
    for row in ctx.rows() {
        out.extend((0..ctx.num_attributes()).map(|m| if row.contains(m) { 'X' } else { '.' }));
        out.push('\n');
    }
    out
}

pub fn read_cxt_file(path: impl AsRef<Path>) -> Result<FormalContext> {
    parse_cxt(&std::fs::read_to_string(path)?)
}

pub fn write_cxt_file(path: impl AsRef<Path>, ctx: &FormalContext) -> Result<()> {
    std::fs::write(path, write_cxt(ctx))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn minimal_file() {
        let k = parse_cxt("B\n\n1\n1\n\ng\nm\nX\n").unwrap();
        assert_eq!(k.objects(), ["g"]);
        assert_eq!(k.attributes(), ["m"]);
        assert!(k.incident(0, 0));
    }

    #[test]
    fn living_beings_counts() {
        let k = parse_cxt(fixtures::LIVING_BEINGS_CXT).unwrap();
        assert_eq!((k.num_objects(), k.num_attributes()), (8, 9));
        assert_eq!(k.incidences(), 34);
    }

    #[test]
    fn canonical_fixtures_round_trip_bytewise() {
        for text in [
            fixtures::LIVING_BEINGS_CXT,
            fixtures::LIVING_BEINGS_SCALE_CXT,
            fixtures::EQ3_CXT,
            fixtures::NEQ3_CXT,
            fixtures::DOMESTIC_SCALE_CXT,
        ] {
            assert_eq!(write_cxt(&parse_cxt(text).unwrap()), text);
        }
    }

    #[test]
    fn named_context_and_crlf_are_accepted() {
        let k = parse_cxt("B\r\nmy context\r\n2\r\n1\r\n\r\na\r\nb\r\nm\r\nx\r\n.\r\n\r\n").unwrap();
        assert_eq!(k.num_objects(), 2);
        assert!(k.incident(0, 0) && !k.incident(1, 0));
    }

    #[test]
    fn rejections() {
        let cases = [
            ("A\n\n1\n1\n\ng\nm\nX\n", 1),
            ("B\n\none\n1\n\ng\nm\nX\n", 3),
            ("B\n\n1\n1\n\ng\nm\nXX\n", 8),
            ("B\n\n1\n1\n\ng\nm\nO\n", 8),
            ("B\n\n2\n1\n\ng\nh\nm\nX\n", 10),
            ("B\n\n1\n1\n\ng\nm\nX\nX\n", 9),
            ("B\n\n1\n1\nfoo\ng\nm\nX\n", 5),
        ];
        for (text, line) in cases {
            match parse_cxt(text) {
                Err(Error::Cxt { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        // duplicate object names surface as a context error
        assert!(parse_cxt("B\n\n2\n1\n\ng\ng\nm\nX\n.\n").is_err());
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(
            table in (1usize..7, 0usize..7).prop_flat_map(|(g, m)|
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), g))
        ) {
            let m = table[0].len();
            let ctx = FormalContext::from_table(
                (0..table.len()).map(|i| format!("obj {i}")),
                (0..m).map(|i| format!("attr {i}")),
                &table,
            ).unwrap();
            let text = write_cxt(&ctx);
            prop_assert_eq!(parse_cxt(&text).unwrap(), ctx);
        }
    }
}
