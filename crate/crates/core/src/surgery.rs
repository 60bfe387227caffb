//! Surgery presentations: parsing, serialization and a small catalog.
//!
//! The plain text format is
//!
//! ```text
//! # optional comment lines
//! 3
//! -3 1 1
//! 1 3 1
//! 1 1 -1
//! ```
//!
//! A leading `# name: <text>` comment carries the presentation name so that
//! serialization round-trips. The JSON format is an object with an optional
//! `"name"` string and a required `"linking_matrix"` array of rows.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::IntMatrix;

const NAME_PREFIX: &str = "name:";

/// A closed oriented 3-manifold given by integer surgery on a framed link in
/// S³, encoded by its symmetric linking matrix. `m = 0` is S³ itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryPresentation {
    pub name: Option<String>,
    linking_matrix: IntMatrix,
}

/// Input encodings accepted by [`parse_presentation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
}

impl Format {
    /// `.json` files are JSON, everything else is plain.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Plain,
        }
    }

    /// Guesses the format from content: JSON documents start with `{`.
    pub fn sniff(text: &str) -> Format {
        if text.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Plain
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" | "lnk" | "text" => Ok(Format::Plain),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown input format `{other}`"))),
        }
    }
}

impl SurgeryPresentation {
    /// Wraps a linking matrix, checking that it is square and symmetric.
    pub fn new(name: Option<String>, linking_matrix: IntMatrix) -> Result<Self> {
        if !linking_matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "linking matrix must be square, got {}x{}",
                linking_matrix.rows(),
                linking_matrix.cols()
            )));
        }
        if let Some((row, col)) = linking_matrix.first_asymmetry() {
            return Err(Error::AsymmetricMatrix { row, col });
        }
        Ok(Self {
            name,
            linking_matrix,
        })
    }

    /// Convenience constructor from small integer rows.
    pub fn from_rows(name: Option<&str>, rows: &[&[i64]]) -> Result<Self> {
        let m = rows.len();
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(name.map(str::to_owned), IntMatrix::from_rows(m, rows)?)
    }

    pub fn linking_matrix(&self) -> &IntMatrix {
        &self.linking_matrix
    }

    /// Number of link components.
    pub fn m(&self) -> usize {
        self.linking_matrix.rows()
    }

    /// Plain-format text with a single trailing newline.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "# {NAME_PREFIX} {name}");
        }
        let _ = writeln!(out, "{}", self.m());
        out.push_str(&self.linking_matrix.to_string());
        out
    }

    /// JSON object with `name` (when present) and `linking_matrix`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .linking_matrix
            .iter_rows()
            .map(|r| Value::Array(r.iter().map(big_to_json).collect()))
            .collect();
        let mut obj = serde_json::Map::new();
        if let Some(name) = &self.name {
            obj.insert("name".into(), Value::String(name.clone()));
        }
        obj.insert("linking_matrix".into(), Value::Array(rows));
        Value::Object(obj)
    }

    /// Connected sum: block-diagonal linking matrix.
    pub fn block_sum(&self, other: &Self) -> Self {
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a} # {b}")),
            _ => None,
        };
        Self {
            name,
            linking_matrix: self.linking_matrix.block_sum(&other.linking_matrix),
        }
    }

    /// The same link with the opposite orientation of the ambient manifold.
    pub fn mirror(&self) -> Self {
        Self {
            name: self.name.as_ref().map(|n| format!("-({n})")),
            linking_matrix: self.linking_matrix.map(|x| -x),
        }
    }
}

/// Renders an arbitrary-precision integer as an exact JSON number.
pub fn big_to_json(x: &BigInt) -> Value {
    Value::Number(
        x.to_string()
            .parse()
            .expect("decimal integer is a valid JSON number"),
    )
}

/// Parses a presentation in the given format.
pub fn parse_presentation(text: &str, format: Format) -> Result<SurgeryPresentation> {
    match format {
        Format::Plain => parse_plain(text),
        Format::Json => parse_json(text),
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of one line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let skip = rest.len() - rest.trim_start().len();
        rest = &rest[skip..];
        offset += skip;
        if rest.is_empty() {
            return None;
        }
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let tok = &rest[..len];
        let col = line[..offset].chars().count() + 1;
        rest = &rest[len..];
        offset += len;
        Some((col, tok))
    })
}

fn parse_int(tok: &str, line: usize, column: usize) -> Result<BigInt> {
    let digits = tok.strip_prefix(['+', '-']).unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(line, column, format!("expected an integer, found `{tok}`")));
    }
    tok.parse::<BigInt>()
        .map_err(|e| parse_error(line, column, e.to_string()))
}

fn parse_plain(text: &str) -> Result<SurgeryPresentation> {
    let mut name = None;
    let mut content = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if content.is_empty() && name.is_none() {
                if let Some(n) = comment.trim_start().strip_prefix(NAME_PREFIX) {
                    name = Some(n.trim().to_owned());
                }
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        content.push((line_no, raw));
    }

    let mut lines = content.into_iter();
    let Some((dim_line, dim_text)) = lines.next() else {
        return Err(parse_error(1, 1, "missing dimension line"));
    };
    let mut dim_tokens = tokens(dim_text);
    let (col, tok) = dim_tokens.next().expect("non-blank line has a token");
    let m = parse_int(tok, dim_line, col)?;
    if m.is_negative() {
        return Err(parse_error(dim_line, col, "dimension must be nonnegative"));
    }
    let m: usize = m
        .try_into()
        .map_err(|_| parse_error(dim_line, col, "dimension too large"))?;
    if let Some((col, tok)) = dim_tokens.next() {
        return Err(parse_error(
            dim_line,
            col,
            format!("unexpected `{tok}` after the dimension"),
        ));
    }

    let mut rows = Vec::with_capacity(m);
    for (line_no, raw) in lines {
        if rows.len() == m {
            return Err(Error::DimensionMismatch(format!(
                "line {line_no}: more than the declared {m} matrix rows"
            )));
        }
        let row = tokens(raw)
            .map(|(col, tok)| parse_int(tok, line_no, col))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "line {line_no}: expected {m} entries, found {}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "declared {m} rows, found {}",
            rows.len()
        )));
    }
    SurgeryPresentation::new(name, IntMatrix::from_rows(m, rows)?)
}

fn parse_json(text: &str) -> Result<SurgeryPresentation> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    let schema = |msg: &str| parse_error(1, 1, msg.to_owned());
    let obj = value
        .as_object()
        .ok_or_else(|| schema("top-level value must be an object"))?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(schema("`name` must be a string")),
    };
    let rows = obj
        .get("linking_matrix")
        .ok_or_else(|| schema("missing `linking_matrix`"))?
        .as_array()
        .ok_or_else(|| schema("`linking_matrix` must be an array of rows"))?;
    let m = rows.len();
    let mut parsed = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| schema(&format!("row {i} is not an array")))?;
        if row.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {m}",
                row.len()
            )));
        }
        let entries = row
            .iter()
            .map(|v| match v {
                Value::Number(n) => n
                    .as_str()
                    .parse::<BigInt>()
                    .map_err(|_| schema(&format!("row {i}: `{n}` is not an integer"))),
                other => Err(schema(&format!("row {i}: `{other}` is not an integer"))),
            })
            .collect::<Result<Vec<_>>>()?;
        parsed.push(entries);
    }
    SurgeryPresentation::new(name, IntMatrix::from_rows(m, parsed)?)
}

/// Presentations the catalog can generate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogKind {
    /// S³ as the `+1`-framed unknot.
    Sphere,
    /// `L(p, 1)`: the `p`-framed unknot.
    Lens(BigInt),
    /// Three-component example with `H₁ = ℤ₂ ⊕ ℤ₆`.
    M26,
    /// Connected sum of the given presentations.
    BlockSum(Vec<SurgeryPresentation>),
}

/// Builds a catalog presentation.
pub fn catalog(kind: CatalogKind) -> Result<SurgeryPresentation> {
    match kind {
        CatalogKind::Sphere => SurgeryPresentation::from_rows(Some("S3"), &[&[1]]),
        CatalogKind::Lens(p) => {
            if p < BigInt::one() {
                return Err(Error::InvalidParameter(format!(
                    "lens space L(p,1) needs p >= 1, got {p}"
                )));
            }
            let name = format!("L({p},1)");
            SurgeryPresentation::new(Some(name), IntMatrix::new(1, 1, vec![p])?)
        }
        CatalogKind::M26 => SurgeryPresentation::from_rows(
            Some("M_{2,6}"),
            &[&[-3, 1, 1], &[1, 3, 1], &[1, 1, -1]],
        ),
        CatalogKind::BlockSum(parts) => {
            let empty = SurgeryPresentation {
                name: None,
                linking_matrix: IntMatrix::zeros(0, 0),
            };
            let mut iter = parts.into_iter();
            let first = iter.next().unwrap_or(empty);
            Ok(iter.fold(first, |acc, p| acc.block_sum(&p)))
        }
    }
}

/// The empty presentation (`m = 0`) of S³.
pub fn empty_presentation() -> SurgeryPresentation {
    SurgeryPresentation {
        name: Some("S3".into()),
        linking_matrix: IntMatrix::zeros(0, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(p: &SurgeryPresentation) -> Vec<Vec<i64>> {
        p.linking_matrix()
            .iter_rows()
            .map(|r| r.iter().map(|x| x.try_into().unwrap()).collect())
            .collect()
    }

    #[test]
    fn parses_two_six_fixture() {
        let p = parse_presentation("3\n-3 1 1\n1 3 1\n1 1 -1\n", Format::Plain).unwrap();
        assert_eq!(small(&p), vec![vec![-3, 1, 1], vec![1, 3, 1], vec![1, 1, -1]]);
        let mut from_catalog = catalog(CatalogKind::M26).unwrap();
        from_catalog.name = None;
        assert_eq!(p, from_catalog);
    }

    #[test]
    fn parses_small_cases() {
        let p = parse_presentation("1\n1\n", Format::Plain).unwrap();
        assert_eq!(small(&p), vec![vec![1]]);
        let p = parse_presentation("2\n0 1\n1 1\n", Format::Plain).unwrap();
        assert_eq!(small(&p), vec![vec![0, 1], vec![1, 1]]);
        let p = parse_presentation("# empty link\n0\n", Format::Plain).unwrap();
        assert_eq!(p.m(), 0);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# name: lens two\n# another comment\n\n1\n  # inline comment line\n2\n";
        let p = parse_presentation(text, Format::Plain).unwrap();
        assert_eq!(p.name.as_deref(), Some("lens two"));
        assert_eq!(small(&p), vec![vec![2]]);
    }

    #[test]
    fn plain_errors() {
        let err = parse_presentation("2\n1 x\n0 1\n", Format::Plain).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 3,
                message: "expected an integer, found `x`".into()
            }
        );
        assert!(matches!(
            parse_presentation("2\n1 2\n3 1\n", Format::Plain),
            Err(Error::AsymmetricMatrix { row: 0, col: 1 })
        ));
        assert!(matches!(
            parse_presentation("2\n1 0\n", Format::Plain),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_presentation("2\n1 0 0\n0 1\n", Format::Plain),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_presentation("1\n1\n1\n", Format::Plain),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_presentation("-1\n", Format::Plain),
            Err(Error::Parse { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_presentation("# only comments\n", Format::Plain),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn json_input() {
        let p = parse_presentation(
            r#"{"name": "M26", "linking_matrix": [[-3,1,1],[1,3,1],[1,1,-1]]}"#,
            Format::Json,
        )
        .unwrap();
        assert_eq!(p.name.as_deref(), Some("M26"));
        assert_eq!(p.m(), 3);
        let big = parse_presentation(
            r#"{"linking_matrix": [[123456789012345678901234567890]]}"#,
            Format::Json,
        )
        .unwrap();
        assert_eq!(
            big.linking_matrix()[(0, 0)],
            "123456789012345678901234567890".parse::<BigInt>().unwrap()
        );
        assert!(matches!(
            parse_presentation(r#"{"linking_matrix": [[1.5]]}"#, Format::Json),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_presentation(r#"{"linking_matrix": [[1, 2], [3, 1]]}"#, Format::Json),
            Err(Error::AsymmetricMatrix { .. })
        ));
        assert!(matches!(
            parse_presentation("{\n  \"linking_matrix\": [[1,]\n}", Format::Json),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_presentation(r#"{"name": "x"}"#, Format::Json),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn serialization_shape() {
        let p = catalog(CatalogKind::M26).unwrap();
        assert_eq!(p.to_plain(), "# name: M_{2,6}\n3\n-3 1 1\n1 3 1\n1 1 -1\n");
        assert_eq!(
            p.to_json().to_string(),
            r#"{"name":"M_{2,6}","linking_matrix":[[-3,1,1],[1,3,1],[1,1,-1]]}"#
        );
    }

    #[test]
    fn catalog_entries() {
        assert_eq!(small(&catalog(CatalogKind::Sphere).unwrap()), vec![vec![1]]);
        assert_eq!(small(&catalog(CatalogKind::Lens(2.into())).unwrap()), vec![vec![2]]);
        assert!(matches!(
            catalog(CatalogKind::Lens(0.into())),
            Err(Error::InvalidParameter(_))
        ));
        let sum = catalog(CatalogKind::BlockSum(vec![
            catalog(CatalogKind::Lens(2.into())).unwrap(),
            catalog(CatalogKind::Lens(3.into())).unwrap(),
        ]))
        .unwrap();
        assert_eq!(small(&sum), vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(sum.name.as_deref(), Some("L(2,1) # L(3,1)"));
        assert_eq!(catalog(CatalogKind::BlockSum(vec![])).unwrap().m(), 0);
    }
}
