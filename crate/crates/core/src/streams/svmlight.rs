use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::primitives::Point;

/// A labelled sparse example: label in {0, 1} and 1-based feature indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    label: u8,
    features: BTreeMap<usize, f64>,
}

impl Example {
    pub fn new(label: u8, features: BTreeMap<usize, f64>) -> Result<Self> {
        if label > 1 {
            return Err(Error::InvalidArgument(format!("label must be 0 or 1, got {label}")));
        }
        if features.keys().any(|k| *k == 0) {
            return Err(Error::InvalidArgument("feature indices are 1-based".into()));
        }
        if features.values().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("feature values must be finite".into()));
        }
        Ok(Example { label, features })
    }

    pub fn label(&self) -> u8 {
        self.label
    }

    pub fn features(&self) -> &BTreeMap<usize, f64> {
        &self.features
    }

    /// Largest feature index present (0 when there are none).
    pub fn max_index(&self) -> usize {
        self.features.keys().next_back().copied().unwrap_or(0)
    }

    /// Dense feature vector in R^n; unmentioned indices are zero.
    pub fn dense(&self, n: usize) -> Result<Point> {
        let mut v = vec![0.0; n];
        for (i, x) in &self.features {
            if *i > n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: *i,
                });
            }
            v[i - 1] = *x;
        }
        Point::new(v)
    }

    /// Canonical text form: `label idx:val ...` with shortest round-trip
    /// float formatting.
    pub fn to_svmlight(&self) -> String {
        let mut s = self.label.to_string();
        for (i, v) in &self.features {
            s.push_str(&format!(" {i}:{v}"));
        }
        s
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (pos, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..pos]));
                start = None;
            }
            (false, None) => start = Some(pos),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
        .map(|(b, tok)| (text[..b].chars().count() + 1, tok))
        .collect()
}

/// Parses one line; blank and comment-only lines yield `None`.
pub fn parse_svmlight_line(line: &str, line_no: usize) -> Result<Option<Example>> {
    let content = line.split('#').next().unwrap_or("");
    let toks = tokens(content);
    let Some(&(label_col, label_tok)) = toks.first() else {
        return Ok(None);
    };
    let label = match label_tok.parse::<f64>() {
        Ok(v) if v == 1.0 => 1,
        Ok(v) if v == 0.0 || v == -1.0 => 0,
        _ => {
            return Err(parse_error(
                line_no,
                label_col,
                format!("label must be 0/1 or -1/+1, got '{label_tok}'"),
            ))
        }
    };
    let mut features = BTreeMap::new();
    let mut last = 0usize;
    for &(col, tok) in &toks[1..] {
        let Some((idx_s, val_s)) = tok.split_once(':') else {
            return Err(parse_error(line_no, col, format!("expected idx:val, got '{tok}'")));
        };
        let idx: usize = idx_s
            .parse()
            .map_err(|_| parse_error(line_no, col, format!("bad feature index '{idx_s}'")))?;
        if idx < 1 {
            return Err(parse_error(line_no, col, "feature indices start at 1"));
        }
        if idx <= last {
            return Err(parse_error(
                line_no,
                col,
                format!("feature index {idx} does not increase (previous {last})"),
            ));
        }
        let val_col = col + idx_s.chars().count() + 1;
        let val: f64 = val_s
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| parse_error(line_no, val_col, format!("bad feature value '{val_s}'")))?;
        features.insert(idx, val);
        last = idx;
    }
    Ok(Some(Example { label, features }))
}

/// Parses a single non-empty line.
pub fn parse_svmlight(line: &str) -> Result<Example> {
    parse_svmlight_line(line, 1)?.ok_or_else(|| parse_error(1, 1, "line holds no example"))
}

/// Parses newline-delimited svmlight text, skipping blank and comment lines.
pub fn read_svmlight(text: &str) -> Result<Vec<Example>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(e) = parse_svmlight_line(line, i + 1)? {
            out.push(e);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let e = parse_svmlight("1 1:0.5 3:2").unwrap();
        assert_eq!(e.label(), 1);
        assert_eq!(e.features().iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>(), vec![(1, 0.5), (3, 2.0)]);
        let e = parse_svmlight("-1 2:1 # note").unwrap();
        assert_eq!(e.label(), 0);
        assert_eq!(e.features().len(), 1);
        assert_eq!(parse_svmlight("+1").unwrap().label(), 1);
    }

    #[test]
    fn reports_line_and_column() {
        match parse_svmlight("1 3:1 2:1") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 7)),
            other => panic!("unexpected {other:?}"),
        }
        match read_svmlight("1 1:1\n\n0 0:1") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_svmlight("1 2:x"), Err(Error::Parse { column: 5, .. })));
        assert!(matches!(parse_svmlight("2 1:1"), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(parse_svmlight("1 1-1"), Err(Error::Parse { .. })));
        assert!(parse_svmlight("# only a comment").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let e = parse_svmlight("+1 2:0.10 5:-3e2").unwrap();
        assert_eq!(e.to_svmlight(), "1 2:0.1 5:-300");
        assert_eq!(parse_svmlight(&e.to_svmlight()).unwrap(), e);
    }

    #[test]
    fn densify() {
        let e = parse_svmlight("1 1:0.5 3:2").unwrap();
        assert_eq!(e.dense(3).unwrap().as_slice(), &[0.5, 0.0, 2.0]);
        assert!(e.dense(2).is_err());
    }
}
