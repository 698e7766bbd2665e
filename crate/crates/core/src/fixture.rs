//! Family lists on disk and set differences between them.
//!
//! Fixture rows look like `1,1,1,3;6`: weights, a semicolon, degrees.
//! `#` starts a comment.

use std::collections::BTreeSet;
use std::fmt;

use serde::Deserialize;

use crate::record::FamilyRecord;

/// Normalized `(weights, degrees)` ordered by codimension, degrees, weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyKey {
    pub weights: Vec<u64>,
    pub degrees: Vec<u64>,
}

impl FamilyKey {
    pub fn new(mut weights: Vec<u64>, mut degrees: Vec<u64>) -> Self {
        weights.sort_unstable();
        degrees.sort_unstable();
        FamilyKey { weights, degrees }
    }

    fn order(&self) -> (usize, &[u64], &[u64]) {
        (self.degrees.len(), &self.degrees, &self.weights)
    }
}

impl Ord for FamilyKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order().cmp(&other.order())
    }
}

impl PartialOrd for FamilyKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.weights), join(&self.degrees))
    }
}

impl From<&FamilyRecord> for FamilyKey {
    fn from(r: &FamilyRecord) -> Self {
        FamilyKey::new(r.weights.clone(), r.degrees.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedList {
    pub families: BTreeSet<FamilyKey>,
    pub errors: Vec<LineError>,
    /// Lines repeating an earlier family.
    pub duplicates: Vec<LineError>,
}

fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<u64>() {
                Ok(0) => Err("zero entry".to_string()),
                Ok(v) => Ok(v),
                Err(_) => Err(format!("bad integer {t:?}")),
            }
        })
        .collect()
}

fn parse_row(row: &str) -> Result<FamilyKey, String> {
    let (w, d) = row.split_once(';').ok_or("missing ';'")?;
    let weights = parse_list(w)?;
    let degrees = parse_list(d)?;
    if weights.len() < 2 {
        return Err("need at least two weights".into());
    }
    if degrees.len() >= weights.len() {
        return Err("more equations than variables allow".into());
    }
    Ok(FamilyKey::new(weights, degrees))
}

#[derive(Deserialize)]
struct JsonKey {
    weights: Vec<u64>,
    degrees: Vec<u64>,
}

fn parse_lines(text: &str, mut row: impl FnMut(&str) -> Result<FamilyKey, String>) -> ParsedList {
    let mut out = ParsedList::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match row(line) {
            Ok(key) => {
                let shown = key.to_string();
                if !out.families.insert(key) {
                    out.duplicates.push(LineError { line: i + 1, message: format!("duplicate {shown}") });
                }
            }
            Err(message) => out.errors.push(LineError { line: i + 1, message }),
        }
    }
    out
}

pub fn parse_fixture(text: &str) -> ParsedList {
    parse_lines(text, parse_row)
}

pub fn parse_jsonl(text: &str) -> ParsedList {
    parse_lines(text, |line| {
        serde_json::from_str::<JsonKey>(line)
            .map(|k| FamilyKey::new(k.weights, k.degrees))
            .map_err(|e| e.to_string())
    })
}

/// JSONL when the first meaningful line opens an object, fixture rows otherwise.
pub fn parse_auto(text: &str) -> ParsedList {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    match first {
        Some(l) if l.starts_with('{') => parse_jsonl(text),
        _ => parse_fixture(text),
    }
}

pub fn to_fixture<'a>(keys: impl IntoIterator<Item = &'a FamilyKey>) -> String {
    keys.into_iter().map(|k| format!("{k}\n")).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub ours_only: Vec<FamilyKey>,
    pub fixture_only: Vec<FamilyKey>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.ours_only.is_empty() && self.fixture_only.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.ours_only {
            writeln!(f, "ours-only {k}")?;
        }
        for k in &self.fixture_only {
            writeln!(f, "fixture-only {k}")?;
        }
        Ok(())
    }
}

pub fn diff(ours: &BTreeSet<FamilyKey>, fixture: &BTreeSet<FamilyKey>) -> DiffReport {
    DiffReport {
        ours_only: ours.difference(fixture).cloned().collect(),
        fixture_only: fixture.difference(ours).cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(rows: &[&str]) -> BTreeSet<FamilyKey> {
        rows.iter().map(|r| parse_row(r).unwrap()).collect()
    }

    #[test]
    fn parses_with_comments_and_errors() {
        let text = "# header\n1,1,1,3;6\n\n3,1,1,1;6 # unsorted\n1,1;x\n1,2,3\n1,1,2,2;6\n";
        let p = parse_fixture(text);
        assert_eq!(p.families.len(), 2);
        assert_eq!(p.errors.iter().map(|e| e.line).collect::<Vec<_>>(), vec![5, 6]);
        assert_eq!(p.duplicates.len(), 1);
        assert_eq!(p.duplicates[0].line, 4);
    }

    #[test]
    fn diff_examples() {
        let a = keys(&["1,1,1,1;4", "1,1,1,2;5"]);
        assert!(diff(&a, &a).is_empty());
        let b = keys(&["1,1,1,1;4"]);
        let d = diff(&a, &b);
        assert_eq!(d.ours_only.len(), 1);
        assert_eq!(d.ours_only[0].to_string(), "1,1,1,2;5");
        assert!(d.fixture_only.is_empty());
        assert_eq!(d.to_string(), "ours-only 1,1,1,2;5\n");
    }

    #[test]
    fn canonical_order() {
        let a = keys(&["1,1,2,2;6", "1,1,1,1,1;2,3", "1,1,1,3;6", "1,1,1,1;4"]);
        let shown: Vec<String> = a.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["1,1,1,1;4", "1,1,1,3;6", "1,1,2,2;6", "1,1,1,1,1;2,3"]);
    }

    #[test]
    fn detects_jsonl() {
        let text = "{\"weights\":[1,1,1,3],\"degrees\":[6],\"dim\":2}\n";
        let p = parse_auto(text);
        assert_eq!(p.families, keys(&["1,1,1,3;6"]));
        assert_eq!(parse_auto("# c\n1,1,1,3;6\n").families, keys(&["1,1,1,3;6"]));
    }
}
