use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    /// Rendered as an empty field.
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig6(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

/// An ordered table plus `#` metadata lines.
#[derive(Debug, Clone, PartialEq)]
pub struct TableArtifact {
    pub table_id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, String)>,
}

impl TableArtifact {
    pub fn new(table_id: &str, columns: &[&str]) -> Self {
        Self {
            table_id: table_id.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: vec![
                ("table_id".into(), table_id.to_string()),
                (
                    "engine_version".into(),
                    env!("CARGO_PKG_VERSION").to_string(),
                ),
            ],
        }
    }

    /// Sets or replaces a metadata entry.
    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width for {}",
            self.table_id
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Finds the first row whose `key_col` is the text `key` and returns `col`.
    pub fn lookup(&self, key_col: &str, key: &str, col: &str) -> Option<&Cell> {
        let (k, c) = (self.column(key_col)?, self.column(col)?);
        self.rows
            .iter()
            .find(|r| matches!(&r[k], Cell::Text(s) if s == key))
            .map(|r| &r[c])
    }
}

/// Formats like C's `%.6g`: six significant digits with trailing zeros
/// removed, exponent form below 1e-4 or from 1e6.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders the artifact: metadata comments, header, then rows.
pub fn render_csv(artifact: &TableArtifact) -> String {
    let mut out = String::new();
    for (k, v) in &artifact.metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&artifact.columns).expect("in-memory write");
    for row in &artifact.rows {
        w.write_record(row.iter().map(Cell::render))
            .expect("in-memory write");
    }
    let body = w.into_inner().expect("in-memory flush");
    out.push_str(std::str::from_utf8(&body).expect("utf-8 fields"));
    out
}

/// Writes `<dir>/<table_id>.csv` and returns the path.
pub fn emit_csv(artifact: &TableArtifact, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(format!("{}.csv", artifact.table_id));
    fs::write(&path, render_csv(artifact)).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Reads a two-column `t,value` CSV with a header row; `#` lines are skipped.
pub fn read_series(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_series(&text)
}

pub(crate) fn parse_series(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?
        .clone();
    if header.len() != 2 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header `t,value`, got {} columns", header.len()),
        });
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let t = super::config::parse_f64(&rec[0], line)?;
        let v = super::config::parse_f64(&rec[1], line)?;
        out.push((t, v));
    }
    Ok(out)
}

pub fn write_series(path: &Path, series: &[(f64, f64)]) -> Result<()> {
    let mut a = TableArtifact::new("series", &["t", "value"]);
    a.metadata.clear();
    for &(t, v) in series {
        a.push(vec![Cell::Num(t), Cell::Num(v)]);
    }
    fs::write(path, render_csv(&a)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_matches_printf_g() {
        let cases = [
            (0.5333, "0.5333"),
            (43.71002, "43.71"),
            (1234567.0, "1.23457e+06"),
            (999999.5, "1e+06"),
            (0.00012345678, "0.000123457"),
            (0.000012345, "1.2345e-05"),
            (-6.01234567, "-6.01235"),
            (100.0, "100"),
            (-0.0, "0"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_sig6(x), want, "{x}");
        }
    }

    #[test]
    fn empty_table_has_header_and_metadata() {
        let mut a = TableArtifact::new("empty", &["a", "b"]);
        a.meta("seed", 42);
        assert_eq!(
            render_csv(&a),
            "# table_id: empty\n# engine_version: 0.1.0\n# seed: 42\na,b\n"
        );
    }

    #[test]
    fn quoting_and_series_round_trip() {
        let mut a = TableArtifact::new("q", &["name", "x"]);
        a.push(vec!["a, b".into(), Cell::Missing]);
        assert!(render_csv(&a).ends_with("name,x\n\"a, b\",\n"));

        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let s = vec![(0.0, 0.88), (1.0, 0.8725), (2.0, 0.866)];
        write_series(&p, &s).unwrap();
        assert_eq!(read_series(&p).unwrap(), s);
        assert!(matches!(
            parse_series("t,value\n1,x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
