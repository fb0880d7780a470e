//! CSV files for grid functions and empirical tails.
//!
//! Grid functions are stored as `x,value` rows in ascending `x`; tails add a
//! leading `n` column. Values are written with 17 significant digits, which
//! reproduces every `f64` exactly on reading.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::funcspace::GridFunction;

/// Formats a float with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), line, message: message.into() }
}

pub fn write_grid_function(path: &Path, f: &GridFunction) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut body = String::with_capacity(f.len() * 48 + 8);
    body.push_str("x,value\n");
    for (x, y) in f.xs().iter().zip(f.ys()) {
        body.push_str(&format_f64(*x));
        body.push(',');
        body.push_str(&format_f64(*y));
        body.push('\n');
    }
    out.write_all(body.as_bytes()).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

pub fn read_grid_function(path: &Path) -> Result<GridFunction> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_grid_function(file, path)
}

/// Parses `x,value` CSV from any reader; `path` is used in error messages.
pub fn parse_grid_function(reader: impl std::io::Read, path: &Path) -> Result<GridFunction> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(path, 1, e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "value" {
        return Err(parse_err(path, 1, "expected header `x,value`"));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(path, line, format!("cannot parse `{raw}` as a number")))
        };
        xs.push(field(0)?);
        ys.push(field(1)?);
        if let Some(w) = xs.len().checked_sub(2).map(|i| (xs[i], xs[i + 1])) {
            if !(w.1 > w.0) {
                return Err(parse_err(path, line, "x values must be strictly increasing"));
            }
        }
    }
    GridFunction::new(xs, ys).map_err(|e| parse_err(path, 0, e.to_string()))
}

/// One tail curve for CSV output: `(n, thresholds, survival)`.
pub struct TailRows<'a> {
    pub n: usize,
    pub thresholds: &'a [f64],
    pub survival: &'a [f64],
}

pub fn write_tails(path: &Path, tails: &[TailRows<'_>]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut body = String::from("n,x,value\n");
    for t in tails {
        for (x, s) in t.thresholds.iter().zip(t.survival) {
            body.push_str(&format!("{},{},{}\n", t.n, format_f64(*x), format_f64(*s)));
        }
    }
    out.write_all(body.as_bytes()).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = "x,value\n0,1\n0.5,abc\n1,0\n";
        let err = parse_grid_function(text.as_bytes(), Path::new("in.csv")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_header_is_rejected() {
        let err = parse_grid_function("a,b\n0,1\n".as_bytes(), Path::new("in.csv")).unwrap_err();
        assert!(err.to_string().contains("header"));
    }

    #[test]
    fn descending_rows_are_rejected() {
        let text = "x,value\n0,1\n0.6,0.4\n0.5,0.5\n1,0\n";
        let err = parse_grid_function(text.as_bytes(), Path::new("in.csv")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.83297657, 1e-300, 5e-324, 0.9999999999999999] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
