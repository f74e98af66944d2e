//! CSV tables of frequency responses: `freq_hz, <label>_re, <label>_im, …`.
//! Lines starting with `#` are comments.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{NetDataError, Result};
use crate::grid::FrequencyGrid;
use crate::response::ResponseSet;

pub fn parse_csv(text: &str) -> Result<ResponseSet> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| NetDataError::Csv { row: 1, column: 1, msg: e.to_string() })?.clone();
    if header.len() < 3 || (header.len() - 1) % 2 != 0 {
        return Err(NetDataError::Csv {
            row: 1,
            column: header.len(),
            msg: "expected freq_hz followed by <label>_re, <label>_im pairs".into(),
        });
    }
    if !header[0].eq_ignore_ascii_case("freq_hz") {
        return Err(NetDataError::Csv {
            row: 1,
            column: 1,
            msg: format!("first column must be freq_hz, got {:?}", &header[0]),
        });
    }
    let mut labels = Vec::new();
    for k in 0..(header.len() - 1) / 2 {
        let (re, im) = (&header[1 + 2 * k], &header[2 + 2 * k]);
        let label =
            re.strip_suffix("_re").filter(|l| im.strip_suffix("_im") == Some(*l)).ok_or_else(|| NetDataError::Csv {
                row: 1,
                column: 2 + 2 * k,
                msg: format!("columns {re:?}, {im:?} are not a <label>_re, <label>_im pair"),
            })?;
        labels.push(label.to_string());
    }

    let mut freqs = Vec::new();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| NetDataError::Csv { row: r + 2, column: 1, msg: e.to_string() })?;
        // Report file line numbers so comment lines do not shift the count.
        let row = rec.position().map_or(r + 2, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(NetDataError::Csv {
                row,
                column: rec.len(),
                msg: format!("expected {} columns", header.len()),
            });
        }
        let num = |c: usize| {
            rec[c].parse::<f64>().map_err(|_| NetDataError::Csv {
                row,
                column: c + 1,
                msg: format!("invalid number {:?}", &rec[c]),
            })
        };
        freqs.push(num(0)?);
        rows.push(
            (0..labels.len()).map(|k| Ok(Complex64::new(num(1 + 2 * k)?, num(2 + 2 * k)?))).collect::<Result<_>>()?,
        );
    }
    if rows.is_empty() {
        return Err(NetDataError::Csv { row: 2, column: 1, msg: "no data rows".into() });
    }
    let grid = FrequencyGrid::from_hz(&freqs).map_err(|e| NetDataError::Invalid(e.to_string()))?;
    let values = DMatrix::from_fn(rows.len(), labels.len(), |i, k| rows[i][k]);
    ResponseSet::new(grid, values, labels).map_err(|e| NetDataError::Invalid(e.to_string()))
}

pub fn write_csv(resp: &ResponseSet) -> String {
    let mut out = String::from("freq_hz");
    for l in &resp.labels {
        let _ = write!(out, ",{l}_re,{l}_im");
    }
    out.push('\n');
    for (i, f) in resp.grid.freqs_hz().iter().enumerate() {
        let _ = write!(out, "{f:e}");
        for k in 0..resp.n_responses() {
            let z = resp.values[(i, k)];
            let _ = write!(out, ",{:e},{:e}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

/// Data alongside fitted values and the absolute error, per response.
pub fn write_fit_csv(data: &ResponseSet, fitted: &DMatrix<Complex64>) -> String {
    let mut out = String::from("freq_hz");
    for l in &data.labels {
        let _ = write!(out, ",{l}_data_re,{l}_data_im,{l}_fit_re,{l}_fit_im,{l}_abs_err");
    }
    out.push('\n');
    for (i, f) in data.grid.freqs_hz().iter().enumerate() {
        let _ = write!(out, "{f:e}");
        for k in 0..data.n_responses() {
            let (a, b) = (data.values[(i, k)], fitted[(i, k)]);
            let _ = write!(out, ",{:e},{:e},{:e},{:e},{:e}", a.re, a.im, b.re, b.im, (a - b).norm());
        }
        out.push('\n');
    }
    out
}
