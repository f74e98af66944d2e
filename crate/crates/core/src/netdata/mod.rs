//! Network data input/output: Touchstone v1 `.sNp` files and CSV tables of
//! frequency responses, plus selection of the responses to fit.

mod csvio;
mod touchstone;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use csvio::{parse_csv, write_csv, write_fit_csv};
pub use touchstone::{parse_touchstone, ports_from_extension, read_touchstone, write_touchstone, DataFormat, FreqUnit};

use crate::grid::FrequencyGrid;
use crate::response::ResponseSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetDataError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown option token {token:?}")]
    UnknownOption { line: usize, token: String },
    #[error("line {line}: unsupported {what}")]
    Unsupported { line: usize, what: String },
    #[error("line {line}: frequency {freq} does not increase")]
    NonMonotone { line: usize, freq: f64 },
    #[error("line {line}: expected {expected} values for the frequency block, found {found}")]
    ValueCount { line: usize, expected: usize, found: usize },
    #[error("row {row}, column {column}: {msg}")]
    Csv { row: usize, column: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, NetDataError>;

/// Metadata recorded while parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceFormat {
    pub unit: FreqUnit,
    pub format: DataFormat,
    pub warnings: Vec<String>,
}

impl Default for SourceFormat {
    fn default() -> Self {
        Self { unit: FreqUnit::GHz, format: DataFormat::MA, warnings: Vec::new() }
    }
}

/// Scattering parameters of an `n_ports` network over a frequency list.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkData {
    pub freqs_hz: Vec<f64>,
    pub n_ports: usize,
    pub s_matrices: Vec<DMatrix<Complex64>>,
    pub z0: f64,
    pub source_format: SourceFormat,
}

impl NetworkData {
    pub fn new(freqs_hz: Vec<f64>, s_matrices: Vec<DMatrix<Complex64>>, z0: f64) -> Result<Self> {
        if freqs_hz.is_empty() {
            return Err(NetDataError::Invalid("network data needs at least one frequency".into()));
        }
        if freqs_hz.len() != s_matrices.len() {
            return Err(NetDataError::Invalid(format!(
                "{} frequencies but {} matrices",
                freqs_hz.len(),
                s_matrices.len()
            )));
        }
        let n = s_matrices[0].nrows();
        if n == 0 || s_matrices.iter().any(|s| s.nrows() != n || s.ncols() != n) {
            return Err(NetDataError::Invalid("all S matrices must be square with the same port count".into()));
        }
        if freqs_hz.iter().any(|f| !(f.is_finite() && *f >= 0.0)) || freqs_hz.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NetDataError::Invalid("frequencies must be nonnegative and strictly increasing".into()));
        }
        if s_matrices.iter().flat_map(|s| s.iter()).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(NetDataError::Invalid("S-parameters must be finite".into()));
        }
        Ok(Self { freqs_hz, n_ports: n, s_matrices, z0, source_format: SourceFormat::default() })
    }
}

/// Which matrix entries to fit. Port indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    All,
    UpperTriangular,
    Row(usize),
    List(Vec<(usize, usize)>),
}

impl Selection {
    fn entries(&self, n: usize) -> Result<Vec<(usize, usize)>> {
        let check = |i: usize| {
            if i == 0 || i > n {
                Err(NetDataError::Invalid(format!("port index {i} out of range 1..={n}")))
            } else {
                Ok(i)
            }
        };
        Ok(match self {
            Selection::All => (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect(),
            Selection::UpperTriangular => (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect(),
            Selection::Row(i) => {
                let i = check(*i)?;
                (1..=n).map(|j| (i, j)).collect()
            }
            Selection::List(list) => {
                if list.is_empty() {
                    return Err(NetDataError::Invalid("empty response selection".into()));
                }
                let mut out = list.iter().map(|&(i, j)| Ok((check(i)?, check(j)?))).collect::<Result<Vec<_>>>()?;
                out.sort_unstable();
                out.dedup();
                out
            }
        })
    }
}

/// Label of the S-parameter between ports `i` and `j` (1-based), e.g. `S21`.
/// Indices above 9 are separated by an underscore (`S10_2`).
pub fn s_label(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("S{i}{j}")
    } else {
        format!("S{i}_{j}")
    }
}

/// Inverse of [`s_label`].
pub fn parse_s_label(label: &str) -> Option<(usize, usize)> {
    let rest = label.strip_prefix('S').or_else(|| label.strip_prefix('s'))?;
    if let Some((a, b)) = rest.split_once('_') {
        return Some((a.parse().ok()?, b.parse().ok()?));
    }
    let bytes = rest.as_bytes();
    if bytes.len() == 2 && bytes.iter().all(u8::is_ascii_digit) {
        Some(((bytes[0] - b'0') as usize, (bytes[1] - b'0') as usize))
    } else {
        None
    }
}

/// Extract the selected entries as a [`ResponseSet`], columns in row-major order.
pub fn select_responses(data: &NetworkData, selection: &Selection) -> Result<ResponseSet> {
    let entries = selection.entries(data.n_ports)?;
    let grid = FrequencyGrid::from_hz(&data.freqs_hz).map_err(|e| NetDataError::Invalid(e.to_string()))?;
    let values = DMatrix::from_fn(data.freqs_hz.len(), entries.len(), |f, k| {
        let (i, j) = entries[k];
        data.s_matrices[f][(i - 1, j - 1)]
    });
    let labels = entries.iter().map(|&(i, j)| s_label(i, j)).collect();
    ResponseSet::new(grid, values, labels).map_err(|e| NetDataError::Invalid(e.to_string()))
}

/// Rebuild network data from a response set that covers a full `n×n` matrix.
pub fn responses_to_network(resp: &ResponseSet, z0: f64) -> Result<NetworkData> {
    let idx: Vec<(usize, usize)> = resp
        .labels
        .iter()
        .map(|l| parse_s_label(l).ok_or_else(|| NetDataError::Invalid(format!("label {l:?} is not an S-parameter"))))
        .collect::<Result<_>>()?;
    let n = (resp.n_responses() as f64).sqrt().round() as usize;
    let mut seen = vec![false; n * n];
    for &(i, j) in &idx {
        if i == 0 || j == 0 || i > n || j > n || std::mem::replace(&mut seen[(i - 1) * n + j - 1], true) {
            return Err(NetDataError::Invalid("responses do not form a full S matrix".into()));
        }
    }
    if n * n != resp.n_responses() {
        return Err(NetDataError::Invalid("responses do not form a full S matrix".into()));
    }
    let mats = (0..resp.m())
        .map(|f| {
            let mut s = DMatrix::zeros(n, n);
            for (k, &(i, j)) in idx.iter().enumerate() {
                s[(i - 1, j - 1)] = resp.values[(f, k)];
            }
            s
        })
        .collect();
    NetworkData::new(resp.grid.freqs_hz(), mats, z0)
}
