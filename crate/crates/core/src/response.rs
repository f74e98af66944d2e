use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{OraError, Result};
use crate::grid::FrequencyGrid;

/// `N` complex responses sampled on one frequency grid (`m × N`).
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSet {
    pub values: DMatrix<Complex64>,
    pub labels: Vec<String>,
    pub grid: FrequencyGrid,
}

impl ResponseSet {
    pub fn new(grid: FrequencyGrid, values: DMatrix<Complex64>, labels: Vec<String>) -> Result<Self> {
        if values.nrows() != grid.len() {
            return Err(OraError::invalid(format!("{} data rows for a {}-point grid", values.nrows(), grid.len())));
        }
        if values.ncols() != labels.len() {
            return Err(OraError::invalid(format!("{} response columns but {} labels", values.ncols(), labels.len())));
        }
        if values.ncols() == 0 {
            return Err(OraError::invalid("response set needs at least one response"));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(OraError::invalid("response data must be finite"));
        }
        Ok(Self { values, labels, grid })
    }

    /// Responses labelled `H1`, `H2`, ….
    pub fn unlabelled(grid: FrequencyGrid, values: DMatrix<Complex64>) -> Result<Self> {
        let labels = (1..=values.ncols()).map(|k| format!("H{k}")).collect();
        Self::new(grid, values, labels)
    }

    /// Build by sampling `f(s, k)` for each response `k` at `s = jω`.
    pub fn from_fn(grid: FrequencyGrid, n_responses: usize, f: impl Fn(Complex64, usize) -> Complex64) -> Result<Self> {
        let pts = grid.points();
        let values = DMatrix::from_fn(pts.len(), n_responses, |i, k| f(pts[i], k));
        Self::unlabelled(grid, values)
    }

    pub fn m(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_responses(&self) -> usize {
        self.values.ncols()
    }

    /// Frobenius norm of all data.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}
