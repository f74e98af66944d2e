//! Numerator fitting for a prescribed denominator.
//!
//! The basis is seeded with the reciprocal denominator samples, so each basis
//! column is a rational function `p_k(s)/d(s)` with real polynomial `p_k`.
//! Because the columns are orthogonal with norm `√m`, least-squares
//! coefficients are plain projections `Qᵀ·rhs/m`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{build_basis_with, BasisOptions, StackedBasis};
use crate::error::{OraError, Result};
use crate::grid::StackedVector;
use crate::response::ResponseSet;

/// Reciprocal denominator samples `1/d(s_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenominatorSamples {
    pub values: StackedVector,
    /// Poles that generated `values`, when known.
    pub source_poles: Option<Vec<Complex64>>,
}

impl DenominatorSamples {
    pub fn new(values: StackedVector) -> Result<Self> {
        let bad = values
            .re
            .iter()
            .zip(&values.im)
            .position(|(r, i)| !(r.is_finite() && i.is_finite()) || (*r == 0.0 && *i == 0.0));
        if let Some(k) = bad {
            return Err(OraError::invalid(format!("denominator sample {k} is zero or non-finite")));
        }
        Ok(Self { values, source_poles: None })
    }

    /// Constant denominator.
    pub fn unit(m: usize) -> Self {
        Self { values: StackedVector::ones(m), source_poles: Some(Vec::new()) }
    }

    pub fn from_complex(values: &[Complex64]) -> Result<Self> {
        Self::new(StackedVector::from_complex(values))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// Coefficients by orthogonal projection.
    #[default]
    Projection,
    /// Householder least squares, with a column-pivoted condition estimate.
    Qr,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitOptions {
    pub solve: SolveMode,
    pub basis: BasisOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitWarning {
    /// The least-squares matrix is numerically rank deficient.
    IllConditioned { condition_estimate: f64 },
}

/// Condition estimate above which [`FitWarning::IllConditioned`] is raised.
pub const ILL_CONDITIONED: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct NumeratorFit {
    pub basis: StackedBasis,
    /// `(n+1) × N` numerator coefficients, rows beyond the numerator degree are zero.
    pub g: DMatrix<f64>,
    /// Coefficients of the constant function 1, i.e. of the denominator itself.
    pub c: DVector<f64>,
    /// `m × N` fitted values on the grid.
    pub fitted: DMatrix<Complex64>,
    pub residual_norm: f64,
    pub num_degree: usize,
    pub condition_estimate: Option<f64>,
    pub warnings: Vec<FitWarning>,
}

pub fn fit_numerator(den: &DenominatorSamples, data: &ResponseSet, n: usize) -> Result<NumeratorFit> {
    fit_numerator_with(den, data, n, n, &FitOptions::default())
}

/// Fit all responses with numerator degree `n` over a basis of degree
/// `basis_degree ≥ n`. The denominator coefficients `c` always use the full basis.
pub fn fit_numerator_with(
    den: &DenominatorSamples,
    data: &ResponseSet,
    n: usize,
    basis_degree: usize,
    opts: &FitOptions,
) -> Result<NumeratorFit> {
    if n > basis_degree {
        return Err(OraError::invalid(format!("numerator degree {n} exceeds basis degree {basis_degree}")));
    }
    let m = data.m();
    if den.len() != m {
        return Err(OraError::invalid(format!("{} denominator samples for {m} data rows", den.len())));
    }
    let basis = build_basis_with(&den.values, &data.grid, basis_degree, &opts.basis)?;
    let nr = data.n_responses();

    let mut rhs = DMatrix::<f64>::zeros(2 * m, nr);
    for k in 0..nr {
        for i in 0..m {
            let z = data.values[(i, k)];
            rhs[(i, k)] = z.re;
            rhs[(i + m, k)] = z.im;
        }
    }
    let mut unit = DVector::<f64>::zeros(2 * m);
    unit.rows_mut(0, m).fill(1.0);

    let qn = basis.q.columns(0, n + 1);
    let mut warnings = Vec::new();
    let mut condition_estimate = None;
    let (gn, c) = match opts.solve {
        SolveMode::Projection => {
            let inv_m = 1.0 / m as f64;
            (qn.transpose() * &rhs * inv_m, basis.q.transpose() * &unit * inv_m)
        }
        SolveMode::Qr => {
            let gn = least_squares(qn.into_owned(), &rhs)?;
            let c = least_squares(basis.q.clone(), &DMatrix::from_column_slice(2 * m, 1, unit.as_slice()))?;
            let cond = pivoted_condition(&basis.q);
            if cond > ILL_CONDITIONED {
                warnings.push(FitWarning::IllConditioned { condition_estimate: cond });
            }
            condition_estimate = Some(cond);
            (gn, c.column(0).into_owned())
        }
    };

    let mut g = DMatrix::<f64>::zeros(basis_degree + 1, nr);
    g.rows_mut(0, n + 1).copy_from(&gn);

    let stacked_fit = &basis.q * &g;
    let fitted = DMatrix::from_fn(m, nr, |i, k| Complex64::new(stacked_fit[(i, k)], stacked_fit[(i + m, k)]));
    let residual_norm = (&fitted - &data.values).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    Ok(NumeratorFit { basis, g, c, fitted, residual_norm, num_degree: n, condition_estimate, warnings })
}

/// Householder least squares for a full-column-rank tall matrix.
pub(crate) fn least_squares(a: DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let cols = a.ncols();
    if a.nrows() < cols {
        return Err(OraError::invalid("least squares needs at least as many rows as unknowns"));
    }
    let qr = a.qr();
    let qtb = qr.q().transpose() * b;
    let r = qr.r();
    r.solve_upper_triangular(&qtb)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or_else(|| OraError::numerical(None, "singular triangular factor in least squares"))
}

/// `max|r_ii| / min|r_ii|` from a column-pivoted QR.
fn pivoted_condition(a: &DMatrix<f64>) -> f64 {
    let r = a.clone().col_piv_qr().unpack_r();
    let diag: Vec<f64> = r.diagonal().iter().map(|x| x.abs()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
