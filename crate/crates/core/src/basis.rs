//! Real-coefficient orthogonal bases on the imaginary axis.
//!
//! A complex vector `v` on the grid is stored stacked as `[Re v; Im v]`;
//! multiplication by `diag(jω)` then becomes the real skew-symmetric operator
//!
//! ```text
//! X = [ 0  -Ω ]
//!     [ Ω   0 ]      Ω = diag(ω)
//! ```
//!
//! and the Krylov sequence `q, Xq, X²q, …` is orthogonalized by a three-term
//! Lanczos recurrence. Columns are scaled to norm `√m`. The recurrence
//! coefficients form an `(n+1)×n` Hessenberg matrix with zero diagonal, which
//! is all that is needed to evaluate the same functions off the grid and to
//! locate zeros of basis expansions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{OraError, Result};
use crate::grid::{FrequencyGrid, StackedVector};
use crate::linalg;

/// Default breakdown tolerance, relative to the largest grid frequency.
pub const DEFAULT_EPS_BREAKDOWN: f64 = 1e-13;
/// Default tolerance on the leading expansion coefficient, relative to `‖c‖`.
pub const DEFAULT_EPS_LEADING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisOptions {
    pub eps_breakdown: f64,
    /// Orthogonalize every new column against all previous ones in addition
    /// to the three-term recurrence. Diagnostic only.
    pub reorthogonalize: bool,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self { eps_breakdown: DEFAULT_EPS_BREAKDOWN, reorthogonalize: false }
    }
}

/// Orthogonal basis in stacked real form together with its recurrence matrix.
#[derive(Debug, Clone)]
pub struct StackedBasis {
    /// `2m × (n+1)`; column `k` is `[Re q_k; Im q_k]`.
    pub q: DMatrix<f64>,
    /// `(n+1) × n` Hessenberg recurrence matrix, `X·Q₋ = Q·hess`.
    pub hess: DMatrix<f64>,
    pub m: usize,
    pub n: usize,
}

impl StackedBasis {
    /// Complex form `Re + j·Im` of the basis columns (`m × (n+1)`).
    pub fn complex_columns(&self) -> DMatrix<Complex64> {
        let m = self.m;
        DMatrix::from_fn(m, self.n + 1, |i, j| Complex64::new(self.q[(i, j)], self.q[(i + m, j)]))
    }

    /// First `k+1` columns of the basis.
    pub fn leading_columns(&self, k: usize) -> DMatrix<f64> {
        self.q.columns(0, k + 1).into_owned()
    }

    /// Leading `(k+1) × k` block of the recurrence matrix.
    pub fn leading_hess(&self, k: usize) -> DMatrix<f64> {
        self.hess.view((0, 0), (k + 1, k)).into_owned()
    }

    /// `max |QᵀQ/m − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let gram = self.q.transpose() * &self.q / self.m as f64;
        let eye = DMatrix::<f64>::identity(self.n + 1, self.n + 1);
        (gram - eye).amax()
    }

    /// `max |X·Q₋ − Q·hess|` for the given grid.
    pub fn recurrence_residual(&self, grid: &FrequencyGrid) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let mut lhs = DMatrix::<f64>::zeros(2 * self.m, self.n);
        for k in 0..self.n {
            let col = apply_x(grid.omega(), self.q.column(k).as_slice());
            lhs.set_column(k, &DVector::from_vec(col));
        }
        (lhs - &self.q * &self.hess).amax()
    }
}

/// `X·[re; im] = [−ω∘im; ω∘re]`, i.e. multiplication by `jω` in stacked form.
pub(crate) fn apply_x(omega: &[f64], stacked: &[f64]) -> Vec<f64> {
    let m = omega.len();
    let (re, im) = stacked.split_at(m);
    let mut out = vec![0.0; 2 * m];
    for k in 0..m {
        out[k] = -omega[k] * im[k];
        out[m + k] = omega[k] * re[k];
    }
    out
}

pub fn build_basis(init: &StackedVector, grid: &FrequencyGrid, n: usize) -> Result<StackedBasis> {
    build_basis_with(init, grid, n, &BasisOptions::default())
}

/// Orthogonal basis of degree `n` for the Krylov space of `X` started at `init`.
///
/// With `init` equal to ones this yields orthogonal polynomials; with reciprocal
/// denominator samples it yields orthogonal rational functions with that
/// denominator.
pub fn build_basis_with(
    init: &StackedVector,
    grid: &FrequencyGrid,
    n: usize,
    opts: &BasisOptions,
) -> Result<StackedBasis> {
    let m = grid.len();
    if init.len() != m {
        return Err(OraError::invalid(format!("initial vector has {} entries, grid has {m}", init.len())));
    }
    let norm0 = init.norm();
    if !(norm0.is_finite() && norm0 > 0.0) {
        return Err(OraError::invalid("initial vector must be nonzero and finite"));
    }
    let sqrt_m = (m as f64).sqrt();
    let omega = grid.omega();
    let threshold = opts.eps_breakdown * grid.max_omega();

    let mut q = DMatrix::<f64>::zeros(2 * m, n + 1);
    let mut hess = DMatrix::<f64>::zeros(n + 1, n);
    q.set_column(0, &(init.stacked() * (sqrt_m / norm0)));

    for k in 1..=n {
        let mut v = DVector::from_vec(apply_x(omega, q.column(k - 1).as_slice()));
        if k > 1 {
            let coef = -hess[(k - 1, k - 2)];
            hess[(k - 2, k - 1)] = coef;
            v.axpy(-coef, &q.column(k - 2), 1.0);
        }
        if opts.reorthogonalize {
            for i in 0..k {
                let proj = q.column(i).dot(&v) / m as f64;
                hess[(i, k - 1)] += proj;
                v.axpy(-proj, &q.column(i), 1.0);
            }
        }
        let h = v.norm() / sqrt_m;
        if !(h > threshold) {
            return Err(OraError::BasisBreakdown { degree: k, achieved: k - 1 });
        }
        hess[(k, k - 1)] = h;
        q.set_column(k, &(v / h));
    }
    Ok(StackedBasis { q, hess, m, n })
}

/// Evaluate the polynomials defined by the recurrence `hess` at arbitrary
/// complex points. Column 0 is identically one.
///
/// For a rational basis these are the numerator polynomials (up to the
/// normalization of the initial vector). No orthogonality is implied.
pub fn evaluate_polynomial_basis(hess: &DMatrix<f64>, s_hat: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let n = hess.ncols();
    if hess.nrows() != n + 1 {
        return Err(OraError::invalid(format!("recurrence matrix must be (n+1)×n, got {}×{}", hess.nrows(), n)));
    }
    let p = s_hat.len();
    let mut out = DMatrix::<Complex64>::zeros(p, n + 1);
    out.column_mut(0).fill(Complex64::new(1.0, 0.0));
    for k in 1..=n {
        let h = hess[(k, k - 1)];
        if h == 0.0 {
            return Err(OraError::DegenerateRecurrence { column: k - 1 });
        }
        for r in 0..p {
            let mut acc = s_hat[r] * out[(r, k - 1)];
            for i in 0..k {
                let hik = hess[(i, k - 1)];
                if hik != 0.0 {
                    acc -= out[(r, i)] * hik;
                }
            }
            out[(r, k)] = acc / h;
        }
    }
    Ok(out)
}

/// The real `n×n` comrade matrix `H_nᵀ − h·e·c[0..n]ᵀ/c[n]` whose eigenvalues
/// are the zeros of the expansion `Σ c_k q_k`.
///
/// `hess` may be larger than `(n+1)×n`; its leading block is used.
pub fn comrade_matrix(hess: &DMatrix<f64>, c: &[f64], eps_leading: f64) -> Result<DMatrix<f64>> {
    if c.len() < 2 {
        return Err(OraError::invalid("comrade matrix needs degree n >= 1"));
    }
    let n = c.len() - 1;
    if hess.nrows() < n + 1 || hess.ncols() < n {
        return Err(OraError::invalid(format!(
            "recurrence matrix {}×{} too small for degree {n}",
            hess.nrows(),
            hess.ncols()
        )));
    }
    let cn = leading_coefficient(c, eps_leading)?;
    let h = hess[(n, n - 1)];
    let mut a = hess.view((0, 0), (n, n)).transpose();
    for j in 0..n {
        a[(n - 1, j)] -= h * c[j] / cn;
    }
    Ok(a)
}

/// Zeros of `Σ c_k q_k(s)` where `q_k` are the basis polynomials of `hess`.
/// Real or in exact conjugate pairs.
pub fn comrade_zeros(hess: &DMatrix<f64>, c: &[f64], eps_leading: f64) -> Result<Vec<Complex64>> {
    linalg::eigenvalues(&comrade_matrix(hess, c, eps_leading)?)
}

/// `c[n]`, provided it is not negligible relative to `‖c‖`.
pub(crate) fn leading_coefficient(c: &[f64], eps_leading: f64) -> Result<f64> {
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cn = *c.last().expect("nonempty coefficient vector");
    if !(cn.abs() > eps_leading * norm) {
        return Err(OraError::DegreeDeficient { leading: cn.abs(), norm });
    }
    Ok(cn)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: &[f64]) -> FrequencyGrid {
        FrequencyGrid::new(w.to_vec()).unwrap()
    }

    #[test]
    fn degree_zero_is_normalized_init() {
        let g = grid(&[1.0, 2.0, 3.0, 4.0]);
        let b = build_basis(&StackedVector::ones(4), &g, 0).unwrap();
        assert_eq!(b.q.ncols(), 1);
        assert_eq!(b.q.column(0).as_slice(), &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn degree_one_matches_gram_schmidt() {
        // Krylov columns [1,1,0,0] and X·q0 = [0,0,1,2]; already orthogonal,
        // so q1 = [0,0,1,2]·√2/√5 and h = √5/√2 = √2.5.
        let g = grid(&[1.0, 2.0]);
        let b = build_basis(&StackedVector::ones(2), &g, 1).unwrap();
        let h = 2.5f64.sqrt();
        assert!((b.hess[(0, 0)]).abs() == 0.0);
        assert!((b.hess[(1, 0)] - h).abs() < 1e-15);
        let expect = [0.0, 0.0, 1.0 / h, 2.0 / h];
        for (a, e) in b.q.column(1).iter().zip(expect) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn hessenberg_is_skew_tridiagonal() {
        let g = FrequencyGrid::linspace(0.0, 1.0, 30).unwrap();
        let b = build_basis(&StackedVector::ones(30), &g, 8).unwrap();
        for i in 0..=8 {
            for j in 0..8 {
                let v = b.hess[(i, j)];
                if i == j + 1 {
                    assert!(v > 0.0);
                } else if i + 1 == j {
                    assert_eq!(v, -b.hess[(j, i)]);
                } else {
                    assert_eq!(v, 0.0);
                }
            }
        }
        assert!(b.orthogonality_defect() < 1e-12);
        assert!(b.recurrence_residual(&g) < 1e-14);
    }

    #[test]
    fn zero_init_rejected() {
        let g = grid(&[1.0, 2.0]);
        let err = build_basis(&StackedVector::new(vec![0.0; 2], vec![0.0; 2]).unwrap(), &g, 1).unwrap_err();
        assert!(matches!(err, OraError::InvalidArgument(_)));
        assert!(build_basis(&StackedVector::ones(3), &g, 1).is_err());
    }

    #[test]
    fn breakdown_reports_achieved_degree() {
        // Two positive frequencies span a real 4-dimensional Krylov space.
        let g = grid(&[1.0, 2.0]);
        let err = build_basis(&StackedVector::ones(2), &g, 6).unwrap_err();
        match err {
            OraError::BasisBreakdown { degree, achieved } => {
                assert_eq!(degree, 4);
                assert_eq!(achieved, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dc_sample_needs_no_special_case() {
        let g = grid(&[0.0, 0.5, 1.0, 1.5]);
        let b = build_basis(&StackedVector::ones(4), &g, 4).unwrap();
        assert!(b.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn polynomial_evaluation_reproduces_grid_basis() {
        let g = FrequencyGrid::linspace(0.1, 1.0, 12).unwrap();
        let b = build_basis(&StackedVector::ones(12), &g, 5).unwrap();
        let qp = evaluate_polynomial_basis(&b.hess, &g.points()).unwrap();
        let qc = b.complex_columns();
        assert!((qp - qc).map(|z| z.norm()).max() < 1e-12);
    }

    #[test]
    fn degree_zero_evaluation_is_ones() {
        let hess = DMatrix::<f64>::zeros(1, 0);
        let q = evaluate_polynomial_basis(&hess, &[Complex64::new(3.0, -1.0), Complex64::new(0.0, 7.0)]).unwrap();
        assert_eq!(q.ncols(), 1);
        assert!(q.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn zero_subdiagonal_is_degenerate() {
        let hess = DMatrix::<f64>::zeros(2, 1);
        let err = evaluate_polynomial_basis(&hess, &[Complex64::new(0.0, 1.0)]).unwrap_err();
        assert!(matches!(err, OraError::DegenerateRecurrence { column: 0 }));
    }

    #[test]
    fn comrade_zero_of_s() {
        // p(s) = s lies in the span of {q0, q1}: s·q0 = h·q1, so c = [0, 1].
        let g = grid(&[0.3, 0.9, 2.0]);
        let b = build_basis(&StackedVector::ones(3), &g, 1).unwrap();
        let z = comrade_zeros(&b.hess, &[0.0, 1.0], DEFAULT_EPS_LEADING).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].norm() < 1e-12);
    }

    #[test]
    fn comrade_rejects_vanishing_leading_coefficient() {
        let g = grid(&[0.3, 0.9, 2.0]);
        let b = build_basis(&StackedVector::ones(3), &g, 2).unwrap();
        let err = comrade_zeros(&b.hess, &[1.0, 2.0, 1e-15], DEFAULT_EPS_LEADING).unwrap_err();
        assert!(matches!(err, OraError::DegreeDeficient { .. }));
        assert!(comrade_zeros(&b.hess, &[1.0], DEFAULT_EPS_LEADING).is_err());
    }
}
