//! The ORA iteration: a stabilized Sanathanan-Koerner scheme.
//!
//! Each step builds the orthogonal rational basis weighted by the previous
//! denominator, eliminates the numerator coefficients of every response with a
//! block QR reduction, and takes the denominator coefficients `c` (`‖c‖ = 1`)
//! as the smallest right singular vector of the stacked reduced blocks. The
//! new poles are the comrade zeros of `c`; unstable ones are reflected into
//! the left half-plane before the next denominator is sampled.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{build_basis_with, comrade_zeros, BasisOptions, StackedBasis, DEFAULT_EPS_LEADING};
use crate::error::{OraError, Result};
use crate::grid::{FrequencyGrid, StackedVector};
use crate::linalg::{self, smallest_right_singular_vector, sort_conjugate_closed, thin_r};
use crate::model::{assemble_state_space, StateSpaceModel};
use crate::numfit::{fit_numerator_with, least_squares, DenominatorSamples, FitOptions};
use crate::response::ResponseSet;

/// Relative tolerance for matching conjugate partners.
pub const CONJUGATE_TOL: f64 = 1e-10;

/// A conjugate-closed set of poles.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    poles: Vec<Complex64>,
}

impl PoleSet {
    pub fn new(mut poles: Vec<Complex64>) -> Result<Self> {
        if poles.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(OraError::invalid("poles must be finite"));
        }
        if !is_conjugate_closed(&poles, CONJUGATE_TOL) {
            return Err(OraError::invalid("pole set is not closed under conjugation"));
        }
        sort_conjugate_closed(&mut poles);
        Ok(Self { poles })
    }

    pub fn empty() -> Self {
        Self { poles: Vec::new() }
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn is_stable(&self) -> bool {
        self.poles.iter().all(|p| p.re <= 0.0)
    }
}

/// Every non-real value has a partner within `tol·|p|` of its conjugate.
pub fn is_conjugate_closed(values: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; values.len()];
    for i in 0..values.len() {
        if used[i] {
            continue;
        }
        let p = values[i];
        if p.im.abs() <= tol * p.norm() {
            used[i] = true;
            continue;
        }
        used[i] = true;
        let partner = (0..values.len())
            .find(|&j| !used[j] && (values[j] - p.conj()).norm() <= tol * p.norm().max(f64::MIN_POSITIVE));
        match partner {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

/// Reflect poles with strictly positive real part into the left half-plane.
pub fn flip_unstable(poles: &PoleSet) -> PoleSet {
    PoleSet { poles: poles.poles.iter().map(|p| if p.re > 0.0 { Complex64::new(-p.re, p.im) } else { *p }).collect() }
}

/// Move poles with `Re p > −δ·scale` to `Re p = −δ·scale`.
pub fn nudge_into_open_left_half_plane(poles: &PoleSet, delta: f64, scale: f64) -> PoleSet {
    let limit = -delta * scale;
    PoleSet { poles: poles.poles.iter().map(|p| if p.re > limit { Complex64::new(limit, p.im) } else { *p }).collect() }
}

/// `1 / ∏ᵢ ((jω_k − pᵢ)/scale)` for every grid point.
pub fn denominator_samples(poles: &PoleSet, grid: &FrequencyGrid) -> Result<DenominatorSamples> {
    let scale = grid.scale();
    let mut values = Vec::with_capacity(grid.len());
    for (k, s) in grid.points().into_iter().enumerate() {
        let mut prod = Complex64::new(1.0, 0.0);
        for &p in poles.poles() {
            let diff = s - p;
            if diff.norm() < 1e-300 * scale {
                return Err(OraError::PoleOnGrid { pole: p, index: k });
            }
            prod *= diff / scale;
        }
        let v = 1.0 / prod;
        if !(v.re.is_finite() && v.im.is_finite()) || v == Complex64::new(0.0, 0.0) {
            return Err(OraError::numerical(None, format!("denominator sample {k} over- or underflowed")));
        }
        values.push(v);
    }
    Ok(DenominatorSamples { values: StackedVector::from_complex(&values), source_poles: Some(poles.poles().to_vec()) })
}

/// Result of one denominator update.
#[derive(Debug, Clone)]
pub struct DenominatorUpdate {
    pub samples: DenominatorSamples,
    /// Stabilized poles.
    pub poles: PoleSet,
    /// Denominator coefficients in the basis of the previous denominator, `‖c‖ = 1`.
    pub c: DVector<f64>,
    pub sigma_min: f64,
    /// Second smallest singular value; a small gap flags a near-degenerate constraint.
    pub sigma_next: f64,
}

/// `−(F·Q_d)` in stacked real form for one response column.
fn weighted_block(values: &DMatrix<Complex64>, k: usize, qd: &DMatrix<f64>, m: usize) -> DMatrix<f64> {
    let cols = qd.ncols();
    let mut b = DMatrix::<f64>::zeros(2 * m, cols);
    for j in 0..cols {
        for i in 0..m {
            let f = values[(i, k)];
            let (q1, q2) = (qd[(i, j)], qd[(i + m, j)]);
            b[(i, j)] = -(f.re * q1 - f.im * q2);
            b[(i + m, j)] = -(f.re * q2 + f.im * q1);
        }
    }
    b
}

/// Basis of degree `d` seeded by `den_pre` and the reduced triangular block
/// `R22` of every response.
pub fn denominator_blocks(
    den_pre: &DenominatorSamples,
    data: &ResponseSet,
    n: usize,
    d: usize,
    opts: &BasisOptions,
) -> Result<(StackedBasis, Vec<DMatrix<f64>>)> {
    check_degrees(data.m(), n, d)?;
    let m = data.m();
    let basis = build_basis_with(&den_pre.values, &data.grid, d, opts)?;
    let qn = basis.leading_columns(n);
    let qnt = qn.transpose();
    let blocks = (0..data.n_responses())
        .map(|k| {
            let mut b = weighted_block(&data.values, k, &basis.q, m);
            let proj = &qn * (&qnt * &b) / m as f64;
            b -= proj;
            thin_r(b)
        })
        .collect();
    Ok((basis, blocks))
}

fn check_degrees(m: usize, n: usize, d: usize) -> Result<()> {
    if n > d {
        return Err(OraError::invalid(format!("numerator degree {n} exceeds denominator degree {d}")));
    }
    if 2 * m < n + d + 2 {
        return Err(OraError::invalid(format!(
            "{m} samples cannot determine degrees ({n}, {d}): need 2m >= n + d + 2"
        )));
    }
    Ok(())
}

fn stack(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let cols = blocks[0].ncols();
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut all = DMatrix::<f64>::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        all.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    all
}

/// Poles from coefficients `c` over the recurrence `hess`, stabilized and sampled.
fn finish_update(
    hess: &DMatrix<f64>,
    c: DVector<f64>,
    sigma_min: f64,
    sigma_next: f64,
    grid: &FrequencyGrid,
    eps_c: f64,
) -> Result<DenominatorUpdate> {
    let raw = if c.len() > 1 { comrade_zeros(hess, c.as_slice(), eps_c)? } else { Vec::new() };
    let poles = flip_unstable(&PoleSet::new(raw)?);
    let samples = denominator_samples(&poles, grid)?;
    Ok(DenominatorUpdate { samples, poles, c, sigma_min, sigma_next })
}

pub fn update_denominator(
    den_pre: &DenominatorSamples,
    data: &ResponseSet,
    n: usize,
    d: usize,
) -> Result<DenominatorUpdate> {
    update_denominator_with(den_pre, data, n, d, DEFAULT_EPS_LEADING, &BasisOptions::default())
}

/// One ORA denominator update with explicit tolerances.
pub fn update_denominator_with(
    den_pre: &DenominatorSamples,
    data: &ResponseSet,
    n: usize,
    d: usize,
    eps_c: f64,
    opts: &BasisOptions,
) -> Result<DenominatorUpdate> {
    let (basis, blocks) = denominator_blocks(den_pre, data, n, d, opts)?;
    let sv = smallest_right_singular_vector(&stack(&blocks))?;
    finish_update(&basis.hess, sv.vector, sv.sigma_min, sv.sigma_next, &data.grid, eps_c)
}

/// Denominator update over the plain orthogonal polynomial basis with the
/// previous denominator applied as an explicit row weighting. This is the
/// classical, poorly conditioned form and exists for comparison only.
pub fn update_denominator_polybasis(
    den_pre: &DenominatorSamples,
    data: &ResponseSet,
    n: usize,
    d: usize,
) -> Result<DenominatorUpdate> {
    check_degrees(data.m(), n, d)?;
    let m = data.m();
    let basis = build_basis_with(&StackedVector::ones(m), &data.grid, d, &BasisOptions::default())?;
    let weighted = weight_columns(&basis.q, &normalized(&den_pre.values), m);
    let blocks: Vec<_> = (0..data.n_responses())
        .map(|k| {
            let b = weighted_block(&data.values, k, &weighted, m);
            let mut full = DMatrix::<f64>::zeros(2 * m, n + 1 + d + 1);
            full.columns_mut(0, n + 1).copy_from(&weighted.columns(0, n + 1));
            full.columns_mut(n + 1, d + 1).copy_from(&b);
            let r = thin_r(full);
            r.view((n + 1, n + 1), (d + 1, d + 1)).into_owned()
        })
        .collect();
    let sv = smallest_right_singular_vector(&stack(&blocks))?;
    finish_update(&basis.hess, sv.vector, sv.sigma_min, sv.sigma_next, &data.grid, DEFAULT_EPS_LEADING)
}

fn normalized(v: &StackedVector) -> Vec<Complex64> {
    let s = (v.len() as f64).sqrt() / v.norm();
    v.to_complex().into_iter().map(|z| z * s).collect()
}

/// Columns of the stacked basis multiplied entrywise by complex weights.
fn weight_columns(q: &DMatrix<f64>, w: &[Complex64], m: usize) -> DMatrix<f64> {
    let mut out = DMatrix::<f64>::zeros(2 * m, q.ncols());
    for j in 0..q.ncols() {
        for i in 0..m {
            let z = w[i] * Complex64::new(q[(i, j)], q[(i + m, j)]);
            out[(i, j)] = z.re;
            out[(i + m, j)] = z.im;
        }
    }
    out
}

/// Residual of the weighted polynomial-basis numerator fit `f ≈ D·Q_p·g`.
fn polybasis_residual(den: &DenominatorSamples, data: &ResponseSet, n: usize) -> Result<f64> {
    let m = data.m();
    let basis = build_basis_with(&StackedVector::ones(m), &data.grid, n, &BasisOptions::default())?;
    let a = weight_columns(&basis.q, &normalized(&den.values), m);
    let rhs = DMatrix::from_fn(2 * m, data.n_responses(), |i, k| {
        let z = data.values[(i % m, k)];
        if i < m {
            z.re
        } else {
            z.im
        }
    });
    let g = least_squares(a.clone(), &rhs)?;
    Ok((a * g - rhs).norm())
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialDenominator {
    /// `d_pre(s) = 1`.
    Unit,
    Poles(Vec<Complex64>),
    Samples(DenominatorSamples),
}

impl InitialDenominator {
    /// Lightly damped pole pairs `−ω/100 ± jω` with `ω` log-spaced over the
    /// band of `grid`, plus one real pole at the band's geometric centre
    /// when `d` is odd.
    pub fn logspaced(grid: &FrequencyGrid, d: usize) -> Self {
        let hi = grid.max_omega().max(f64::MIN_POSITIVE);
        let lo = grid.omega().iter().copied().filter(|&w| w > 0.0).fold(hi, f64::min).max(hi * 1e-3);
        let pairs = d / 2;
        let mut poles = Vec::with_capacity(d);
        for k in 0..pairs {
            let t = if pairs > 1 { k as f64 / (pairs - 1) as f64 } else { 0.5 };
            let w = lo * (hi / lo).powf(t);
            poles.push(Complex64::new(-w / 100.0, w));
            poles.push(Complex64::new(-w / 100.0, -w));
        }
        if d % 2 == 1 {
            poles.push(Complex64::new(-(lo * hi).sqrt(), 0.0));
        }
        InitialDenominator::Poles(poles)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisKind {
    /// Orthogonal rational basis (ORA).
    #[default]
    OrthogonalRational,
    /// Orthogonal polynomials with explicit weighting (diagnostic comparison).
    OrthogonalPolynomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkConfig {
    pub num_degree: usize,
    pub den_degree: usize,
    pub iterations: usize,
    pub init: InitialDenominator,
    pub epsilon_c: f64,
    /// Stop early once `‖den_new − den_pre‖/‖den_pre‖` falls below this.
    pub convergence_tol: Option<f64>,
    /// Push poles on or near the imaginary axis to `Re p = −δ·scale`.
    pub axis_nudge: Option<f64>,
    pub basis_kind: BasisKind,
    pub basis: BasisOptions,
}

impl SkConfig {
    /// `n = d`, 20 iterations from a unit denominator.
    pub fn new(order: usize) -> Self {
        Self::with_degrees(order, order)
    }

    pub fn with_degrees(num_degree: usize, den_degree: usize) -> Self {
        Self {
            num_degree,
            den_degree,
            iterations: 20,
            init: InitialDenominator::Unit,
            epsilon_c: DEFAULT_EPS_LEADING,
            convergence_tol: None,
            axis_nudge: None,
            basis_kind: BasisKind::OrthogonalRational,
            basis: BasisOptions::default(),
        }
    }

    pub fn iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn basis_kind(mut self, kind: BasisKind) -> Self {
        self.basis_kind = kind;
        self
    }

    pub fn init(mut self, init: InitialDenominator) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.iterations == 0 {
            return Err(OraError::invalid("at least one iteration is required"));
        }
        check_degrees(m, self.num_degree, self.den_degree)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub poles: PoleSet,
    pub residual_norm: f64,
    pub rms: f64,
    pub sigma_min: f64,
    pub sigma_next: f64,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub best_model: StateSpaceModel,
    pub best_iteration: usize,
    pub per_iteration: Vec<IterationRecord>,
    /// Best residual norm over all iterations.
    pub residual_norm: f64,
    /// `residual_norm / √(m·N)`.
    pub rms: f64,
    /// Iterations that failed, with the error message.
    pub failures: Vec<(usize, String)>,
}

impl FitResult {
    pub fn best_poles(&self) -> &PoleSet {
        &self.per_iteration.iter().find(|r| r.iteration == self.best_iteration).expect("best iteration recorded").poles
    }
}

/// Run the full iteration and return the best model over all iterations.
pub fn run_ora(data: &ResponseSet, cfg: &SkConfig) -> Result<FitResult> {
    cfg.validate(data.m())?;
    let (n, d) = (cfg.num_degree, cfg.den_degree);
    let grid = &data.grid;
    let norm_factor = ((data.m() * data.n_responses()) as f64).sqrt();

    let mut den = match &cfg.init {
        InitialDenominator::Unit => DenominatorSamples::unit(data.m()),
        InitialDenominator::Poles(p) => denominator_samples(&PoleSet::new(p.clone())?, grid)?,
        InitialDenominator::Samples(s) => {
            if s.len() != data.m() {
                return Err(OraError::invalid("initial denominator samples do not match the grid"));
            }
            s.clone()
        }
    };

    let fit_opts = FitOptions { basis: cfg.basis, ..Default::default() };
    let mut records = Vec::with_capacity(cfg.iterations);
    let mut failures = Vec::new();
    let mut best: Option<(usize, f64, DenominatorSamples)> = None;

    for it in 0..cfg.iterations {
        let update = match cfg.basis_kind {
            BasisKind::OrthogonalRational => update_denominator_with(&den, data, n, d, cfg.epsilon_c, &cfg.basis),
            BasisKind::OrthogonalPolynomial => update_denominator_polybasis(&den, data, n, d),
        };
        let mut update = match update {
            Ok(u) => u,
            Err(e) => {
                failures.push((it, e.in_iteration(it).to_string()));
                break;
            }
        };
        if let Some(delta) = cfg.axis_nudge {
            update.poles = nudge_into_open_left_half_plane(&update.poles, delta, grid.scale());
            update.samples = match denominator_samples(&update.poles, grid) {
                Ok(s) => s,
                Err(e) => {
                    failures.push((it, e.in_iteration(it).to_string()));
                    break;
                }
            };
        }
        let residual = match cfg.basis_kind {
            BasisKind::OrthogonalRational => {
                fit_numerator_with(&update.samples, data, n, d, &fit_opts).map(|f| f.residual_norm)
            }
            BasisKind::OrthogonalPolynomial => polybasis_residual(&update.samples, data, n),
        };
        match residual {
            Ok(r) if r.is_finite() => {
                records.push(IterationRecord {
                    iteration: it,
                    poles: update.poles.clone(),
                    residual_norm: r,
                    rms: r / norm_factor,
                    sigma_min: update.sigma_min,
                    sigma_next: update.sigma_next,
                });
                if best.as_ref().is_none_or(|b| r < b.1) {
                    best = Some((it, r, update.samples.clone()));
                }
            }
            Ok(_) => failures.push((it, format!("numerical failure in iteration {it}: non-finite residual"))),
            Err(e) => failures.push((it, e.in_iteration(it).to_string())),
        }
        let converged = cfg.convergence_tol.is_some_and(|tol| relative_change(&den, &update.samples) < tol);
        den = update.samples;
        if converged {
            break;
        }
    }

    let Some((best_iteration, residual_norm, best_den)) = best else {
        return Err(OraError::AllIterationsFailed { log: failures });
    };
    let fit = fit_numerator_with(&best_den, data, n, d, &fit_opts).map_err(|e| e.in_iteration(best_iteration))?;
    let best_model = assemble_state_space(&fit, d)?.with_labels(data.labels.clone())?.with_scale(grid.scale());
    Ok(FitResult {
        best_model,
        best_iteration,
        per_iteration: records,
        residual_norm,
        rms: residual_norm / norm_factor,
        failures,
    })
}

/// Relative change between two denominators after normalizing both to norm √m.
fn relative_change(a: &DenominatorSamples, b: &DenominatorSamples) -> f64 {
    let (x, y) = (normalized(&a.values), normalized(&b.values));
    let diff: f64 = x.iter().zip(&y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    diff / (x.len() as f64).sqrt()
}

/// Eigenvalues of `A` of a model, for stability checks in callers.
pub fn model_poles(model: &StateSpaceModel) -> Result<Vec<Complex64>> {
    linalg::eigenvalues(&model.a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn flips_only_strictly_unstable() {
        let p = PoleSet::new(vec![c(2.0, 3.0), c(2.0, -3.0)]).unwrap();
        assert_eq!(flip_unstable(&p).poles(), &[c(-2.0, 3.0), c(-2.0, -3.0)]);
        let p = PoleSet::new(vec![c(-1.0, 0.0)]).unwrap();
        assert_eq!(flip_unstable(&p).poles(), &[c(-1.0, 0.0)]);
        let p = PoleSet::new(vec![c(0.0, 5.0), c(0.0, -5.0)]).unwrap();
        assert_eq!(flip_unstable(&p), p);
    }

    #[test]
    fn nudge_moves_axis_poles() {
        let p = PoleSet::new(vec![c(0.0, 5.0), c(0.0, -5.0)]).unwrap();
        let q = nudge_into_open_left_half_plane(&p, 1e-8, 2.0);
        assert!(q.poles().iter().all(|p| p.re == -2e-8));
    }

    #[test]
    fn pole_set_requires_conjugate_closure() {
        assert!(PoleSet::new(vec![c(-1.0, 1.0)]).is_err());
        assert!(PoleSet::new(vec![c(-1.0, 1.0), c(-1.0, -1.0 + 1e-13)]).is_ok());
    }

    #[test]
    fn samples_of_single_pole() {
        let grid = FrequencyGrid::with_scale(vec![1.0], 1.0).unwrap();
        let s = denominator_samples(&PoleSet::new(vec![c(-1.0, 0.0)]).unwrap(), &grid).unwrap();
        let v = s.values.to_complex()[0];
        assert!((v - c(0.5, -0.5)).norm() < 1e-16);
    }

    #[test]
    fn samples_of_empty_set_are_ones() {
        let grid = FrequencyGrid::new(vec![0.0, 1.0, 7.0]).unwrap();
        let s = denominator_samples(&PoleSet::empty(), &grid).unwrap();
        assert!(s.values.to_complex().iter().all(|z| *z == c(1.0, 0.0)));
    }

    #[test]
    fn samples_match_pointwise_evaluation() {
        let grid = FrequencyGrid::with_scale(vec![1.0, 2.0, 3.0], 2.0).unwrap();
        let poles = PoleSet::new(vec![c(-1.0, 2.0), c(-1.0, -2.0)]).unwrap();
        let s = denominator_samples(&poles, &grid).unwrap().values.to_complex();
        for (k, w) in [1.0, 2.0, 3.0].iter().enumerate() {
            let sk = c(0.0, *w);
            let direct = 4.0 / ((sk + c(1.0, -2.0)) * (sk + c(1.0, 2.0)));
            assert!((s[k] - direct).norm() < 1e-15 * direct.norm());
        }
    }

    #[test]
    fn pole_on_grid_is_an_error() {
        let grid = FrequencyGrid::new(vec![1.0, 2.0]).unwrap();
        let poles = PoleSet::new(vec![c(0.0, 2.0), c(0.0, -2.0)]).unwrap();
        assert!(matches!(denominator_samples(&poles, &grid), Err(OraError::PoleOnGrid { index: 1, .. })));
    }

    #[test]
    fn constant_data_is_interpolated_exactly() {
        let grid = FrequencyGrid::logspace(0.1, 10.0, 20).unwrap();
        let data = ResponseSet::from_fn(grid, 1, |_, _| c(1.0, 0.0)).unwrap();
        let den = DenominatorSamples::unit(20);
        let (_, blocks) = denominator_blocks(&den, &data, 1, 1, &BasisOptions::default()).unwrap();
        let sv = smallest_right_singular_vector(&stack(&blocks)).unwrap();
        assert!(sv.sigma_min <= 1e-12, "{}", sv.sigma_min);
        // n(s) = d(s) = const: the degree-1 coefficient vanishes.
        assert!(matches!(update_denominator(&den, &data, 1, 1), Err(OraError::DegreeDeficient { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(SkConfig::with_degrees(3, 2).validate(100).is_err());
        assert!(SkConfig::new(2).iterations(0).validate(100).is_err());
        assert!(SkConfig::new(3).validate(3).is_err());
        assert!(SkConfig::new(3).validate(4).is_ok());
    }

    #[test]
    fn degree_zero_variants_agree() {
        let grid = FrequencyGrid::logspace(0.1, 10.0, 25).unwrap();
        let data = ResponseSet::from_fn(grid, 1, |s, _| 1.0 / (s + 1.0)).unwrap();
        let a = run_ora(&data, &SkConfig::new(0).iterations(3)).unwrap();
        let b = run_ora(&data, &SkConfig::new(0).iterations(3).basis_kind(BasisKind::OrthogonalPolynomial)).unwrap();
        assert!((a.residual_norm - b.residual_norm).abs() <= 1e-12);
        assert!(a.best_poles().is_empty() && b.best_poles().is_empty());
    }

    #[test]
    fn logspaced_start_is_stable_and_conjugate_closed() {
        let grid = FrequencyGrid::logspace(0.1, 10.0, 30).unwrap();
        let InitialDenominator::Poles(p) = InitialDenominator::logspaced(&grid, 5) else { panic!() };
        assert_eq!(p.len(), 5);
        let set = PoleSet::new(p).unwrap();
        assert!(set.is_stable());
        assert!(set.poles().iter().all(|z| z.im.abs() <= 10.0 + 1e-9 && z.norm() >= 0.1 - 1e-12));
    }
}
