//! Fitted common-pole macromodels.
//!
//! The state-space realization is read directly off the orthogonal basis
//! coefficients: with numerator coefficients `G = gᵀ` and denominator
//! coefficients `c`,
//!
//! ```text
//! A = H_dᵀ − h·e·c[0..d]ᵀ/c_d      B = h·e/c_d
//! C = G[:, 0..d] − G[:, d]·c[0..d]ᵀ/c_d      D = G[:, d]/c_d
//! ```
//!
//! so `eig(A)` are the zeros of the denominator expansion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{leading_coefficient, DEFAULT_EPS_LEADING};
use crate::error::{OraError, Result};
use crate::linalg;
use crate::numfit::NumeratorFit;
use crate::response::ResponseSet;

pub const SCHEMA_VERSION: u32 = 1;

/// Eigenvector condition number above which pole-residue conversion is refused.
pub const MAX_EIGVEC_CONDITION: f64 = 1e12;

/// Real state-space realization `C(sI − A)⁻¹B + D` of `N` responses sharing
/// `d` poles.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DMatrix<f64>,
    pub d: DVector<f64>,
    pub labels: Vec<String>,
    /// Frequency scale used while fitting (metadata; matrices are in rad/s).
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleResidueModel {
    pub poles: Vec<Complex64>,
    /// `N × d`.
    pub residues: DMatrix<Complex64>,
    pub direct: Vec<f64>,
    pub labels: Vec<String>,
}

/// Build the realization from a numerator fit whose basis has degree `d`.
pub fn assemble_state_space(fit: &NumeratorFit, d: usize) -> Result<StateSpaceModel> {
    if fit.basis.n != d {
        return Err(OraError::invalid(format!("fit basis has degree {}, expected {d}", fit.basis.n)));
    }
    let c = fit.c.as_slice();
    let cd = leading_coefficient(c, DEFAULT_EPS_LEADING)?;
    let nr = fit.g.ncols();
    let gt = fit.g.transpose();
    let labels = (1..=nr).map(|k| format!("H{k}")).collect();
    if d == 0 {
        return Ok(StateSpaceModel {
            a: DMatrix::zeros(0, 0),
            b: DVector::zeros(0),
            c: DMatrix::zeros(nr, 0),
            d: gt.column(0) / cd,
            labels,
            scale: 1.0,
        });
    }
    let hess = &fit.basis.hess;
    let h = hess[(d, d - 1)];
    let mut a = hess.view((0, 0), (d, d)).transpose();
    for j in 0..d {
        a[(d - 1, j)] -= h * c[j] / cd;
    }
    let mut b = DVector::zeros(d);
    b[d - 1] = h / cd;
    let g_last = gt.column(d).into_owned();
    let mut cmat = gt.columns(0, d).into_owned();
    for j in 0..d {
        let s = c[j] / cd;
        cmat.column_mut(j).axpy(-s, &g_last, 1.0);
    }
    Ok(StateSpaceModel { a, b, c: cmat, d: g_last / cd, labels, scale: 1.0 })
}

impl StateSpaceModel {
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_responses() {
            return Err(OraError::invalid(format!("{} labels for {} responses", labels.len(), self.n_responses())));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_responses(&self) -> usize {
        self.d.len()
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        linalg::eigenvalues(&self.a)
    }

    /// `C(sI − A)⁻¹B + D` for every response.
    pub fn evaluate(&self, s: Complex64) -> Result<Vec<Complex64>> {
        let n = self.order();
        let direct = self.d.iter().map(|&x| Complex64::new(x, 0.0));
        if n == 0 {
            return Ok(direct.collect());
        }
        let mut m = self.a.map(|x| Complex64::new(-x, 0.0));
        for i in 0..n {
            m[(i, i)] += s;
        }
        let rhs = self.b.map(|x| Complex64::new(x, 0.0));
        let x = m
            .lu()
            .solve(&rhs)
            .filter(|x| x.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            .ok_or(OraError::EvaluationAtPole(s))?;
        let cx = linalg::to_complex(&self.c) * x;
        Ok(cx.iter().zip(direct).map(|(a, b)| a + b).collect())
    }

    /// Evaluate at many points; returns `points × N`.
    pub fn evaluate_many(&self, points: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let mut out = DMatrix::zeros(points.len(), self.n_responses());
        for (i, &s) in points.iter().enumerate() {
            for (k, v) in self.evaluate(s)?.into_iter().enumerate() {
                out[(i, k)] = v;
            }
        }
        Ok(out)
    }

    /// Diagonalize `A` and read off residues `(C·V)∘(V⁻¹·B)ᵀ`.
    pub fn to_pole_residue(&self) -> Result<PoleResidueModel> {
        let n = self.order();
        let poles = self.poles()?;
        let nr = self.n_responses();
        if n == 0 {
            return Ok(PoleResidueModel {
                poles,
                residues: DMatrix::zeros(nr, 0),
                direct: self.d.iter().copied().collect(),
                labels: self.labels.clone(),
            });
        }
        let anorm = self.a.norm().max(f64::MIN_POSITIVE);
        let mut v = DMatrix::<Complex64>::zeros(n, n);
        let mut k = 0;
        while k < n {
            let lambda = poles[k];
            let vec = eigenvector(&self.a, lambda, anorm)?;
            v.set_column(k, &vec);
            if lambda.im != 0.0 && k + 1 < n && poles[k + 1] == lambda.conj() {
                v.set_column(k + 1, &vec.map(|z| z.conj()));
                k += 2;
            } else {
                k += 1;
            }
        }
        let vinv = v.clone().lu().try_inverse().ok_or(OraError::Defective(f64::INFINITY))?;
        let cond = norm1(&v) * norm1(&vinv);
        if !(cond < MAX_EIGVEC_CONDITION) {
            return Err(OraError::Defective(cond));
        }
        let right = &vinv * self.b.map(|x| Complex64::new(x, 0.0));
        let left = linalg::to_complex(&self.c) * &v;
        let residues = DMatrix::from_fn(nr, n, |r, i| left[(r, i)] * right[i]);
        Ok(PoleResidueModel { poles, residues, direct: self.d.iter().copied().collect(), labels: self.labels.clone() })
    }
}

fn norm1(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Unit eigenvector of `a` for the (computed) eigenvalue `lambda`, by shifted
/// inverse iteration. Real eigenvalues use real arithmetic.
fn eigenvector(a: &DMatrix<f64>, lambda: Complex64, anorm: f64) -> Result<DVector<Complex64>> {
    let n = a.nrows();
    let mut shift = 1e-12 * (anorm + lambda.norm());
    for _ in 0..6 {
        let found = if lambda.im == 0.0 {
            let mut m = a.clone();
            for i in 0..n {
                m[(i, i)] -= lambda.re + shift;
            }
            let lu = m.lu();
            let mut x = DVector::from_fn(n, |i, _| 1.0 / (1.0 + i as f64));
            let mut ok = true;
            for _ in 0..3 {
                match lu.solve(&x) {
                    Some(y) if y.iter().all(|v| v.is_finite()) && y.norm() > 0.0 => x = &y / y.norm(),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            ok.then(|| x.map(|v| Complex64::new(v, 0.0)))
        } else {
            let mut m = linalg::to_complex(a);
            let mu = lambda + Complex64::new(shift, shift);
            for i in 0..n {
                m[(i, i)] -= mu;
            }
            let lu = m.lu();
            let mut x = DVector::from_fn(n, |i, _| Complex64::new(1.0 / (1.0 + i as f64), 0.0));
            let mut ok = true;
            for _ in 0..3 {
                match lu.solve(&x) {
                    Some(y) if y.iter().all(|v| v.re.is_finite() && v.im.is_finite()) && y.norm() > 0.0 => {
                        let nrm = y.norm();
                        x = y.map(|z| z / nrm);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            ok.then_some(x)
        };
        if let Some(x) = found {
            return Ok(x);
        }
        shift *= 100.0;
    }
    Err(OraError::numerical(None, format!("inverse iteration failed for eigenvalue {lambda}")))
}

impl PoleResidueModel {
    pub fn n_responses(&self) -> usize {
        self.direct.len()
    }

    pub fn evaluate(&self, s: Complex64) -> Result<Vec<Complex64>> {
        if let Some(p) = self.poles.iter().find(|&&p| p == s) {
            return Err(OraError::EvaluationAtPole(*p));
        }
        Ok((0..self.n_responses())
            .map(|k| {
                let mut acc = Complex64::new(self.direct[k], 0.0);
                for (i, p) in self.poles.iter().enumerate() {
                    acc += self.residues[(k, i)] / (s - p);
                }
                acc
            })
            .collect())
    }
}

/// Frobenius norm of `model − data` over the data grid, and the rms value
/// `residual_norm / √(m·N)`.
pub fn rms_error(model: &StateSpaceModel, data: &ResponseSet) -> Result<(f64, f64)> {
    if model.n_responses() != data.n_responses() {
        return Err(OraError::invalid(format!(
            "model has {} responses, data {}",
            model.n_responses(),
            data.n_responses()
        )));
    }
    let eval = model.evaluate_many(&data.grid.points())?;
    let residual = (eval - &data.values).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok((residual, residual / ((data.m() * data.n_responses()) as f64).sqrt()))
}

// ---------------------------------------------------------------------------
// JSON export

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpaceJson {
    pub schema_version: u32,
    pub kind: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub d: Vec<f64>,
    pub labels: Vec<String>,
    pub scale: f64,
    /// Frequencies (Hz) of the data the model was fitted to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_freqs_hz: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleResidueJson {
    pub schema_version: u32,
    pub kind: String,
    /// `[re, im]` pairs.
    pub poles: Vec<[f64; 2]>,
    /// `N` rows, each `d` `[re, im]` pairs.
    pub residues: Vec<Vec<[f64; 2]>>,
    pub direct: Vec<f64>,
    pub labels: Vec<String>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn schema(msg: impl Into<String>) -> OraError {
    OraError::InvalidArgument(format!("model schema error: {}", msg.into()))
}

impl StateSpaceModel {
    pub fn to_json_struct(&self, fit_freqs_hz: Option<Vec<f64>>) -> StateSpaceJson {
        StateSpaceJson {
            schema_version: SCHEMA_VERSION,
            kind: "state_space".into(),
            a: rows(&self.a),
            b: self.b.iter().copied().collect(),
            c: rows(&self.c),
            d: self.d.iter().copied().collect(),
            labels: self.labels.clone(),
            scale: self.scale,
            fit_freqs_hz,
        }
    }

    pub fn to_json(&self, fit_freqs_hz: Option<Vec<f64>>) -> String {
        serde_json::to_string_pretty(&self.to_json_struct(fit_freqs_hz)).expect("model serializes")
    }

    /// Parse and validate dimensions. Returns the model and the stored fit grid.
    pub fn from_json(text: &str) -> Result<(Self, Option<Vec<f64>>)> {
        let j: StateSpaceJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        Self::from_json_struct(j)
    }

    pub fn from_json_struct(j: StateSpaceJson) -> Result<(Self, Option<Vec<f64>>)> {
        if j.schema_version != SCHEMA_VERSION {
            return Err(schema(format!("unsupported schema_version {}", j.schema_version)));
        }
        if j.kind != "state_space" {
            return Err(schema(format!("expected kind \"state_space\", got {:?}", j.kind)));
        }
        let n = j.a.len();
        if j.a.iter().any(|r| r.len() != n) {
            return Err(schema("A must be square"));
        }
        if j.b.len() != n {
            return Err(schema(format!("B has {} entries, A is {n}×{n}", j.b.len())));
        }
        let nr = j.d.len();
        if j.c.len() != nr || j.c.iter().any(|r| r.len() != n) {
            return Err(schema(format!("C must be {nr}×{n}")));
        }
        if j.labels.len() != nr {
            return Err(schema(format!("{} labels for {nr} responses", j.labels.len())));
        }
        if !(j.scale.is_finite() && j.scale > 0.0) {
            return Err(schema("scale must be positive"));
        }
        let a = DMatrix::from_fn(n, n, |i, k| j.a[i][k]);
        let c = DMatrix::from_fn(nr, n, |i, k| j.c[i][k]);
        let model = StateSpaceModel {
            a,
            b: DVector::from_vec(j.b),
            c,
            d: DVector::from_vec(j.d),
            labels: j.labels,
            scale: j.scale,
        };
        Ok((model, j.fit_freqs_hz))
    }
}

impl PoleResidueModel {
    pub fn to_json(&self) -> String {
        let j = PoleResidueJson {
            schema_version: SCHEMA_VERSION,
            kind: "pole_residue".into(),
            poles: self.poles.iter().map(|p| [p.re, p.im]).collect(),
            residues: self.residues.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
            direct: self.direct.clone(),
            labels: self.labels.clone(),
        };
        serde_json::to_string_pretty(&j).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: PoleResidueJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        if j.schema_version != SCHEMA_VERSION || j.kind != "pole_residue" {
            return Err(schema("expected a version-1 pole_residue document"));
        }
        let (nr, n) = (j.direct.len(), j.poles.len());
        if j.residues.len() != nr || j.residues.iter().any(|r| r.len() != n) || j.labels.len() != nr {
            return Err(schema(format!("residues must be {nr}×{n} with {nr} labels")));
        }
        Ok(Self {
            poles: j.poles.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
            residues: DMatrix::from_fn(nr, n, |r, i| Complex64::new(j.residues[r][i][0], j.residues[r][i][1])),
            direct: j.direct,
            labels: j.labels,
        })
    }
}
