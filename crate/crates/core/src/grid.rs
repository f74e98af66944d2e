//! Sample points on the imaginary axis and the stacked real representation of
//! complex vectors.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{OraError, Result};

/// Purely imaginary sample points `s_k = j·ω_k`.
///
/// `scale` is the weight used when rebuilding denominators from poles; it
/// defaults to the mean of `|ω_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omega: Vec<f64>,
    scale: f64,
}

impl FrequencyGrid {
    /// Grid from angular frequencies (rad/s). Must be nonnegative and strictly increasing.
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        validate_omega(&omega)?;
        let mean = omega.iter().sum::<f64>() / omega.len() as f64;
        // An all-DC grid has no natural scale.
        let scale = if mean > 0.0 { mean } else { 1.0 };
        Ok(Self { omega, scale })
    }

    pub fn with_scale(omega: Vec<f64>, scale: f64) -> Result<Self> {
        validate_omega(&omega)?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(OraError::invalid(format!("grid scale must be positive and finite, got {scale}")));
        }
        Ok(Self { omega, scale })
    }

    /// Grid from frequencies in Hz (`ω = 2π·f`).
    pub fn from_hz(freqs_hz: &[f64]) -> Result<Self> {
        Self::new(freqs_hz.iter().map(|f| 2.0 * std::f64::consts::PI * f).collect())
    }

    /// Log-spaced grid with `m` points between `lo` and `hi` rad/s inclusive.
    pub fn logspace(lo: f64, hi: f64, m: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) || m == 0 {
            return Err(OraError::invalid("logspace needs 0 < lo < hi and m >= 1"));
        }
        if m == 1 {
            return Self::new(vec![lo]);
        }
        let (a, b) = (lo.ln(), hi.ln());
        let step = (b - a) / (m - 1) as f64;
        Self::new((0..m).map(|k| (a + step * k as f64).exp()).collect())
    }

    /// Evenly spaced grid with `m` points between `lo` and `hi` rad/s inclusive.
    pub fn linspace(lo: f64, hi: f64, m: usize) -> Result<Self> {
        if !(lo >= 0.0 && hi > lo) || m == 0 {
            return Err(OraError::invalid("linspace needs 0 <= lo < hi and m >= 1"));
        }
        if m == 1 {
            return Self::new(vec![lo]);
        }
        let step = (hi - lo) / (m - 1) as f64;
        Self::new((0..m).map(|k| lo + step * k as f64).collect())
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn max_omega(&self) -> f64 {
        *self.omega.last().expect("grid is never empty")
    }

    /// The sample point `j·ω_k`.
    pub fn s(&self, k: usize) -> Complex64 {
        Complex64::new(0.0, self.omega[k])
    }

    pub fn points(&self) -> Vec<Complex64> {
        self.omega.iter().map(|&w| Complex64::new(0.0, w)).collect()
    }

    pub fn freqs_hz(&self) -> Vec<f64> {
        self.omega.iter().map(|w| w / (2.0 * std::f64::consts::PI)).collect()
    }
}

fn validate_omega(omega: &[f64]) -> Result<()> {
    if omega.is_empty() {
        return Err(OraError::invalid("frequency grid needs at least one point"));
    }
    if let Some(w) = omega.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(OraError::invalid(format!("angular frequencies must be finite and nonnegative, got {w}")));
    }
    if let Some(k) = omega.windows(2).position(|p| p[1] <= p[0]) {
        return Err(OraError::invalid(format!("angular frequencies must be strictly increasing (index {})", k + 1)));
    }
    Ok(())
}

/// A complex vector `re + j·im` kept as two real parts, equivalent to the
/// stacked real vector `[re; im]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedVector {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StackedVector {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != im.len() {
            return Err(OraError::invalid(format!("real part has {} entries, imaginary part {}", re.len(), im.len())));
        }
        Ok(Self { re, im })
    }

    pub fn ones(m: usize) -> Self {
        Self { re: vec![1.0; m], im: vec![0.0; m] }
    }

    pub fn from_complex(values: &[Complex64]) -> Self {
        Self { re: values.iter().map(|z| z.re).collect(), im: values.iter().map(|z| z.im).collect() }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.re.iter().zip(&self.im).map(|(&r, &i)| Complex64::new(r, i)).collect()
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// The stacked real vector `[re; im]` of length `2m`.
    pub fn stacked(&self) -> DVector<f64> {
        DVector::from_iterator(2 * self.len(), self.re.iter().chain(&self.im).copied())
    }

    pub fn norm(&self) -> f64 {
        self.re.iter().chain(&self.im).map(|x| x * x).sum::<f64>().sqrt()
    }
}
