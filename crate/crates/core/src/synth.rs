//! Ground-truth rational systems in pole-residue form, for testing and demos.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::grid::FrequencyGrid;
use crate::response::ResponseSet;

/// `H_k(s) = direct_k + Σᵢ residues[k][i]/(s − poles[i])` with conjugate-closed
/// poles and correspondingly conjugate residues.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSystem {
    pub poles: Vec<Complex64>,
    /// `N × d`.
    pub residues: DMatrix<Complex64>,
    pub direct: Vec<f64>,
}

impl RationalSystem {
    pub fn order(&self) -> usize {
        self.poles.len()
    }

    pub fn n_responses(&self) -> usize {
        self.direct.len()
    }

    pub fn evaluate(&self, s: Complex64, k: usize) -> Complex64 {
        let mut acc = Complex64::new(self.direct[k], 0.0);
        for (i, p) in self.poles.iter().enumerate() {
            acc += self.residues[(k, i)] / (s - p);
        }
        acc
    }

    pub fn sample(&self, grid: &FrequencyGrid) -> Result<ResponseSet> {
        ResponseSet::from_fn(grid.clone(), self.n_responses(), |s, k| self.evaluate(s, k))
    }

    /// Resonant system with `pairs` complex pole pairs spread log-uniformly over
    /// `[lo, hi]` rad/s, damping ratio `zeta`, shared by `n_responses`
    /// responses whose residues follow a fixed deterministic pattern.
    pub fn resonant(pairs: usize, lo: f64, hi: f64, zeta: f64, n_responses: usize) -> Self {
        let mut poles = Vec::with_capacity(2 * pairs);
        for i in 0..pairs {
            let t = if pairs > 1 { i as f64 / (pairs - 1) as f64 } else { 0.5 };
            let w = (lo.ln() + t * (hi.ln() - lo.ln())).exp();
            let p = Complex64::new(-zeta * w, w * (1.0 - zeta * zeta).sqrt());
            poles.push(p);
            poles.push(p.conj());
        }
        let d = poles.len();
        let residues = DMatrix::from_fn(n_responses, d, |k, i| {
            let pair = i / 2;
            let phase = 0.7 * (pair as f64 + 1.0) + 1.3 * k as f64;
            let mag = poles[i].norm() * zeta * (1.0 + 0.5 * ((pair + 2 * k) as f64).sin());
            let r = Complex64::from_polar(mag, phase);
            if i % 2 == 0 {
                r
            } else {
                r.conj()
            }
        });
        let direct = (0..n_responses).map(|k| 0.1 * (k as f64 + 1.0)).collect();
        Self { poles, residues, direct }
    }
}
