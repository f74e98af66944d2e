//! Test-only generators and independent oracles.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use ora::synth::RationalSystem;
use ora::{Complex64, FrequencyGrid, StackedVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random conjugate-closed stable poles of order `d` with resonances in
/// `[lo, hi]` rad/s, pairwise separated by at least 10% relative.
pub fn random_stable_poles(rng: &mut impl Rng, d: usize, lo: f64, hi: f64) -> Vec<Complex64> {
    'retry: loop {
        let mut poles = Vec::with_capacity(d);
        for _ in 0..d / 2 {
            let w = (rng.gen_range(lo.ln()..hi.ln())).exp();
            let zeta = rng.gen_range(0.05..0.3);
            let p = c(-zeta * w, w * (1.0 - zeta * zeta).sqrt());
            poles.push(p);
            poles.push(p.conj());
        }
        if d % 2 == 1 {
            poles.push(c(-(rng.gen_range(lo.ln()..hi.ln())).exp(), 0.0));
        }
        for i in 0..poles.len() {
            for j in 0..i {
                if poles[j] != poles[i].conj() && (poles[i] - poles[j]).norm() < 0.1 * poles[i].norm() {
                    continue 'retry;
                }
            }
        }
        return poles;
    }
}

/// Random real stable system: poles from [`random_stable_poles`], residues
/// with conjugate symmetry, random direct terms.
pub fn random_system(rng: &mut impl Rng, d: usize, n_responses: usize, lo: f64, hi: f64) -> RationalSystem {
    let poles = random_stable_poles(rng, d, lo, hi);
    let mut residues = DMatrix::zeros(n_responses, d);
    for k in 0..n_responses {
        let mut i = 0;
        while i < d {
            let p = poles[i];
            let mag = p.norm() * rng.gen_range(0.2..1.0);
            if p.im != 0.0 {
                let r = Complex64::from_polar(mag, rng.gen_range(-3.1..3.1));
                residues[(k, i)] = r;
                residues[(k, i + 1)] = r.conj();
                i += 2;
            } else {
                residues[(k, i)] = c(mag * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0);
                i += 1;
            }
        }
    }
    let direct = (0..n_responses).map(|_| rng.gen_range(-1.0..1.0)).collect();
    RationalSystem { poles, residues, direct }
}

/// Largest relative distance from a true pole to its nearest estimate
/// (one-to-one greedy matching). Infinite if counts differ.
pub fn pole_error(truth: &[Complex64], est: &[Complex64]) -> f64 {
    if truth.len() != est.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; est.len()];
    let mut worst: f64 = 0.0;
    for p in truth {
        let (j, dist) = est
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, (q - p).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("equal counts");
        used[j] = true;
        worst = worst.max(dist / p.norm().max(1e-300));
    }
    worst
}

/// Brute-force complex Arnoldi (classical Gram-Schmidt, applied twice) on the
/// conjugate-symmetric extension `{jω, −jω}` with start `[v; conj v]`.
/// Returns the first `m` rows of the basis and the Hessenberg matrix, scaled
/// so that the restriction has the stacked normalization (norm √m).
pub fn complex_arnoldi(init: &StackedVector, omega: &[f64], n: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let m = omega.len();
    let v0 = init.to_complex();
    let pts: Vec<Complex64> = omega.iter().map(|&w| c(0.0, w)).chain(omega.iter().map(|&w| c(0.0, -w))).collect();
    let start: Vec<Complex64> = v0.iter().copied().chain(v0.iter().map(|z| z.conj())).collect();
    let two_m = 2 * m;
    let target = (two_m as f64).sqrt();
    let mut v = DMatrix::<Complex64>::zeros(two_m, n + 1);
    let mut h = DMatrix::<Complex64>::zeros(n + 1, n);
    let nrm = start.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for i in 0..two_m {
        v[(i, 0)] = start[i] * (target / nrm);
    }
    for k in 1..=n {
        let mut w = DVector::from_fn(two_m, |i, _| pts[i] * v[(i, k - 1)]);
        for _pass in 0..2 {
            for i in 0..k {
                let proj = v.column(i).dotc(&w) / two_m as f64;
                h[(i, k - 1)] += proj;
                w -= v.column(i) * proj;
            }
        }
        let hk = w.norm() / target;
        h[(k, k - 1)] = c(hk, 0.0);
        v.set_column(k, &(w / c(hk, 0.0)));
    }
    (v.rows(0, m).into_owned(), h)
}

/// Roots of the monic-or-not monomial polynomial `Σ a_k s^k` from its companion matrix.
pub fn companion_roots(a: &[f64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let lead = a[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -a[i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Monomial coefficients of `∏ (s − r_i)` (ascending powers).
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut coef = vec![c(1.0, 0.0)];
    for r in roots {
        let mut next = vec![c(0.0, 0.0); coef.len() + 1];
        for (k, a) in coef.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        coef = next;
    }
    coef.iter().map(|z| z.re).collect()
}

/// Stacked real `[Re(F∘Q); Im(F∘Q)]` for a stacked basis `q` and data column `f`.
pub fn scale_rows(q: &DMatrix<f64>, f: &[Complex64]) -> DMatrix<f64> {
    let m = f.len();
    DMatrix::from_fn(2 * m, q.ncols(), |i, j| {
        let z = f[i % m] * c(q[(i % m, j)], q[(i % m + m, j)]);
        if i < m {
            z.re
        } else {
            z.im
        }
    })
}

/// Denominator coefficients from the explicitly formed multi-response system
/// `[blockdiag(Q_n) | −F_k Q_d]`: Householder QR of the whole matrix, then the
/// smallest right singular vector of its trailing `(d+1)×(d+1)` block, which
/// realizes `min ‖M·[g; c]‖` subject to `‖c‖ = 1`.
pub fn full_system_c(q: &DMatrix<f64>, data: &DMatrix<Complex64>, n: usize, d: usize) -> DVector<f64> {
    let m = data.nrows();
    let nr = data.ncols();
    let gcols = nr * (n + 1);
    let mut full = DMatrix::<f64>::zeros(2 * m * nr, gcols + d + 1);
    for k in 0..nr {
        let f: Vec<Complex64> = data.column(k).iter().copied().collect();
        let rows = 2 * m * k;
        full.view_mut((rows, k * (n + 1)), (2 * m, n + 1)).copy_from(&q.columns(0, n + 1));
        let b = -scale_rows(&q.columns(0, d + 1).into_owned(), &f);
        full.view_mut((rows, gcols), (2 * m, d + 1)).copy_from(&b);
    }
    let r = full.qr().r();
    let tail = r.view((gcols, gcols), (d + 1, d + 1)).into_owned();
    let svd = tail.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let imin = (0..d + 1).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).unwrap();
    v_t.row(imin).transpose()
}

/// `R22ᵀR22` of the trailing block of a full thin QR of `[Q_n | B]`.
pub fn full_qr_gram(qn: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, p, r) = (qn.nrows(), qn.ncols(), b.ncols());
    let mut full = DMatrix::<f64>::zeros(rows, p + r);
    full.columns_mut(0, p).copy_from(qn);
    full.columns_mut(p, r).copy_from(b);
    let rr = full.qr().r();
    let r22 = rr.view((p, p), (r, r)).into_owned();
    r22.transpose() * r22
}

/// Align the sign of `b` to `a` and return `max |a − b|`.
pub fn signed_distance(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let s = if a.dot(b) < 0.0 { -1.0 } else { 1.0 };
    (a - b * s).amax()
}

pub fn normalized_grid(m: usize) -> FrequencyGrid {
    FrequencyGrid::logspace(0.01, 1.0, m).unwrap()
}

/// Random network with `n` ports on `f` increasing frequencies in Hz.
#[allow(dead_code)]
pub fn random_network(r: &mut impl Rng, n: usize, f: usize) -> ora::netdata::NetworkData {
    let mut freq = r.gen_range(1e6..1e8);
    let mut freqs = Vec::with_capacity(f);
    for _ in 0..f {
        freqs.push(freq);
        freq += r.gen_range(1e6..1e9);
    }
    let mats = (0..f)
        .map(|_| DMatrix::from_fn(n, n, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))))
        .collect();
    ora::netdata::NetworkData::new(freqs, mats, 50.0).unwrap()
}

/// Largest entrywise discrepancy between two networks: relative for
/// frequencies, absolute for S-parameters.
#[allow(dead_code)]
pub fn network_distance(a: &ora::netdata::NetworkData, b: &ora::netdata::NetworkData) -> f64 {
    assert_eq!(a.freqs_hz.len(), b.freqs_hz.len());
    assert_eq!(a.n_ports, b.n_ports);
    let f = a.freqs_hz.iter().zip(&b.freqs_hz).map(|(x, y)| (x - y).abs() / x.abs()).fold(0.0, f64::max);
    let s = a
        .s_matrices
        .iter()
        .zip(&b.s_matrices)
        .map(|(x, y)| (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    f.max(s)
}
