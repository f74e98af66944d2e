//! Data for the browser demo. Every view is a plain serializable struct built
//! by an ordinary Rust function; the wasm exports at the bottom only turn
//! them into JSON strings for the page script.

use std::path::Path;

use ora::netdata::{parse_csv, parse_touchstone, ports_from_extension, select_responses, Selection};
use ora::synth::RationalSystem;
use ora::{run_ora, BasisKind, Complex64, FrequencyGrid, ResponseSet, SkConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Everything the page needs to draw one fit.
#[derive(Debug, Clone, Serialize)]
pub struct FitView {
    /// Frequency axis values and their unit (`"rad/s"` or `"Hz"`).
    pub x: Vec<f64>,
    pub x_unit: String,
    pub labels: Vec<String>,
    /// `[re, im]` per point, one vector per response.
    pub data: Vec<Vec<[f64; 2]>>,
    pub fit: Vec<Vec<[f64; 2]>>,
    pub poles: Vec<[f64; 2]>,
    /// Poles of the generating system, when known.
    pub true_poles: Vec<[f64; 2]>,
    pub iteration_rms: Vec<f64>,
    pub best_iteration: usize,
    pub rms: f64,
    pub relative_rms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub order: usize,
    pub ora: Option<f64>,
    pub polybasis: Option<f64>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Random stable system with `order` poles (complex pairs plus one real pole
/// when `order` is odd) resonating in 0.3–8 rad/s, driving `n_responses`
/// outputs.
pub fn random_system(order: usize, n_responses: usize, seed: u64) -> RationalSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut poles = Vec::with_capacity(order);
    for _ in 0..order / 2 {
        let w: f64 = rng.gen_range(0.3f64.ln()..8f64.ln()).exp();
        let zeta = rng.gen_range(0.02..0.15);
        let p = Complex64::new(-zeta * w, w * (1.0 - zeta * zeta).sqrt());
        poles.push(p);
        poles.push(p.conj());
    }
    if order % 2 == 1 {
        poles.push(Complex64::new(-rng.gen_range(0.3..8.0), 0.0));
    }
    let residues = nalgebra::DMatrix::from_fn(n_responses, order, |_, _| Complex64::new(0.0, 0.0));
    let mut sys =
        RationalSystem { poles, residues, direct: (0..n_responses).map(|_| rng.gen_range(-0.3..0.3)).collect() };
    for k in 0..n_responses {
        let mut i = 0;
        while i < order {
            let p = sys.poles[i];
            let mag = p.norm() * rng.gen_range(0.02..0.2);
            if p.im != 0.0 {
                let r = Complex64::from_polar(mag, rng.gen_range(-3.1..3.1));
                sys.residues[(k, i)] = r;
                sys.residues[(k, i + 1)] = r.conj();
                i += 2;
            } else {
                sys.residues[(k, i)] = Complex64::new(mag, 0.0);
                i += 1;
            }
        }
    }
    sys
}

fn add_noise(data: &mut ResponseSet, level: f64, seed: u64) {
    if level <= 0.0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let amp = level * data.norm() / ((data.m() * data.n_responses()) as f64).sqrt();
    for v in data.values.iter_mut() {
        *v += Complex64::from_polar(
            amp * rng.gen_range(0.0..1.0),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
    }
}

fn view(
    data: &ResponseSet,
    order: usize,
    iterations: usize,
    x: Vec<f64>,
    x_unit: &str,
    true_poles: &[Complex64],
) -> Result<FitView, String> {
    let cfg = SkConfig::new(order).iterations(iterations);
    let res = run_ora(data, &cfg).map_err(|e| e.to_string())?;
    let fitted = res.best_model.evaluate_many(&data.grid.points()).map_err(|e| e.to_string())?;
    let columns = |m: &nalgebra::DMatrix<Complex64>| {
        (0..m.ncols()).map(|k| m.column(k).iter().copied().map(pair).collect()).collect()
    };
    let scale = data.norm() / ((data.m() * data.n_responses()) as f64).sqrt();
    Ok(FitView {
        x,
        x_unit: x_unit.into(),
        labels: data.labels.clone(),
        data: columns(&data.values),
        fit: columns(&fitted),
        poles: res.best_poles().poles().iter().copied().map(pair).collect(),
        true_poles: true_poles.iter().copied().map(pair).collect(),
        iteration_rms: res.per_iteration.iter().map(|r| r.rms).collect(),
        best_iteration: res.best_iteration,
        rms: res.rms,
        relative_rms: if scale > 0.0 { res.rms / scale } else { res.rms },
    })
}

/// Fit `fit_order` poles to two responses of a random order-`true_order`
/// system sampled at 300 points on 0.1–10 rad/s with relative `noise`.
pub fn synthetic_fit(true_order: usize, fit_order: usize, noise: f64, seed: u64) -> Result<FitView, String> {
    let sys = random_system(true_order, 2, seed);
    let grid = FrequencyGrid::logspace(0.1, 10.0, 300).map_err(|e| e.to_string())?;
    let mut data = sys.sample(&grid).map_err(|e| e.to_string())?;
    add_noise(&mut data, noise, seed);
    view(&data, fit_order, 20, grid.omega().to_vec(), "rad/s", &sys.poles)
}

/// Fit uploaded data: a CSV table or a Touchstone file (upper triangle).
pub fn fit_text(text: &str, file_name: &str, order: usize, iterations: usize) -> Result<FitView, String> {
    let data = if file_name.to_ascii_lowercase().ends_with(".csv") {
        parse_csv(text).map_err(|e| e.to_string())?
    } else {
        let ports = ports_from_extension(Path::new(file_name)).ok_or("expected a .csv or .sNp file")?;
        let net = parse_touchstone(text, ports).map_err(|e| e.to_string())?;
        select_responses(&net, &Selection::UpperTriangular).map_err(|e| e.to_string())?
    };
    let x = data.grid.freqs_hz();
    view(&data, order, iterations, x, "Hz", &[])
}

/// Best-of-20 rms of both SK variants at order `d` on the random
/// order-`true_order` system used by [`conditioning_sweep`].
pub fn conditioning_point(true_order: usize, seed: u64, d: usize) -> SweepPoint {
    let sys = random_system(true_order, 1, seed);
    let grid = FrequencyGrid::logspace(0.1, 10.0, 500).expect("static grid");
    let data = sys.sample(&grid).expect("finite synthetic data");
    let rms = |kind| run_ora(&data, &SkConfig::new(d).basis_kind(kind)).ok().map(|r| r.rms);
    SweepPoint { order: d, ora: rms(BasisKind::OrthogonalRational), polybasis: rms(BasisKind::OrthogonalPolynomial) }
}

pub fn conditioning_sweep(true_order: usize, seed: u64, orders: impl IntoIterator<Item = usize>) -> Vec<SweepPoint> {
    orders.into_iter().map(|d| conditioning_point(true_order, seed, d)).collect()
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    fn json<T: serde::Serialize>(v: &T) -> String {
        serde_json::to_string(v).expect("views serialize")
    }

    #[wasm_bindgen(js_name = synthetic_fit)]
    pub fn synthetic_fit(true_order: usize, fit_order: usize, noise: f64, seed: u32) -> Result<String, JsError> {
        super::synthetic_fit(true_order, fit_order, noise, seed as u64).map(|v| json(&v)).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = fit_text)]
    pub fn fit_text(text: &str, file_name: &str, order: usize, iterations: usize) -> Result<String, JsError> {
        super::fit_text(text, file_name, order, iterations).map(|v| json(&v)).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = conditioning_point)]
    pub fn conditioning_point(true_order: usize, seed: u32, d: usize) -> String {
        json(&super::conditioning_point(true_order, seed as u64, d))
    }
}
