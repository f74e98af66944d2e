mod common;

use common::*;
use nalgebra::DMatrix;
use ora::{
    assemble_state_space, fit_numerator, Complex64, DenominatorSamples, FrequencyGrid, ResponseSet, StackedVector,
};
use proptest::prelude::*;
use rand::Rng;

/// Normal-equations LS on the explicit stacked Vandermonde [1, s, …, s^n].
fn vandermonde_fit(grid: &FrequencyGrid, f: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = grid.len();
    let a = DMatrix::from_fn(2 * m, n + 1, |i, k| {
        let z = grid.s(i % m).powu(k as u32);
        if i < m {
            z.re
        } else {
            z.im
        }
    });
    let b = DMatrix::from_fn(2 * m, 1, |i, _| if i < m { f[i].re } else { f[i - m].im });
    let x = (a.transpose() * &a).lu().solve(&(a.transpose() * b)).unwrap();
    grid.points().iter().map(|s| (0..=n).fold(c(0.0, 0.0), |acc, k| acc + s.powu(k as u32) * x[k])).collect()
}

#[test]
fn unit_denominator_matches_normal_equations() {
    let mut r = rng(3);
    for _ in 0..30 {
        let m = r.gen_range(10..=50);
        let n = r.gen_range(0..=8);
        // Frequencies in [0, 1] keep the explicit Vandermonde well enough conditioned.
        let grid = FrequencyGrid::linspace(0.0, 1.0, m).unwrap();
        let vals: Vec<Complex64> = (0..m).map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let data = ResponseSet::new(grid.clone(), DMatrix::from_column_slice(m, 1, &vals), vec!["x".into()]).unwrap();
        let fit = fit_numerator(&DenominatorSamples::unit(m), &data, n).unwrap();
        let oracle = vandermonde_fit(&grid, &vals, n);
        let scale = oracle.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for k in 0..m {
            assert!((fit.fitted[(k, 0)] - oracle[k]).norm() <= 1e-8 * scale, "m {m} n {n}");
        }
    }
}

#[test]
fn residual_is_orthogonal_to_basis() {
    let mut r = rng(8);
    let grid = FrequencyGrid::logspace(0.1, 10.0, 80).unwrap();
    let poles = random_stable_poles(&mut r, 6, 0.2, 8.0);
    let den: Vec<Complex64> =
        grid.points().iter().map(|s| 1.0 / poles.iter().fold(c(1.0, 0.0), |a, p| a * (s - p))).collect();
    let data =
        ResponseSet::from_fn(grid.clone(), 3, |s, k| (s + k as f64).exp() * 0.01 + c(0.0, 1.0) / (s + 1.0)).unwrap();
    let fit = fit_numerator(&DenominatorSamples::from_complex(&den).unwrap(), &data, 5).unwrap();
    let m = grid.len();
    for k in 0..3 {
        let res: Vec<Complex64> = (0..m).map(|i| fit.fitted[(i, k)] - data.values[(i, k)]).collect();
        let stacked = StackedVector::from_complex(&res).stacked();
        let proj = fit.basis.q.transpose() * stacked;
        assert!(proj.norm() <= 1e-9 * data.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fitted_model_is_conjugate_symmetric(seed in any::<u64>(), d in 1usize..7) {
        let mut r = rng(seed);
        let grid = FrequencyGrid::logspace(0.1, 10.0, 50).unwrap();
        let sys = random_system(&mut r, d, 2, 0.3, 8.0);
        let data = sys.sample(&grid).unwrap();
        let den: Vec<Complex64> = grid.points().iter().map(|s| 1.0 / sys.poles.iter().fold(c(1.0, 0.0), |a, p| a * ((s - p) / grid.scale()))).collect();
        let fit = fit_numerator(&DenominatorSamples::from_complex(&den).unwrap(), &data, d).unwrap();
        let model = assemble_state_space(&fit, d).unwrap();
        for w in [0.05, 0.7, 3.0, 20.0] {
            let plus = model.evaluate(c(0.0, w)).unwrap();
            let minus = model.evaluate(c(0.0, -w)).unwrap();
            for (a, b) in plus.iter().zip(&minus) {
                prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1e-300));
            }
        }
    }
}
