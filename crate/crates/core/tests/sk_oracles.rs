mod common;

use common::*;
use nalgebra::DMatrix;
use ora::sk::{denominator_blocks, model_poles, update_denominator_with};
use ora::synth::RationalSystem;
use ora::{
    denominator_samples, run_ora, update_denominator, update_denominator_polybasis, BasisKind, BasisOptions, Complex64,
    DenominatorSamples, FrequencyGrid, InitialDenominator, PoleSet, ResponseSet, SkConfig,
};
use proptest::prelude::*;
use rand::Rng;

fn exact_den(poles: &[Complex64], grid: &FrequencyGrid) -> DenominatorSamples {
    denominator_samples(&PoleSet::new(poles.to_vec()).unwrap(), grid).unwrap()
}

#[test]
fn exact_denominator_is_a_fixed_point() {
    let mut r = rng(21);
    for _ in 0..10 {
        let d = r.gen_range(2..=8);
        let grid = FrequencyGrid::logspace(0.1, 10.0, 120).unwrap();
        let sys = random_system(&mut r, d, 2, 0.3, 8.0);
        let data = sys.sample(&grid).unwrap();
        let up = update_denominator(&exact_den(&sys.poles, &grid), &data, d, d).unwrap();
        let err = pole_error(&sys.poles, up.poles.poles());
        assert!(err <= 1e-8, "d = {d}: {err:e}");
    }
}

#[test]
fn stacked_r22_matches_full_system() {
    let mut r = rng(4);
    for _ in 0..10 {
        let grid = FrequencyGrid::logspace(0.1, 10.0, 10).unwrap();
        let vals = DMatrix::from_fn(10, 2, |_, _| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        let data = ResponseSet::unlabelled(grid.clone(), vals).unwrap();
        let den = DenominatorSamples::unit(10);
        let up = update_denominator(&den, &data, 2, 2).unwrap();
        let (basis, _) = denominator_blocks(&den, &data, 2, 2, &BasisOptions::default()).unwrap();
        let oracle = full_system_c(&basis.q, &data.values, 2, 2);
        assert!(signed_distance(&up.c, &oracle) <= 1e-10);
    }
}

#[test]
fn block_gram_matches_full_qr() {
    let mut r = rng(9);
    let grid = FrequencyGrid::logspace(0.1, 10.0, 30).unwrap();
    let sys = random_system(&mut r, 4, 3, 0.3, 8.0);
    let data = sys.sample(&grid).unwrap();
    let poles = random_stable_poles(&mut r, 4, 0.3, 8.0);
    let den = exact_den(&poles, &grid);
    let (n, d) = (3, 4);
    let (basis, blocks) = denominator_blocks(&den, &data, n, d, &BasisOptions::default()).unwrap();
    for (k, r22) in blocks.iter().enumerate() {
        let f: Vec<Complex64> = data.values.column(k).iter().copied().collect();
        let b = -scale_rows(&basis.q, &f);
        let oracle = full_qr_gram(&basis.leading_columns(n), &b);
        let ours = r22.transpose() * r22;
        assert!((&ours - &oracle).amax() <= 1e-10 * oracle.amax());
    }
}

#[test]
fn common_scaling_leaves_constraint_unchanged() {
    let mut r = rng(2);
    let grid = FrequencyGrid::logspace(0.1, 10.0, 60).unwrap();
    let sys = random_system(&mut r, 6, 2, 0.3, 8.0);
    let mut data = sys.sample(&grid).unwrap();
    for v in data.values.iter_mut() {
        *v += c(r.gen_range(-0.01..0.01), r.gen_range(-0.01..0.01));
    }
    let den = DenominatorSamples::unit(60);
    let a = update_denominator(&den, &data, 6, 6).unwrap();
    let mut scaled = data.clone();
    scaled.values *= c(-37.5, 0.0);
    let b = update_denominator(&den, &scaled, 6, 6).unwrap();
    assert!(signed_distance(&a.c, &b.c) <= 1e-10);
    assert!(pole_error(a.poles.poles(), b.poles.poles()) <= 1e-10);
}

#[test]
fn second_order_example() {
    let grid = FrequencyGrid::logspace(0.1, 10.0, 100).unwrap();
    let data = ResponseSet::from_fn(grid, 1, |s, _| (s + 2.0) / (s * s + s * 2.0 + 5.0)).unwrap();
    let res = run_ora(&data, &SkConfig::new(2)).unwrap();
    assert!(res.rms <= 1e-10, "{:e}", res.rms);
    assert!(pole_error(&[c(-1.0, 2.0), c(-1.0, -2.0)], res.best_poles().poles()) <= 1e-8);
    let eig = model_poles(&res.best_model).unwrap();
    assert!(pole_error(res.best_poles().poles(), &eig) <= 1e-10);
}

#[test]
fn random_order_six_exact_recovery() {
    let mut r = rng(77);
    let grid = FrequencyGrid::logspace(0.1, 10.0, 200).unwrap();
    let sys = random_system(&mut r, 6, 1, 0.3, 8.0);
    let data = sys.sample(&grid).unwrap();
    let res = run_ora(&data, &SkConfig::new(6)).unwrap();
    assert!(res.rms / (data.norm() / (200f64).sqrt()) <= 1e-8);
    let poly = run_ora(&data, &SkConfig::new(6).basis_kind(BasisKind::OrthogonalPolynomial)).unwrap();
    // At modest order the polynomial basis is still accurate.
    assert!(poly.rms / (data.norm() / (200f64).sqrt()) <= 1e-8, "ora {:e} poly {:e}", res.rms, poly.rms);
}

#[test]
fn four_responses_share_one_pole_pair() {
    let grid = FrequencyGrid::logspace(0.1, 10.0, 100).unwrap();
    let data = ResponseSet::from_fn(grid, 4, |s, k| {
        let num = [s + 2.0, s * 3.0 - 1.0, c(4.0, 0.0) + s * 0.0, s * s];
        num[k] / (s * s + s * 2.0 + 5.0)
    })
    .unwrap();
    let res = run_ora(&data, &SkConfig::new(2)).unwrap();
    assert_eq!(res.best_poles().len(), 2);
    assert!(pole_error(&[c(-1.0, 2.0), c(-1.0, -2.0)], res.best_poles().poles()) <= 1e-8);
    let fitted = res.best_model.evaluate_many(&data.grid.points()).unwrap();
    for k in 0..4 {
        let rms = (0..100).map(|i| (fitted[(i, k)] - data.values[(i, k)]).norm_sqr()).sum::<f64>().sqrt() / 10.0;
        assert!(rms <= 1e-9, "response {k}: {rms:e}");
    }
}

#[test]
fn strictly_proper_fit() {
    let grid = FrequencyGrid::logspace(0.1, 10.0, 100).unwrap();
    let data = ResponseSet::from_fn(grid, 1, |s, _| (s + 2.0) / (s * s + s * 2.0 + 5.0)).unwrap();
    let res = run_ora(&data, &SkConfig::with_degrees(1, 2)).unwrap();
    assert!(res.rms <= 1e-10);
    assert!(res.best_model.d[0].abs() == 0.0);
}

#[test]
fn initial_poles_are_honoured() {
    let grid = FrequencyGrid::logspace(0.1, 10.0, 100).unwrap();
    let data = ResponseSet::from_fn(grid, 1, |s, _| (s + 2.0) / (s * s + s * 2.0 + 5.0)).unwrap();
    let cfg = SkConfig::new(2).iterations(1).init(InitialDenominator::Poles(vec![c(-1.0, 2.0), c(-1.0, -2.0)]));
    let res = run_ora(&data, &cfg).unwrap();
    assert!(res.rms <= 1e-12);
    assert!(run_ora(&data, &SkConfig::new(2).init(InitialDenominator::Poles(vec![c(-1.0, 2.0)]))).is_err());
}

#[test]
fn convergence_option_stops_early() {
    let grid = FrequencyGrid::logspace(0.1, 10.0, 100).unwrap();
    let data = ResponseSet::from_fn(grid, 1, |s, _| (s + 2.0) / (s * s + s * 2.0 + 5.0)).unwrap();
    let mut cfg = SkConfig::new(2);
    cfg.convergence_tol = Some(1e-13);
    let res = run_ora(&data, &cfg).unwrap();
    assert!(res.per_iteration.len() < 20);
}

#[test]
fn polybasis_degrades_at_high_order() {
    let sys = RationalSystem::resonant(12, 0.2, 9.0, 0.03, 1);
    let grid = FrequencyGrid::logspace(0.1, 10.0, 300).unwrap();
    let data = sys.sample(&grid).unwrap();
    let ora = run_ora(&data, &SkConfig::new(24)).unwrap();
    let poly = run_ora(&data, &SkConfig::new(24).basis_kind(BasisKind::OrthogonalPolynomial)).unwrap();
    assert!(ora.rms < 1e-10, "{:e}", ora.rms);
    assert!(poly.rms > 1e3 * ora.rms, "ora {:e} poly {:e}", ora.rms, poly.rms);
}

#[test]
fn polybasis_update_is_stable_too() {
    let grid = FrequencyGrid::logspace(0.1, 10.0, 50).unwrap();
    let data = ResponseSet::from_fn(grid, 1, |s, _| 1.0 / (s - 1.0)).unwrap();
    let up = update_denominator_polybasis(&DenominatorSamples::unit(50), &data, 1, 1).unwrap();
    assert!(up.poles.is_stable());
    // The unstable pole at +1 is reflected to −1.
    assert!((up.poles.poles()[0] - c(-1.0, 0.0)).norm() < 1e-8);
}

#[test]
fn too_few_samples_rejected() {
    let grid = FrequencyGrid::new(vec![1.0, 2.0]).unwrap();
    let data = ResponseSet::from_fn(grid, 1, |s, _| s).unwrap();
    assert!(run_ora(&data, &SkConfig::new(2)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn noisy_fits_have_stable_conjugate_closed_poles(seed in any::<u64>(), d in 1usize..9, noise in 0.0f64..0.1) {
        let mut r = rng(seed);
        let grid = FrequencyGrid::logspace(0.1, 10.0, 80).unwrap();
        let sys = random_system(&mut r, d, 2, 0.3, 8.0);
        let mut data = sys.sample(&grid).unwrap();
        let amp = noise * data.norm() / (160f64).sqrt();
        for v in data.values.iter_mut() {
            *v += c(r.gen_range(-amp..=amp), r.gen_range(-amp..=amp));
        }
        let res = run_ora(&data, &SkConfig::new(d).iterations(8)).unwrap();
        for rec in &res.per_iteration {
            prop_assert!(rec.poles.is_stable());
            prop_assert!(ora::sk::is_conjugate_closed(rec.poles.poles(), 1e-10));
        }
        let _ = update_denominator_with(&DenominatorSamples::unit(80), &data, d, d, 1e-12, &BasisOptions::default());
    }
}
