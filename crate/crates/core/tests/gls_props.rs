mod common;

use common::{mean, median, sd};
use maxspec::gls::{asymptotic_sigma1, covariance_matrix, fit_with_covariance, gls_weights};
use maxspec::psi::psi_table_mc;
use maxspec::{
    builtin_psi, compute_spectrum, cw_constant, gls_fit, tail_estimate, DistributionSpec, MaxSpectrum, PsiTable,
    SeededStream,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fit_ignores_covariance_scale(
        m in 4usize..18,
        slope in 0.1f64..2.0,
        noise in prop::collection::vec(-0.05f64..0.05, 17),
        lo in 0usize..16,
    ) {
        let ys: Vec<f64> = (1..=m).map(|j| slope * j as f64 + 0.3 + noise[j - 1]).collect();
        let spec = MaxSpectrum::from_values(1 << m, &ys).unwrap();
        let j1 = 1 + lo % (m - 1);
        let psi = builtin_psi();
        let sigma = covariance_matrix(j1, m, spec.n, &psi).unwrap();
        let base = fit_with_covariance(&spec, j1, m, &sigma, &psi).unwrap();
        for phi in [1e-6, 1.0, 1e6] {
            let f = fit_with_covariance(&spec, j1, m, &sigma.scaled(phi), &psi).unwrap();
            prop_assert!((f.h - base.h).abs() <= 1e-10 * base.h.abs(), "phi={} {} {}", phi, f.h, base.h);
            prop_assert!((f.c - base.c).abs() <= 1e-10 * base.c.abs().max(1.0), "phi={} {} {}", phi, f.c, base.c);
        }
    }

    #[test]
    fn alpha_is_scale_free_and_sigma0_scales(seed in any::<u64>(), c in 1e-3f64..1e3) {
        let data = DistributionSpec::Frechet { alpha: 1.5, sigma0: 1.0 }.sample(1 << 11, SeededStream::new(seed, 0)).unwrap();
        let scaled: Vec<f64> = data.iter().map(|x| x * c).collect();
        let psi = builtin_psi();
        let fit_a = gls_fit(&compute_spectrum(&data).unwrap(), 1, 11, &psi).unwrap();
        let fit_b = gls_fit(&compute_spectrum(&scaled).unwrap(), 1, 11, &psi).unwrap();
        let (a, b) = (tail_estimate(&fit_a).unwrap(), tail_estimate(&fit_b).unwrap());
        prop_assert!((a.alpha - b.alpha).abs() <= 1e-10 * a.alpha);
        prop_assert!((b.sigma0 / (c * a.sigma0) - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn weight_constraints_hold_for_all_ranges() {
    let psi = builtin_psi();
    let n = 1usize << 20;
    for j2 in 2..=20 {
        for j1 in 1..j2 {
            for sigma in [covariance_matrix(j1, j2, n, &psi).unwrap(), asymptotic_sigma1(j1, j2, &psi).unwrap()] {
                let (w, v) = gls_weights(j1, &sigma).unwrap();
                let js = (j1..=j2).map(|j| j as f64);
                let sw: f64 = w.iter().sum();
                let sjw: f64 = w.iter().zip(js.clone()).map(|(w, j)| w * j).sum();
                let sv: f64 = v.iter().sum();
                let sjv: f64 = v.iter().zip(js).map(|(v, j)| v * j).sum();
                assert!(sw.abs() < 1e-10 && (sjw - 1.0).abs() < 1e-10, "({j1},{j2}): {sw} {sjw}");
                assert!((sv - 1.0).abs() < 1e-10 && sjv.abs() < 1e-10, "({j1},{j2}): {sv} {sjv}");
            }
        }
    }
}

#[test]
fn exact_linear_spectrum_is_recovered() {
    let ys: Vec<f64> = (1..=12).map(|j| 0.5 * j as f64 + 1.0).collect();
    let spec = MaxSpectrum::from_values(1 << 12, &ys).unwrap();
    for j1 in [1, 4, 10] {
        let f = gls_fit(&spec, j1, 12, &builtin_psi()).unwrap();
        assert!((f.h - 0.5).abs() < 1e-12 && (f.c - 1.0).abs() < 1e-11, "{f:?}");
    }
}

#[test]
fn scaled_finite_matrix_matches_the_limit() {
    let psi = builtin_psi();
    for (j1, j2) in [(1, 6), (3, 10), (5, 12)] {
        let n = 1usize << (j2 + 8);
        let finite = covariance_matrix(j1, j2, n, &psi).unwrap();
        let limit = asymptotic_sigma1(j1, j2, &psi).unwrap();
        let n_top = (n >> j2) as f64;
        let tol = 2f64.powi(-((j2 - j1) as i32));
        for a in 0..limit.dim() {
            for b in 0..limit.dim() {
                let (x, y) = (n_top * finite.get(a, b), limit.get(a, b));
                assert!((x - y).abs() <= tol * y.abs(), "({j1},{j2}) [{a},{b}] {x} vs {y}");
            }
        }
    }
}

#[test]
fn two_scale_cw_matches_hand_value() {
    // w = (-1, 1) is forced; c_w = ψ(0)/2 + ψ(0) - 2ψ(1)
    let psi = builtin_psi();
    let want = 1.5 * psi.lookup(0) - 2.0 * psi.lookup(1);
    assert!((cw_constant(1, 2, &psi).unwrap() - want).abs() < 1e-12);
}

#[test]
fn scaled_cw_decreases_and_settles() {
    let psi = builtin_psi();
    let vals: Vec<f64> = (2..=20).map(|j2| (2f64.powi(j2 as i32) * cw_constant(1, j2, &psi).unwrap()).sqrt()).collect();
    for pair in vals.windows(2) {
        assert!(pair[1] < pair[0] + 1e-9, "{vals:?}");
    }
    assert!((vals[vals.len() - 1] - vals[vals.len() - 2]).abs() < 1e-3, "{vals:?}");
}

#[test]
fn slope_is_unbiased_on_frechet_data() {
    let psi = builtin_psi();
    let n = 1 << 12;
    let hs: Vec<f64> = (0..2000)
        .map(|r| {
            let data =
                DistributionSpec::Frechet { alpha: 1.0, sigma0: 1.0 }.sample(n, SeededStream::new(77, r)).unwrap();
            gls_fit(&compute_spectrum(&data).unwrap(), 1, 12, &psi).unwrap().h
        })
        .collect();
    let se = sd(&hs) / (hs.len() as f64).sqrt();
    assert!((mean(&hs) - 1.0).abs() < 4.0 * se, "mean {} se {se}", mean(&hs));
}

#[test]
fn scale_coefficient_estimate_is_centred() {
    let psi = builtin_psi();
    let s0: Vec<f64> = (0..200)
        .map(|r| {
            let data = DistributionSpec::Frechet { alpha: 2.0, sigma0: 5.0 }
                .sample(1 << 16, SeededStream::new(78, r))
                .unwrap();
            tail_estimate(&gls_fit(&compute_spectrum(&data).unwrap(), 1, 16, &psi).unwrap()).unwrap().sigma0
        })
        .collect();
    let m = median(&s0);
    assert!((4.5..=5.5).contains(&m), "median sigma0 {m}");
}

#[test]
fn shipped_reference_csv_is_the_builtin_table() {
    let text = include_str!("../data/psi_builtin.csv");
    let t = PsiTable::from_csv(text).unwrap();
    assert_eq!(t, builtin_psi());
    assert_eq!(PsiTable::from_csv(&builtin_psi().to_csv()).unwrap(), builtin_psi());
}

#[test]
fn monte_carlo_table_round_trips_through_csv() {
    let t = psi_table_mc(3, 20_000, 2, SeededStream::new(4, 0)).unwrap();
    assert_eq!(t.max_lag(), 3);
    let back = PsiTable::from_csv(&t.to_csv()).unwrap();
    assert_eq!(back, t);
}
