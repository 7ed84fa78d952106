use logheat_core::lemmas::certify::{
    log_diff_pairing_suite, log_gronwall_suite, log_plus_weighted_suite, log_sobolev_suite, nonlinear_gronwall_suite,
};
use logheat_core::lemmas::{
    log_diff_pairing_bound, log_gronwall_bound, log_plus_weighted_bound, log_sobolev_gap, log_sobolev_plus_gap,
    nonlinear_gronwall_bound, GronwallInputs, LogGronwallInputs,
};
use logheat_core::spectral::{Basis, Domain, SpectralField};
use proptest::prelude::*;
use std::f64::consts::{E, PI};

fn grid(n: usize, t: f64) -> Vec<f64> {
    (0..=n).map(|k| t * k as f64 / n as f64).collect()
}

fn basis() -> Basis<f64> {
    Basis::new(Domain::unit(), 16).unwrap()
}

/// `∫ 2 sin²(πx) log(√2 |sin πx|) dx = 1/2 − (log 2)/2`.
const SINE_ENTROPY: f64 = 0.153_426_409_720_027_35;

#[test]
fn log_sobolev_on_first_mode() {
    let u = SpectralField::mode(1, 1, 1.0);
    let gap = log_sobolev_gap(&u, 1.0, 1, &basis()).unwrap();
    assert!((gap - (PI * PI - SINE_ENTROPY)).abs() < 1e-9, "{}", gap - (PI * PI - SINE_ENTROPY));
    assert!(gap > 0.0);
    assert_eq!(log_sobolev_gap(&SpectralField::zeros(3), 0.3, 1, &basis()).unwrap(), 0.0);
    assert!(log_sobolev_gap(&u, 0.0, 1, &basis()).is_err());
    assert!(log_sobolev_plus_gap(&u, 0.5, 1, &basis()).unwrap() > 0.0);
}

#[test]
fn log_difference_on_first_mode() {
    let xi = SpectralField::mode(1, 1, 1.0);
    let zero = SpectralField::zeros(1);
    let p = log_diff_pairing_bound(&xi, &zero, 0.25, 0.5, 1, &basis()).unwrap();
    // (ξ log|ξ|, ξ) with ζ = 0 is the same integral as above
    assert!((p.lhs - SINE_ENTROPY).abs() < 1e-9);
    assert!(p.gap() > 0.0);
    let q = log_plus_weighted_bound(&xi, &zero, 0.25, 0.5, 1, &basis()).unwrap();
    assert!(q.gap() > 0.0);
}

#[test]
fn gronwall_closed_forms() {
    let times = grid(1024, 1.0);
    let n = times.len();
    let bihari = GronwallInputs { c: 1.0, alpha: 0.5, times: times.clone(), f: vec![0.0; n], g: vec![1.0; n] };
    assert!((nonlinear_gronwall_bound(&bihari).unwrap() - 2.25).abs() < 1e-12);
    let log = LogGronwallInputs { times: times.clone(), h: vec![E; n], f: vec![0.0; n], g: vec![1.0; n], a: vec![0.0; n] };
    let v = log_gronwall_bound(&log).unwrap();
    assert!((v - E.powf(E)).abs() < 1e-10);
    assert!((v - 15.154_262_241_479_264).abs() < 1e-10);

    let f: Vec<f64> = times.iter().map(|t| 1.0 + t).collect();
    let classical = GronwallInputs { c: 2.0, alpha: 0.3, times: times.clone(), f: f.clone(), g: vec![0.0; n] };
    assert!((nonlinear_gronwall_bound(&classical).unwrap() - 2.0 * 1.5f64.exp()).abs() < 1e-6);
    let h: Vec<f64> = times.iter().map(|t| 1.0 + t).collect();
    let no_g = LogGronwallInputs { times, h, f, g: vec![0.0; n], a: vec![0.0; n] };
    assert!((log_gronwall_bound(&no_g).unwrap() - 2.0 * 1.5f64.exp()).abs() < 1e-6);
}

#[test]
fn gronwall_parameter_errors() {
    let times = grid(16, 1.0);
    let n = times.len();
    let bad = GronwallInputs { c: 1.0, alpha: 1.0, times: times.clone(), f: vec![0.0; n], g: vec![0.0; n] };
    assert!(nonlinear_gronwall_bound(&bad).is_err());
    let low = LogGronwallInputs { times, h: vec![0.5; n], f: vec![0.0; n], g: vec![0.0; n], a: vec![0.0; n] };
    assert!(log_gronwall_bound(&low).is_err());
}

#[test]
fn alpha_continuity_at_zero() {
    let times = grid(512, 1.0);
    let f: Vec<f64> = times.iter().map(|t| (2.0 * t).sin().abs()).collect();
    let g: Vec<f64> = times.iter().map(|t| 1.0 + t * t).collect();
    let at = |alpha| {
        nonlinear_gronwall_bound(&GronwallInputs { c: 1.3, alpha, times: times.clone(), f: f.clone(), g: g.clone() })
            .unwrap()
    };
    assert!((at(1e-9) - at(0.0)).abs() < 1e-6);
}

#[test]
fn randomized_suites_small() {
    for rep in [
        log_sobolev_suite(60, 1).unwrap(),
        log_diff_pairing_suite(40, 2).unwrap(),
        log_plus_weighted_suite(40, 3).unwrap(),
        nonlinear_gronwall_suite(10, 4).unwrap(),
        log_gronwall_suite(10, 5).unwrap(),
    ] {
        assert!(rep.passed, "{rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gronwall_bounds_are_monotone(c in 0.0f64..3.0, dc in 0.0f64..1.0, alpha in 0.0f64..0.95, df in 0.0f64..1.0, dg in 0.0f64..1.0) {
        let times = grid(256, 1.0);
        let n = times.len();
        let f: Vec<f64> = times.iter().map(|t| 0.5 + t).collect();
        let g: Vec<f64> = times.iter().map(|t| 1.0 - 0.5 * t).collect();
        let bound = |c: f64, df: f64, dg: f64| nonlinear_gronwall_bound(&GronwallInputs {
            c, alpha, times: times.clone(),
            f: f.iter().map(|x| x + df).collect(),
            g: g.iter().map(|x| x + dg).collect(),
        }).unwrap();
        let base = bound(c, 0.0, 0.0);
        prop_assert!(bound(c + dc, 0.0, 0.0) >= base - 1e-12);
        prop_assert!(bound(c, df, 0.0) >= base - 1e-12);
        prop_assert!(bound(c, 0.0, dg) >= base - 1e-12);

        let h: Vec<f64> = times.iter().map(|t| 1.0 + c + t).collect();
        let log_bound = |dh: f64, df: f64, dg: f64| log_gronwall_bound(&LogGronwallInputs {
            times: times.clone(),
            h: h.iter().map(|x| x + dh).collect(),
            f: f.iter().map(|x| x + df).collect(),
            g: g.iter().map(|x| x + dg).collect(),
            a: vec![0.0; n],
        }).unwrap();
        let base = log_bound(0.0, 0.0, 0.0);
        prop_assert!(log_bound(dc, 0.0, 0.0) >= base - 1e-12);
        prop_assert!(log_bound(0.0, df, 0.0) >= base - 1e-12);
        prop_assert!(log_bound(0.0, 0.0, dg) >= base - 1e-12);
    }
}
