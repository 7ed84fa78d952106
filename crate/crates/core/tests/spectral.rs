use logheat_core::spectral::{eigenvalue, path_metric, quadrature, Basis, Domain, SpectralField, TrajectorySample};
use logheat_core::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Composite Simpson on [0, L] with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, length: f64, n: usize) -> f64 {
    let h = length / n as f64;
    let mut s = f(0.0) + f(length);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn dirichlet_eigenvalues() {
    let unit = Domain::<f64>::unit();
    assert!((eigenvalue(1, &unit).unwrap() - PI * PI).abs() < 1e-12);
    assert!((eigenvalue(3, &unit).unwrap() - 9.0 * PI * PI).abs() < 1e-12);
    assert!((eigenvalue(3, &unit).unwrap() - 88.8264).abs() < 1e-4);
    let two = Domain::new(2.0, 64).unwrap();
    assert!((eigenvalue(2, &two).unwrap() - PI * PI).abs() < 1e-12);
    assert!(matches!(eigenvalue(0, &unit), Err(Error::InvalidIndex(0))));
    assert!(matches!(eigenvalue(-2, &unit), Err(Error::InvalidIndex(-2))));
}

#[test]
fn pointwise_evaluation() {
    let dom = Domain::<f64>::unit();
    let zero = SpectralField::zeros(3);
    assert!(zero.evaluate(&dom, &[0.0, 0.3, 1.0]).unwrap().iter().all(|&v| v == 0.0));
    let e1 = SpectralField::new(vec![1.0]).unwrap();
    assert!((e1.evaluate(&dom, &[0.5]).unwrap()[0] - 2f64.sqrt()).abs() < 1e-15);
    let e2 = SpectralField::new(vec![0.0, 1.0]).unwrap();
    assert!((e2.evaluate(&dom, &[0.25]).unwrap()[0] - 2f64.sqrt()).abs() < 1e-15);
    assert!(matches!(e1.evaluate(&dom, &[1.5]), Err(Error::OutsideDomain { .. })));
}

#[test]
fn projection_examples() {
    let h = SpectralField::new(vec![1.0, 0.5, 0.25]).unwrap();
    assert_eq!(h.project(2).coeffs(), &[1.0, 0.5]);
    assert_eq!(h.project(5), h);
    let basis = Basis::new(Domain::unit(), 4).unwrap();
    let p = SpectralField::from_fn(&basis, |x: f64| 2f64.sqrt() * (PI * x).sin()).unwrap();
    for (k, c) in p.coeffs().iter().enumerate() {
        let want = if k == 0 { 1.0 } else { 0.0 };
        assert!((c - want).abs() < 1e-12);
    }
}

#[test]
fn quadrature_examples() {
    assert!((quadrature(|_| 1.0f64, 1.0, 16).unwrap() - 1.0).abs() < 1e-14);
    assert!((quadrature(|x: f64| (PI * x).sin().powi(2), 1.0, 64).unwrap() - 0.5).abs() < 1e-14);
    let f = |x: f64| {
        let s = (PI * x).sin();
        if s.abs() < 1e-300 {
            0.0
        } else {
            2.0 * s * s * (2f64.sqrt() * s.abs()).ln()
        }
    };
    let coarse = quadrature(f, 1.0, 512).unwrap();
    let fine = quadrature(f, 1.0, 5120).unwrap();
    let oracle = simpson(f, 1.0, 400_000);
    assert!((coarse - fine).abs() < 1e-9);
    assert!((fine - oracle).abs() < 1e-9);
    assert!(matches!(quadrature(|_: f64| f64::NAN, 1.0, 16), Err(Error::Numeric { .. })));
    assert!(quadrature(|_| 1.0f64, 1.0, 8).is_err());
}

fn path(times: &[f64], states: Vec<Vec<f64>>) -> TrajectorySample<f64> {
    let states = states.into_iter().map(|c| SpectralField::new(c).unwrap()).collect();
    TrajectorySample::new(times.to_vec(), states, vec![false; times.len()]).unwrap()
}

#[test]
fn metric_matches_brute_force() {
    let dom = Domain::new(1.5, 64).unwrap();
    let times = [0.0, 0.1, 0.35, 0.6, 1.0];
    let u = path(&times, vec![vec![1.0, 0.5], vec![0.8, 0.2], vec![0.1, -0.3], vec![0.0, 0.4], vec![0.2, 0.2]]);
    let v = path(&times, vec![vec![0.9, 0.5], vec![0.7, 0.0], vec![0.3, -0.1], vec![0.1, 0.1], vec![0.2, 0.0]]);
    let lam = |k: f64| (k * PI / 1.5).powi(2);
    let mut sup: f64 = 0.0;
    let mut integral = 0.0;
    for k in 0..times.len() {
        let d: Vec<f64> = u.states()[k].coeffs().iter().zip(v.states()[k].coeffs()).map(|(a, b)| a - b).collect();
        sup = sup.max(d.iter().map(|x| x * x).sum());
        if k + 1 < times.len() {
            let w: f64 = d.iter().enumerate().map(|(j, x)| lam(j as f64 + 1.0) * x * x).sum();
            integral += (times[k + 1] - times[k]) * w;
        }
    }
    let rho = path_metric(&u, &v, 0.0, 1.0, &dom).unwrap();
    assert!((rho - (sup + integral).sqrt()).abs() < 1e-14);
    let c = 0.7;
    let constant = path(&times, vec![vec![c]; 5]);
    let zero = path(&times, vec![vec![0.0]; 5]);
    let rho = path_metric(&constant, &zero, 0.0, 1.0, &dom).unwrap();
    assert!((rho * rho - (c * c + lam(1.0) * c * c)).abs() < 1e-12);
}

fn field(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(coeffs in prop::collection::vec(-5.0f64..5.0, 1..33)) {
        let dom = Domain::new(1.0, 256).unwrap();
        let basis = Basis::new(dom, coeffs.len()).unwrap();
        let u = SpectralField::new(coeffs).unwrap();
        let values = basis.synthesize(u.coeffs());
        let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
        let q = basis.quadrature().integrate_values(&sq).unwrap();
        let norm = u.l2_norm_sq();
        prop_assert!((q - norm).abs() <= 1e-6 * norm.max(1e-12));
    }

    #[test]
    fn projection_is_idempotent_contraction(coeffs in prop::collection::vec(-5.0f64..5.0, 1..20), n in 1usize..25) {
        let u = SpectralField::new(coeffs).unwrap();
        let p = u.project(n);
        prop_assert_eq!(p.project(n), p.clone());
        prop_assert!(p.l2_norm() <= u.l2_norm());
    }

    #[test]
    fn eigenvalues_increase(k in 1i64..500, length in 0.1f64..10.0) {
        let dom = Domain::new(length, 16).unwrap();
        prop_assert!(eigenvalue(k + 1, &dom).unwrap() > eigenvalue(k, &dom).unwrap());
    }

    #[test]
    fn path_metric_axioms(a in prop::collection::vec(field(3), 4), b in prop::collection::vec(field(3), 4), c in prop::collection::vec(field(3), 4)) {
        let dom = Domain::<f64>::unit();
        let times = [0.0, 0.2, 0.5, 0.9];
        let (u, v, w) = (path(&times, a), path(&times, b), path(&times, c));
        let uv = path_metric(&u, &v, 0.0, 0.9, &dom).unwrap();
        let vu = path_metric(&v, &u, 0.0, 0.9, &dom).unwrap();
        let uw = path_metric(&u, &w, 0.0, 0.9, &dom).unwrap();
        let wv = path_metric(&w, &v, 0.0, 0.9, &dom).unwrap();
        prop_assert_eq!(path_metric(&u, &u, 0.0, 0.9, &dom).unwrap(), 0.0);
        prop_assert!((uv - vu).abs() < 1e-12);
        prop_assert!(uv <= uw + wv + 1e-9);
        prop_assert!(uv >= 0.0);
    }
}
