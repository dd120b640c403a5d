use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use relaxkit::models::{
    asymptotic, permittivity, permittivity_via_spectral, relaxation, response, spectral, theta, ModelKind, ModelSpec,
    PermittivityScale, Quantity, Regime,
};
use relaxkit::Error;

#[test]
fn parameter_validation() {
    assert!(matches!(ModelSpec::hn(1.2, 0.5, 1.0), Err(Error::Domain(_))));
    assert!(matches!(ModelSpec::hn(0.5, 0.5, -1.0), Err(Error::Domain(_))));
    // β > 1/α needs the override
    assert!(ModelSpec::hn(0.5, 3.0, 1.0).is_err());
    assert!(ModelSpec::with_override(ModelKind::HN, 0.5, 3.0, 1.0).is_ok());
    assert!(ModelSpec::jws(0.5, 1.5, 1.0).unwrap().strict().is_err());
}

#[test]
fn nested_laws_canonicalize() {
    assert_eq!(ModelSpec::hn(1.0, 1.0, 1.0).unwrap().canonical().kind, ModelKind::Debye);
    assert_eq!(ModelSpec::hn(0.6, 1.0, 1.0).unwrap().canonical().kind, ModelKind::CC);
    assert_eq!(ModelSpec::hn(1.0, 0.6, 1.0).unwrap().canonical().kind, ModelKind::CD);
    assert_eq!(ModelSpec::jws(1.0, 0.6, 1.0).unwrap().canonical().kind, ModelKind::MCD);
    assert_eq!(ModelSpec::jws(0.6, 1.0, 1.0).unwrap().canonical().kind, ModelKind::CC);
}

#[test]
fn kww_has_no_spectral_closed_form() {
    let k = ModelSpec::kww(0.5, 1.0).unwrap();
    assert!(spectral(&k, 1.0).is_err());
    assert_relative_eq!(relaxation(&k, 4.0).unwrap(), (-2f64).exp(), max_relative = 1e-15);
}

#[test]
fn permittivity_scaling() {
    let s = ModelSpec::cc(0.5, 2.0).unwrap();
    let sc = PermittivityScale { eps_static: 10.0, eps_inf: 2.0 };
    let (re, im) = permittivity(&s, &sc, 0.5).unwrap();
    let phi = 1.0 / (1.0 + Complex64::new(0.0, 1.0).sqrt());
    assert_relative_eq!(re, 2.0 + 8.0 * phi.re, max_relative = 1e-13);
    assert_relative_eq!(im, 8.0 * -phi.im, max_relative = 1e-13);
    let (re2, im2) = permittivity_via_spectral(&s, &sc, 0.5).unwrap();
    assert_relative_eq!(re, re2, max_relative = 1e-13);
    assert_relative_eq!(im, im2, max_relative = 1e-13);
}

#[test]
fn asymptote_scaling_with_tau() {
    let s = ModelSpec::hn(0.5, 0.5, 3.0).unwrap();
    let lead = asymptotic(&s, Quantity::Response, Regime::Short, 3e-6).unwrap().value;
    let exact = response(&s, 3e-6).unwrap().regular;
    assert!((exact / lead - 1.0).abs() < 0.02);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_in_range(a in 0.05f64..1.0, y in 1e-6f64..1e6) {
        let th = theta(a, y);
        prop_assert!(th > 0.0 && th < std::f64::consts::PI * a);
    }

    #[test]
    fn relaxation_decreases(a in 0.2f64..1.0, b in 0.2f64..1.0, t in 1e-3f64..1e2) {
        for spec in [ModelSpec::hn(a, b, 1.0).unwrap(), ModelSpec::jws(a, b, 1.0).unwrap()] {
            let n1 = relaxation(&spec, t).unwrap();
            let n2 = relaxation(&spec, t * 1.1).unwrap();
            prop_assert!(n1 > 0.0 && n1 <= 1.0 && n2 < n1, "{:?} {n1} {n2}", spec.kind);
        }
    }

    #[test]
    fn loss_is_positive(a in 0.1f64..1.0, b in 0.1f64..1.0, w in 1e-4f64..1e4) {
        for spec in [ModelSpec::hn(a, b, 1.0).unwrap(), ModelSpec::jws(a, b, 1.0).unwrap()] {
            let s = spectral(&spec, w).unwrap();
            prop_assert!(s.im < 0.0 && s.re > 0.0 && s.re < 1.0);
        }
    }

    #[test]
    fn time_scale_invariance(a in 0.3f64..1.0, b in 0.2f64..1.0, tau in 0.01f64..100.0, x in 0.01f64..10.0) {
        let s1 = ModelSpec::hn(a, b, 1.0).unwrap();
        let st = ModelSpec::hn(a, b, tau).unwrap();
        let n1 = relaxation(&s1, x).unwrap();
        let nt = relaxation(&st, x * tau).unwrap();
        prop_assert!((n1 - nt).abs() < 1e-12);
        let p1 = response(&s1, x).unwrap().regular;
        let pt = response(&st, x * tau).unwrap().regular * tau;
        prop_assert!(((p1 - pt) / p1).abs() < 1e-10);
    }
}
