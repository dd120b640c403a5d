//! Frequency-domain side: spectral functions `φ̂`, complex permittivity and
//! the angle θ_α used by the densities.

use num_complex::Complex64;

use super::{ModelKind, ModelSpec, PermittivityScale};
use crate::dd::Dd;
use crate::error::{domain, Result};
use crate::specfun::gamma::{cos_pi, sin_pi};
use crate::util::{expm1_c, ln1p_c};

fn powc(w: Complex64, a: f64) -> Complex64 {
    if a == 1.0 {
        w
    } else {
        (a * w.ln()).exp()
    }
}

/// `φ̂` as a function of the dimensionless Laplace variable `w = zτ`.
fn image_dimless(spec: &ModelSpec, w: Complex64) -> Result<Complex64> {
    spec.validate()?;
    let c = spec.canonical();
    if c.kind == ModelKind::KWW {
        return domain("KWW has no closed-form spectral function");
    }
    if w == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (a, b) = (c.alpha, c.beta);
    Ok(match c.kind {
        ModelKind::Debye => 1.0 / (1.0 + w),
        ModelKind::CC => 1.0 / (1.0 + powc(w, a)),
        ModelKind::CD | ModelKind::HN => (-b * ln1p_c(powc(w, a))).exp(),
        // 1 - (1 + w^{-α})^{-β}
        ModelKind::MCD | ModelKind::JWS => -expm1_c(-b * ln1p_c(powc(w, -a))),
        ModelKind::KWW => unreachable!(),
    })
}

/// `φ̂(iω)` at dimensionless frequency `ωτ`.
pub fn spectral(spec: &ModelSpec, omega_tau: f64) -> Result<Complex64> {
    if !(omega_tau >= 0.0) {
        return domain(format!("omega*tau must be nonnegative, got {omega_tau}"));
    }
    image_dimless(spec, Complex64::new(0.0, omega_tau))
}

/// Laplace image `φ̂(z)` of the response function for complex `z`
/// (units of 1/τ taken from the spec).
pub fn laplace_image(spec: &ModelSpec, z: Complex64) -> Result<Complex64> {
    image_dimless(spec, z * spec.tau)
}

/// `φ̂(z)` for real `z > 0` in double-double arithmetic.
pub fn laplace_image_dd(spec: &ModelSpec, z: Dd) -> Result<Dd> {
    spec.validate()?;
    let c = spec.canonical();
    let w = z * Dd::new(c.tau);
    let (a, b) = (Dd::new(c.alpha), Dd::new(c.beta));
    Ok(match c.kind {
        ModelKind::KWW => return domain("KWW has no closed-form spectral function"),
        ModelKind::Debye => Dd::ONE / (Dd::ONE + w),
        ModelKind::CC => Dd::ONE / (Dd::ONE + w.powf(a)),
        ModelKind::CD | ModelKind::HN => (-(b * w.powf(a).ln1p())).exp(),
        ModelKind::MCD | ModelKind::JWS => -(-(b * w.powf(-a).ln1p())).expm1(),
    })
}

/// θ_α(y): angle of `(y^{-α} + cos πα, sin πα)`, continuous in `y` with
/// range `(0, πα)`.
pub fn theta(alpha: f64, y: f64) -> f64 {
    (sin_pi(alpha)).atan2(y.powf(-alpha) + cos_pi(alpha))
}

/// `(ε′, ε″)` with `ε* = ε′ - iε″ = ε∞ + (ε₀ - ε∞) φ̂(iω)`.
///
/// HN and JWS use the explicit modulus/angle formulas; the other laws go
/// through the spectral function.
pub fn permittivity(spec: &ModelSpec, scale: &PermittivityScale, omega: f64) -> Result<(f64, f64)> {
    spec.validate()?;
    if !(omega >= 0.0) {
        return domain(format!("omega must be nonnegative, got {omega}"));
    }
    let c = spec.canonical();
    let w = omega * c.tau;
    let de = scale.delta();
    match c.kind {
        ModelKind::HN | ModelKind::JWS if w > 0.0 => {
            let (a, b) = (c.alpha, c.beta);
            let (sh, ch) = (sin_pi(a / 2.0), cos_pi(a / 2.0));
            let wa = w.powf(a);
            let d = 1.0 + 2.0 * wa * ch + wa * wa;
            let dm = d.powf(-b / 2.0);
            if c.kind == ModelKind::HN {
                let th = sh.atan2(1.0 / wa + ch);
                Ok((scale.eps_inf + de * (b * th).cos() * dm, de * (b * th).sin() * dm))
            } else {
                let th = sh.atan2(wa + ch);
                let f = w.powf(a * b) * dm;
                Ok((scale.eps_static - de * f * (b * th).cos(), de * f * (b * th).sin()))
            }
        }
        _ => permittivity_via_spectral(spec, scale, omega),
    }
}

/// Permittivity through `φ̂(iω)` for every law that has one.
pub fn permittivity_via_spectral(spec: &ModelSpec, scale: &PermittivityScale, omega: f64) -> Result<(f64, f64)> {
    let p = spectral(spec, omega * spec.tau)?;
    Ok((scale.eps_inf + scale.delta() * p.re, -scale.delta() * p.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn debye_and_hn_examples() {
        let d = ModelSpec::debye(1.0).unwrap();
        assert_eq!(spectral(&d, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        let h = ModelSpec::hn(1.0, 1.0, 1.0).unwrap();
        let v = spectral(&h, 1.0).unwrap();
        assert!((v - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        let h = ModelSpec::hn(0.5, 0.5, 1.0).unwrap();
        let v = spectral(&h, 1.0).unwrap();
        let exact = (1.0 + Complex64::from_polar(1.0, PI / 4.0)).powf(-0.5);
        assert!((v - exact).norm() < 1e-15);
        assert!((v.re - 0.72153).abs() < 1e-5 && (v.im + 0.14353).abs() < 1e-5);
        assert!(spectral(&ModelSpec::kww(0.5, 1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn permittivity_examples() {
        let d = ModelSpec::debye(1.0).unwrap();
        let sc = PermittivityScale::new(10.0, 2.0).unwrap();
        let (re, im) = permittivity(&d, &sc, 1.0).unwrap();
        assert!((re - 6.0).abs() < 1e-14 && (im - 4.0).abs() < 1e-14);
        for spec in [ModelSpec::hn(0.5, 0.5, 1.0).unwrap(), ModelSpec::jws(0.3, 0.5, 2.0).unwrap()] {
            assert_eq!(permittivity(&spec, &sc, 0.0).unwrap(), (10.0, 0.0));
            for w in [1e-3, 0.1, 1.0, 7.0, 1e3] {
                let (a, b) = permittivity(&spec, &sc, w).unwrap();
                let (c, d) = permittivity_via_spectral(&spec, &sc, w).unwrap();
                assert!((a - c).abs() < 1e-12 && (b - d).abs() < 1e-12, "{w}: {a} {c} {b} {d}");
            }
        }
    }

    #[test]
    fn theta_limits() {
        assert!((theta(0.6, 1.0) - 0.3 * PI).abs() < 1e-15);
        assert!(theta(0.6, 1e-12) < 1e-6);
        assert!((theta(0.6, 1e12) - 0.6 * PI).abs() < 1e-6);
    }

    #[test]
    fn dd_image_matches_complex_image() {
        for spec in [ModelSpec::hn(0.5, 0.5, 1.0).unwrap(), ModelSpec::jws(0.75, 1.0 / 3.0, 1.0).unwrap()] {
            for z in [0.1, 1.0, 30.0] {
                let a = laplace_image(&spec, Complex64::new(z, 0.0)).unwrap().re;
                let b = laplace_image_dd(&spec, Dd::new(z)).unwrap().to_f64();
                assert!((a - b).abs() < 1e-15 * a.abs().max(1.0));
            }
        }
    }
}
