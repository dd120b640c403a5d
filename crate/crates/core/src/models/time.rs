//! Time domain: response functions φ(t) = -dn/dt and relaxation
//! functions n(t), written through the Prabhakar function.

use num_complex::Complex64;

use super::{ModelKind, ModelSpec};
use crate::error::{domain, Result};
use crate::laplace::talbot;
use crate::specfun::gamma::{gamma_q, is_gamma_pole, ln_gamma_signed, recip_gamma};
use crate::specfun::ml;
use crate::util::{expm1_c, ln1p_c};

/// A response function value split into a δ(t) coefficient and the regular
/// density at the requested time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeResponse {
    pub singular_weight: f64,
    pub regular: f64,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("time must be positive and finite, got {t}"));
    }
    Ok(())
}

/// φ(t). None of the laws carries a δ at the origin: their spectral
/// functions all vanish as ω → ∞, so `singular_weight` is always 0 and the
/// JWS/MCD responses are returned as their (positive) regular parts.
pub fn response(spec: &ModelSpec, t: f64) -> Result<TimeResponse> {
    spec.validate()?;
    check_t(t)?;
    let c = spec.canonical();
    let (a, b, tau) = (c.alpha, c.beta, c.tau);
    let x = t / tau;
    let regular = match c.kind {
        ModelKind::Debye => (-x).exp() / tau,
        ModelKind::CC => x.powf(a - 1.0) * ml(a, a, 1.0, x)? / tau,
        ModelKind::CD => ((b - 1.0) * x.ln() - x).exp() * recip_gamma(b) / tau,
        ModelKind::HN => x.powf(a * b - 1.0) * ml(a, a * b, b, x)? / tau,
        ModelKind::JWS | ModelKind::MCD => -ml(a, 0.0, b, x)? / (x * tau),
        ModelKind::KWW => a * x.powf(a - 1.0) * (-x.powf(a)).exp() / tau,
    };
    Ok(TimeResponse { singular_weight: 0.0, regular })
}

/// dφ/dt for t > 0, analytic through the index shift μ → μ - 1.
pub fn response_derivative(spec: &ModelSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    check_t(t)?;
    let c = spec.canonical();
    let (a, b, tau) = (c.alpha, c.beta, c.tau);
    let x = t / tau;
    let t2 = tau * tau;
    Ok(match c.kind {
        ModelKind::Debye => -(-x).exp() / t2,
        ModelKind::CD => ((b - 1.0) / x - 1.0) * ((b - 1.0) * x.ln() - x).exp() * recip_gamma(b) / t2,
        ModelKind::CC => x.powf(a - 2.0) * ml(a, a - 1.0, 1.0, x)? / t2,
        ModelKind::HN => x.powf(a * b - 2.0) * ml(a, a * b - 1.0, b, x)? / t2,
        ModelKind::JWS | ModelKind::MCD => -ml(a, -1.0, b, x)? / (x * x * t2),
        ModelKind::KWW => {
            let xa = x.powf(a);
            a * (-xa).exp() * x.powf(a - 2.0) * ((a - 1.0) - a * xa) / t2
        }
    })
}

/// Algebraic large-time series of `n_HN` truncated at the smallest term:
/// `-Σ_{k≥1} (β)_k (-x^{-α})^k / (k! Γ(1-αk))`. Returns `(value, error)`.
fn hn_tail_series(a: f64, b: f64, x: f64) -> (f64, f64) {
    let lx = x.ln();
    let mut c: f64 = 1.0;
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        c *= (b + kf - 1.0) / kf;
        let arg = 1.0 - a * kf;
        if is_gamma_pole(arg) {
            continue;
        }
        let (lg, sg) = ln_gamma_signed(arg);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 } * sg;
        let term = sign * (c.ln() - a * kf * lx - lg).exp();
        if term.abs() > last {
            return (sum, term.abs());
        }
        last = term.abs();
        sum += term;
    }
    (sum, last)
}

/// `n_HN(x)` when `1 - n` is close to 1, by inverting the image
/// `-expm1(-β ln1p(s^α))/s` (no cancellation), or far out by the
/// algebraic series.
fn hn_relaxation_far(a: f64, b: f64, x: f64) -> Result<f64> {
    if x >= 40.0 {
        let (v, err) = hn_tail_series(a, b, x);
        if v > 0.0 && err <= 1e-13 * v {
            return Ok(v);
        }
    }
    let image = |s: Complex64| {
        let w = if a == 1.0 { s } else { (a * s.ln()).exp() };
        // n̂ = (1 - φ̂)/s with 1 - φ̂ = -expm1(-β ln1p(w))
        -expm1_c(-b * ln1p_c(w)) / s
    };
    talbot(image, x, 32)
}

/// n(t), with n(0) = 1.
pub fn relaxation(spec: &ModelSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    if !t.is_finite() {
        return Ok(0.0);
    }
    let c = spec.canonical();
    let (a, b) = (c.alpha, c.beta);
    let x = t / c.tau;
    Ok(match c.kind {
        ModelKind::Debye => (-x).exp(),
        ModelKind::CC => ml(a, 1.0, 1.0, x)?,
        ModelKind::CD => gamma_q(b, x),
        ModelKind::HN => {
            let p = x.powf(a * b) * ml(a, 1.0 + a * b, b, x)?;
            if p <= 0.5 {
                1.0 - p
            } else {
                hn_relaxation_far(a, b, x)?
            }
        }
        ModelKind::JWS | ModelKind::MCD => ml(a, 1.0, b, x)?,
        ModelKind::KWW => (-x.powf(a)).exp(),
    })
}

/// dn/dt = -φ(t) for t > 0.
pub fn relaxation_derivative(spec: &ModelSpec, t: f64) -> Result<f64> {
    Ok(-response(spec, t)?.regular)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn examples() {
        let d = ModelSpec::debye(2.0).unwrap();
        let r = response(&d, 2.0).unwrap();
        assert!(rel(r.regular, (-1f64).exp() / 2.0) < 1e-15);
        assert_eq!(r.singular_weight, 0.0);
        let cd = ModelSpec::cd(0.5, 1.0).unwrap();
        assert!(rel(response(&cd, 1.0).unwrap().regular, 0.207_553_748_710_297_4) < 1e-14);
        let cc = ModelSpec::cc(0.5, 1.0).unwrap();
        assert!(rel(relaxation(&cc, 1.0).unwrap(), 0.427_583_576_155_807) < 1e-12);
        let cd1 = ModelSpec::cd(1.0, 1.0).unwrap();
        assert!(rel(relaxation(&cd1, 2.0).unwrap(), (-2f64).exp()) < 1e-14);
        for s in [cc, cd, d, ModelSpec::hn(0.5, 0.5, 1.0).unwrap(), ModelSpec::jws(0.5, 0.5, 1.0).unwrap()] {
            assert_eq!(relaxation(&s, 0.0).unwrap(), 1.0);
        }
        assert!(response(&d, 0.0).is_err());
    }

    #[test]
    fn hn_relaxation_branches_join() {
        let s = ModelSpec::hn(0.5, 0.5, 1.0).unwrap();
        // both sides of the p = 1/2 switch against the far-field inversion
        for x in [0.05f64, 0.3, 1.0, 3.0] {
            let p = x.powf(0.25) * ml(0.5, 1.25, 0.5, x).unwrap();
            let far = hn_relaxation_far(0.5, 0.5, x).unwrap();
            assert!(rel(far, 1.0 - p) < 1e-9, "{x}: {far} {}", 1.0 - p);
        }
        // long-time power law
        let n = relaxation(&s, 1e4).unwrap();
        let lead = 0.5 * 1e-2 * recip_gamma(0.5);
        assert!(rel(n, lead) < 0.02);
        let (v, _) = hn_tail_series(0.5, 0.5, 1e6);
        assert!(rel(v, talbot(|z: Complex64| -expm1_c(-0.5 * ln1p_c(z.sqrt())) / z, 1e6, 32).unwrap()) < 1e-8);
    }

    #[test]
    fn derivative_consistency() {
        let h = 1e-5;
        for s in [
            ModelSpec::hn(0.5, 0.5, 1.0).unwrap(),
            ModelSpec::jws(0.5, 0.5, 1.0).unwrap(),
            ModelSpec::kww(0.6, 1.0).unwrap(),
            ModelSpec::cd(0.4, 1.0).unwrap(),
            ModelSpec::mcd(0.4, 1.0).unwrap(),
        ] {
            for t in [0.3, 1.0, 4.0] {
                let fd = -(relaxation(&s, t + h).unwrap() - relaxation(&s, t - h).unwrap()) / (2.0 * h);
                let phi = response(&s, t).unwrap().regular;
                assert!(rel(phi, fd) < 1e-6, "{:?} t={t}: {phi} {fd}", s.kind);
                let fd2 = (response(&s, t + h).unwrap().regular - response(&s, t - h).unwrap().regular) / (2.0 * h);
                let d = response_derivative(&s, t).unwrap();
                assert!(rel(d, fd2) < 1e-5, "{:?} t={t}: {d} {fd2}", s.kind);
            }
        }
    }
}
