//! One-sided Lévy stable density Φ_α, the inverse Laplace transform of
//! `exp(-z^α)` for 0 < α < 1.
//!
//! The Bromwich integral is deformed onto the steepest-descent path of
//! `zx - z^α`, where the integrand is real and positive. Parametrized by the
//! path angle φ ∈ (0, π) it becomes
//!
//! `Φ_α(x) = α/(1-α) x^{-1/(1-α)} (1/π) ∫_0^π A(φ) exp(-x^{-α/(1-α)} A(φ)) dφ`
//!
//! with `A(φ) = (sin αφ / sin φ)^{1/(1-α)} sin((1-α)φ) / sin αφ`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::quad::gauss_kronrod;

fn ln_a(alpha: f64, phi: f64) -> f64 {
    let p = 1.0 / (1.0 - alpha);
    p * ((alpha * phi).sin() / phi.sin()).ln() + ((1.0 - alpha) * phi).sin().ln() - (alpha * phi).sin().ln()
}

/// `Φ_α(x)` for `0 < α < 1`, `x > 0`.
pub fn levy_stable_density(alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("Levy density needs 0 < alpha < 1, got {alpha}"));
    }
    if !(x > 0.0) {
        return domain(format!("Levy density needs x > 0, got {x}"));
    }
    if !x.is_finite() {
        return Ok(0.0);
    }
    let p = 1.0 / (1.0 - alpha);
    let ln_c = -alpha * p * x.ln();
    let c = ln_c.exp();
    // A is increasing on (0, π) with A(0+) = α^{α/(1-α)} (1-α)
    let a0 = alpha.powf(alpha * p) * (1.0 - alpha);
    if ln_c.is_finite() && c * a0 > 745.0 {
        return Ok(0.0);
    }
    // factor out the largest exponent exp(-c A(0)) to keep the integrand O(1)
    let integrand = |phi: f64| {
        if phi <= 0.0 || phi >= PI {
            return 0.0;
        }
        let la = ln_a(alpha, phi);
        let v = (la - c * (la.exp() - a0)).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let q = gauss_kronrod(integrand, 0.0, PI, 1e-13, 1e-300)?;
    if q.value <= 0.0 {
        return Ok(0.0);
    }
    let ln_pref = (alpha * p).ln() - p * x.ln() - PI.ln() - c * a0;
    Ok((ln_pref + q.value.ln()).exp())
}
