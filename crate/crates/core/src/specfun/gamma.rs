//! Gamma-function helpers with explicit sign tracking.
//!
//! Γ and ln Γ come from `libm` (a port of the musl routines, accurate to a
//! few ulp on the whole real line); the incomplete gamma from `statrs`.

use std::f64::consts::PI;

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    // reduce to [-1, 1]
    let r = x - 2.0 * (x / 2.0).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(pi x)` with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// True when `x` is zero or a negative integer (a pole of Γ).
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `(ln|Γ(x)|, sign Γ(x))`. At poles returns `(+inf, 0.0)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if is_gamma_pole(x) {
        return (f64::INFINITY, 0.0);
    }
    let (l, s) = libm::lgamma_r(x);
    (l, if s < 0 { -1.0 } else { 1.0 })
}

/// Γ(x) for real `x`; `+inf` at poles.
pub fn gamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return f64::INFINITY;
    }
    libm::tgamma(x)
}

/// 1/Γ(x), an entire function: exactly zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x > -170.0 && x < 171.0 {
        let g = libm::tgamma(x);
        if g.is_finite() && g != 0.0 {
            return 1.0 / g;
        }
    }
    let (l, s) = ln_gamma_signed(x);
    s * (-l).exp()
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x)/Γ(a), a > 0, x ≥ 0.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    statrs::function::gamma::gamma_ur(a, x)
}
