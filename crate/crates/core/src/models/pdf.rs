//! Relaxation-time densities: `n(t) = ∫_0^∞ e^{-tξ/τ} g(ξ) dξ`.
//!
//! HN and JWS have a closed trigonometric form through θ_α and, for
//! rational α = l/k, a finite sum of k hypergeometric series (HN converges
//! for ξ > 1, JWS for ξ < 1; the two are mirror images,
//! `g_JWS(ξ) = ξ^{-2} g_HN(1/ξ)`).

use std::f64::consts::PI;

use super::spectral::theta;
use super::{ModelKind, ModelSpec};
use crate::error::{domain, Error, Result};
use crate::quad::{exp_sinh, tanh_sinh};
use crate::specfun::gamma::{cos_pi, sin_pi};
use crate::specfun::{hyper_pfq, levy_stable_density, EvalStrategy, RationalOrder};

/// Upper cut beyond which the HN-type tail mass is taken analytically.
const TAIL_CUT: f64 = 10.0;

fn check_xi(xi: f64) -> Result<()> {
    if !(xi > 0.0) {
        return domain(format!("density argument must be positive, got {xi}"));
    }
    Ok(())
}

/// Closed CC density `sin πα / (πξ (ξ^α + 2cos πα + ξ^{-α}))`.
pub fn pdf_cc(alpha: f64, xi: f64) -> f64 {
    let xa = xi.powf(alpha);
    sin_pi(alpha) / (PI * xi * (xa + 2.0 * cos_pi(alpha) + 1.0 / xa))
}

/// Closed CD density, supported on ξ > 1.
pub fn pdf_cd(beta: f64, xi: f64) -> f64 {
    if xi <= 1.0 {
        return 0.0;
    }
    sin_pi(beta) / (PI * xi * (xi - 1.0).powf(beta))
}

/// Closed MCD density, supported on 0 < ξ < 1.
pub fn pdf_mcd(beta: f64, xi: f64) -> f64 {
    if xi >= 1.0 {
        return 0.0;
    }
    sin_pi(beta) * xi.powf(beta - 1.0) / (PI * (1.0 - xi).powf(beta))
}

fn d_term(alpha: f64, xi: f64) -> f64 {
    let xa = xi.powf(alpha);
    xa * xa + 2.0 * xa * cos_pi(alpha) + 1.0
}

/// HN density `sin(β θ_α(ξ)) / (π ξ D^{β/2})`, `D = ξ^{2α} + 2ξ^α cos πα + 1`.
pub fn pdf_hn_trig(alpha: f64, beta: f64, xi: f64) -> f64 {
    if alpha == 1.0 {
        return if xi > 1.0 { pdf_cd(beta, xi) } else { 0.0 };
    }
    (beta * theta(alpha, xi)).sin() / (PI * xi) * (-0.5 * beta * d_term(alpha, xi).ln()).exp()
}

/// JWS density `ξ^{αβ-1} sin(β θ_α(1/ξ)) / (π D^{β/2})`.
pub fn pdf_jws_trig(alpha: f64, beta: f64, xi: f64) -> f64 {
    if alpha == 1.0 {
        return if xi < 1.0 { pdf_mcd(beta, xi) } else { 0.0 };
    }
    let ln = (alpha * beta - 1.0) * xi.ln() - 0.5 * beta * d_term(alpha, xi).ln();
    (beta * theta(alpha, 1.0 / xi)).sin() / PI * ln.exp()
}

/// Shared rational-order sum; `sign_pow = -1` gives the HN (ξ > 1) form,
/// `+1` the JWS (ξ < 1) form.
fn hyper_form(order: RationalOrder, beta: f64, xi: f64, sign_pow: f64) -> Result<f64> {
    let (l, k) = (order.l as usize, order.k as usize);
    let (lf, kf) = (l as f64, k as f64);
    let alpha = lf / kf;
    let st = EvalStrategy::default();
    let parity = if (l + k) % 2 == 0 { 1.0 } else { -1.0 };
    let arg = parity * xi.powf(sign_pow * lf);
    let mut sum = 0.0;
    let mut c = 1.0; // (β)_j / j!
    for j in 0..k {
        let jf = j as f64;
        let nj = beta + jf;
        let s = sin_pi(alpha * nj);
        if s != 0.0 && c != 0.0 {
            let mut num = vec![1.0];
            num.extend((0..k).map(|i| (nj + i as f64) / kf));
            let den: Vec<f64> = (0..k).map(|i| (1.0 + jf + i as f64) / kf).collect();
            let f = hyper_pfq(&num, &den, arg, &st)?;
            let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
            sum += sign * c * xi.powf(-1.0 + sign_pow * alpha * nj) * s * f;
        }
        c *= (beta + jf) / (jf + 1.0);
    }
    Ok(sum / PI)
}

/// HN density for α = l/k as a finite sum of `_{k+1}F_k` series; valid for
/// ξ > 1.
pub fn pdf_hn_hyper(order: RationalOrder, beta: f64, xi: f64) -> Result<f64> {
    if !(xi > 1.0) {
        return domain(format!("HN hypergeometric form converges for xi > 1, got {xi}"));
    }
    hyper_form(order, beta, xi, -1.0)
}

/// JWS density for α = l/k as a finite sum of `_{k+1}F_k` series; valid for
/// 0 < ξ < 1.
pub fn pdf_jws_hyper(order: RationalOrder, beta: f64, xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return domain(format!("JWS hypergeometric form converges for 0 < xi < 1, got {xi}"));
    }
    hyper_form(order, beta, xi, 1.0)
}

/// `∫_Ξ^∞ g_HN(ξ) dξ` for Ξ > 1, from the termwise-integrated large-ξ
/// expansion `g ≈ (1/π) Σ_n (-1)^n (β)_n/n! sin(πα(β+n)) ξ^{-1-α(β+n)}`.
pub fn pdf_hn_tail_mass(alpha: f64, beta: f64, cut: f64) -> Result<f64> {
    if !(cut > 1.0) {
        return domain("tail cut must exceed 1");
    }
    let q = cut.powf(-alpha);
    let mut c = 1.0;
    let mut p = cut.powf(-alpha * beta);
    let mut sum = 0.0;
    for n in 0..5000 {
        let nf = n as f64;
        let e = alpha * (beta + nf);
        let bound = c * p / e;
        let term = bound * sin_pi(e);
        sum += if n % 2 == 1 { -term } else { term };
        // sin may vanish at isolated n; judge convergence on the bound
        if bound.abs() < 1e-17 * sum.abs().max(1e-300) {
            return Ok(sum / PI);
        }
        c *= (beta + nf) / (nf + 1.0);
        p *= q;
    }
    Err(Error::NonConvergent("HN tail mass series".into()))
}

/// g(ξ) for a law in its non-negativity regime (or any β with the override
/// flag). Debye (a point mass at ξ = 1) has no density.
pub fn pdf_g(spec: &ModelSpec, xi: f64) -> Result<f64> {
    spec.validate()?;
    check_xi(xi)?;
    let c = spec.canonical();
    let (a, b) = (c.alpha, c.beta);
    Ok(match c.kind {
        ModelKind::Debye => return domain("Debye relaxation is a point mass at xi = 1, not a density"),
        ModelKind::CC => pdf_cc(a, xi),
        ModelKind::CD => pdf_cd(b, xi),
        ModelKind::MCD => pdf_mcd(b, xi),
        ModelKind::HN => pdf_hn_trig(a, b, xi),
        ModelKind::JWS => pdf_jws_trig(a, b, xi),
        ModelKind::KWW => levy_stable_density(a, xi)?,
    })
}

/// `∫_0^∞ g(ξ) dξ`; one for every valid law.
pub fn pdf_mass(spec: &ModelSpec) -> Result<f64> {
    spec.validate()?;
    let c = spec.canonical();
    let g = |x: f64| pdf_g(&c, x).unwrap_or(f64::NAN);
    let tol = 1e-11;
    Ok(match c.kind {
        ModelKind::MCD => tanh_sinh(g, 0.0, 1.0, tol)?.value,
        ModelKind::CC | ModelKind::CD | ModelKind::HN => {
            tanh_sinh(&g, 0.0, 1.0, tol)?.value
                + tanh_sinh(&g, 1.0, TAIL_CUT, tol)?.value
                + pdf_hn_tail_mass(c.alpha, c.beta, TAIL_CUT)?
        }
        // mirror image: the mass below 1/Ξ is the HN tail mass beyond Ξ
        ModelKind::JWS => {
            pdf_hn_tail_mass(c.alpha, c.beta, TAIL_CUT)?
                + tanh_sinh(&g, 1.0 / TAIL_CUT, 1.0, tol)?.value
                + exp_sinh(&g, 1.0, tol)?.value
        }
        ModelKind::KWW => tanh_sinh(&g, 0.0, 1.0, tol)?.value + exp_sinh(&g, 1.0, tol)?.value,
        ModelKind::Debye => return domain("Debye relaxation has no density"),
    })
}

/// The mixture integral `∫_0^∞ e^{-tξ/τ} g(ξ) dξ`, which reproduces n(t).
pub fn pdf_laplace(spec: &ModelSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    let c = spec.canonical();
    if c.kind == ModelKind::Debye {
        return Ok((-t / c.tau).exp());
    }
    let x = t / c.tau;
    let f = |xi: f64| {
        let e = (-x * xi).exp();
        if e == 0.0 {
            0.0
        } else {
            e * pdf_g(&c, xi).unwrap_or(f64::NAN)
        }
    };
    let tol = 1e-11;
    let lower = if c.kind == ModelKind::CD { 0.0 } else { tanh_sinh(&f, 0.0, 1.0, tol)?.value };
    let upper = if c.kind == ModelKind::MCD { 0.0 } else { exp_sinh(&f, 1.0, tol)?.value };
    Ok(lower + upper)
}
