//! Memory kernels of the relaxation laws.
//!
//! With a positive rate constant `B`, the relaxation function obeys both
//! `n(t) + B ∫_0^t M(t-u) n(u) du = 1` and `∫_0^t k(t-u) ṅ(u) du + B n(t) = 0`,
//! where `M̂(s) = φ̂/(B(1-φ̂))`, `k̂(s) = 1/(s M̂(s))` (so `s M̂ k̂ = 1`, the
//! Sonine condition) and `Ψ̂ = 1/M̂` is the characteristic exponent.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::laplace::talbot;
use crate::models::{relaxation, response, ModelKind, ModelSpec};
use crate::quad::tanh_sinh_endpoints;
use crate::specfun::gamma::recip_gamma;
use crate::specfun::ml;
use crate::util::{expm1_c, ln1p_c};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub spec: ModelSpec,
    pub rate_b: f64,
    /// Cap on the number of terms of the time-domain kernel series.
    pub series_terms: usize,
}

impl KernelConfig {
    pub fn new(spec: ModelSpec) -> Self {
        KernelConfig { spec, rate_b: 1.0, series_terms: 400 }
    }

    pub fn with_rate(mut self, b: f64) -> Self {
        self.rate_b = b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.rate_b > 0.0 && self.rate_b.is_finite()) {
            return domain(format!("rate B must be positive, got {}", self.rate_b));
        }
        if self.series_terms < 1 {
            return domain("series_terms must be at least 1");
        }
        if self.spec.kind == ModelKind::KWW {
            return domain("KWW has no closed-form memory kernel");
        }
        Ok(())
    }
}

/// A kernel value: δ(t) coefficient plus the regular part at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub singular_weight: f64,
    pub regular: f64,
}

/// `Ψ̂/B` as a function of complex `w = sτ`, written without cancellation.
fn psi_unit(spec: &ModelSpec, w: Complex64) -> Complex64 {
    let (a, b) = (spec.alpha, spec.beta);
    let wa = if a == 1.0 { w } else { (a * w.ln()).exp() };
    match spec.kind {
        ModelKind::Debye => w,
        ModelKind::CC => wa,
        // (1 + w^α)^β - 1
        ModelKind::CD | ModelKind::HN => expm1_c(b * ln1p_c(wa)),
        // 1 / ((1 + w^{-α})^β - 1)
        ModelKind::MCD | ModelKind::JWS => 1.0 / expm1_c(b * ln1p_c(1.0 / wa)),
        ModelKind::KWW => Complex64::new(f64::NAN, 0.0),
    }
}

fn check_s(cfg: &KernelConfig, s: f64) -> Result<ModelSpec> {
    cfg.validate()?;
    if !(s > 0.0) || !s.is_finite() {
        return domain(format!("kernel transforms need s > 0, got {s}"));
    }
    Ok(cfg.spec.canonical())
}

/// `Ψ̂(s) = B(1-φ̂)/φ̂`.
pub fn characteristic_exponent(cfg: &KernelConfig, s: f64) -> Result<f64> {
    let c = check_s(cfg, s)?;
    Ok(cfg.rate_b * psi_unit(&c, Complex64::new(s * c.tau, 0.0)).re)
}

/// `M̂(s) = φ̂ / (B(1-φ̂)) = 1/Ψ̂(s)`.
pub fn memory_m_hat(cfg: &KernelConfig, s: f64) -> Result<f64> {
    Ok(1.0 / characteristic_exponent(cfg, s)?)
}

/// `k̂(s) = 1/(s M̂(s)) = Ψ̂(s)/s`.
pub fn memory_k_hat(cfg: &KernelConfig, s: f64) -> Result<f64> {
    Ok(characteristic_exponent(cfg, s)? / s)
}

fn check_t(cfg: &KernelConfig, t: f64) -> Result<ModelSpec> {
    cfg.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("kernel time must be positive, got {t}"));
    }
    Ok(cfg.spec.canonical())
}

/// Relative size below which the remaining HN kernel series is ignored.
const SERIES_TOL: f64 = 1e-12;

/// `M(t)`. For the HN family this is the series
/// `(Bτ)^{-1} Σ_{r≥1} x^{αβr-1} E^{βr}_{α,αβr}(-x^α)`, truncated once a
/// geometric bound on the remainder falls below 1e-12 relative; if the cap
/// `series_terms` is reached first a `TruncationWarning` is returned.
pub fn memory_m_time(cfg: &KernelConfig, t: f64) -> Result<KernelValue> {
    let c = check_t(cfg, t)?;
    let (a, b, tau, bb) = (c.alpha, c.beta, c.tau, cfg.rate_b);
    let x = t / tau;
    let regular = match c.kind {
        ModelKind::Debye => 1.0 / (bb * tau),
        ModelKind::CC => x.powf(a - 1.0) * recip_gamma(a) / (bb * tau),
        ModelKind::JWS | ModelKind::MCD => ml(a, 0.0, -b, x)? / (x * bb * tau),
        ModelKind::HN | ModelKind::CD => {
            let mut sum = 0.0;
            let mut prev = f64::INFINITY;
            let mut done = false;
            let mut tail = f64::INFINITY;
            // consecutive decreasing terms seen; early terms may still grow
            let mut falling = 0;
            for r in 1..=cfg.series_terms {
                let nu = b * r as f64;
                let term = x.powf(a * nu - 1.0) * ml(a, a * nu, nu, x)?;
                sum += term;
                let ratio = term.abs() / prev;
                prev = term.abs();
                falling = if ratio < 1.0 { falling + 1 } else { 0 };
                if falling >= 3 {
                    tail = term.abs() * ratio / (1.0 - ratio);
                    if tail <= SERIES_TOL * sum.abs() {
                        done = true;
                        break;
                    }
                }
            }
            if !done {
                return Err(Error::TruncationWarning(format!(
                    "M(t={t}) after {} terms: sum {sum:e}, tail estimate {tail:e}",
                    cfg.series_terms
                )));
            }
            sum / (bb * tau)
        }
        ModelKind::KWW => unreachable!(),
    };
    Ok(KernelValue { singular_weight: 0.0, regular })
}

/// `k(t)`. HN family: `B[x^{-αβ} E^{-β}_{α,1-αβ}(-x^α) - 1]`, plus a δ of
/// weight `Bτ` when αβ = 1. JWS family: contour inversion of `k̂`, with a δ
/// of weight `Bτ/β` for the MCD case.
pub fn memory_k_time(cfg: &KernelConfig, t: f64) -> Result<KernelValue> {
    let c = check_t(cfg, t)?;
    let (a, b, tau, bb) = (c.alpha, c.beta, c.tau, cfg.rate_b);
    let x = t / tau;
    Ok(match c.kind {
        ModelKind::Debye => KernelValue { singular_weight: bb * tau, regular: 0.0 },
        ModelKind::CC => KernelValue { singular_weight: 0.0, regular: bb * x.powf(-a) * recip_gamma(1.0 - a) },
        ModelKind::HN | ModelKind::CD => {
            let ab = a * b;
            let e = ml(a, 1.0 - ab, -b, x)?;
            let singular_weight = if ab == 1.0 { bb * tau } else { 0.0 };
            KernelValue { singular_weight, regular: bb * (x.powf(-ab) * e - 1.0) }
        }
        ModelKind::JWS | ModelKind::MCD => {
            let singular = if a == 1.0 { 1.0 / b } else { 0.0 };
            // Ψ̂/(Bw) = 1/(w expm1(β ln1p(w^{-α}))), free of overflow and
            // cancellation on the far contour nodes
            let image = |w: Complex64| {
                let wa = if a == 1.0 { w } else { (a * w.ln()).exp() };
                1.0 / (w * expm1_c(b * ln1p_c(1.0 / wa))) - singular
            };
            KernelValue { singular_weight: bb * tau * singular, regular: bb * talbot(image, x, 32)? }
        }
        ModelKind::KWW => unreachable!(),
    })
}

/// `K_C(u) = u^{-αβ} E^{-β}_{α,1-αβ}(-(u/τ)^α)`, the HN Prabhakar-type
/// derivative kernel (`k = B(τ^{αβ} K_C - 1)`); `u` is passed as `u/τ`.
fn caputo_kernel(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok(x.powf(-a * b) * ml(a, 1.0 - a * b, -b, x)?)
}

fn convolve<F, G>(kernel: F, g: G, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    // kernel singular at lag 0, g possibly singular at 0: split in the middle
    let h = 0.5 * t;
    let first = tanh_sinh_endpoints(|_, dl, dr| kernel(h + dr) * g(dl), 0.0, h, 1e-10)?.value;
    let second = tanh_sinh_endpoints(|_, dl, dr| kernel(dr) * g(h + dl), h, t, 1e-10)?.value;
    Ok(first + second)
}

/// Residual of the evolution equation at each time of `t_grid`; returns the
/// largest magnitude.
///
/// HN family: `[∫_0^t k(t-u) ṅ(u) du + B n(t)]/B`. JWS family:
/// `∫_0^t B M(t-u) n(u) du + n(t) - 1`. Both are independent of `B`.
pub fn evolution_residual(cfg: &KernelConfig, t_grid: &[f64]) -> Result<f64> {
    cfg.validate()?;
    let c = cfg.spec.canonical();
    let (a, b, tau) = (c.alpha, c.beta, c.tau);
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        if !(t > 0.0) {
            return domain(format!("residual times must be positive, got {t}"));
        }
        let n = relaxation(&c, t)?;
        let r = match c.kind {
            ModelKind::JWS | ModelKind::MCD => {
                let kernel = |u: f64| {
                    let x = u / tau;
                    ml(a, 0.0, -b, x).map(|e| e / (x * tau)).unwrap_or(f64::NAN)
                };
                let g = |u: f64| relaxation(&c, u).unwrap_or(f64::NAN);
                convolve(kernel, g, t)? + n - 1.0
            }
            _ => {
                let k = |u: f64| memory_k_time(&KernelConfig { rate_b: 1.0, ..*cfg }, u);
                let w = k(t)?.singular_weight;
                let ndot = |u: f64| -response(&c, u).map(|r| r.regular).unwrap_or(f64::NAN);
                let kernel = |u: f64| k(u).map(|v| v.regular).unwrap_or(f64::NAN);
                let conv = if c.kind == ModelKind::Debye { 0.0 } else { convolve(kernel, ndot, t)? };
                conv + w * ndot(t) + n
            }
        };
        if !r.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite residual at t = {t}")));
        }
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Both sides of the Caputo / Riemann-Liouville relation for the HN
/// derivative kernel `K_C` at time `t`:
/// `∫_0^t K_C(t-u) ṅ(u) du` and `d/dt ∫_0^t K_C(t-u) n(u) du - K_C(t) n(0)`.
/// Along the HN solution both equal `-τ^{-αβ}`.
pub fn caputo_rl_pair(spec: &ModelSpec, t: f64) -> Result<(f64, f64)> {
    spec.validate()?;
    let c = spec.canonical();
    if !matches!(c.kind, ModelKind::HN | ModelKind::CC | ModelKind::CD) {
        return domain("the Caputo/Riemann-Liouville pair is defined for the HN family with alpha*beta < 1");
    }
    let (a, b, tau) = (c.alpha, c.beta, c.tau);
    let kc = |u: f64| caputo_kernel(a, b, u / tau).map(|v| v * tau.powf(-a * b)).unwrap_or(f64::NAN);
    let ndot = |u: f64| -response(&c, u).map(|r| r.regular).unwrap_or(f64::NAN);
    let n = |u: f64| relaxation(&c, u).unwrap_or(f64::NAN);
    let caputo = convolve(kc, ndot, t)?;
    let h = 1e-3 * t;
    let conv = |s: f64| convolve(kc, n, s);
    // fourth-order central difference
    let d = (-conv(t + 2.0 * h)? + 8.0 * conv(t + h)? - 8.0 * conv(t - h)? + conv(t - 2.0 * h)?) / (12.0 * h);
    let rl = d - kc(t) * 1.0;
    Ok((caputo, rl))
}
