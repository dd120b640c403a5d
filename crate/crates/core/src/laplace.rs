//! Numerical Laplace transforms: a fixed Talbot contour, Gaver-Stehfest on
//! the real axis (in double-double when the image allows it), a forward
//! transform by quadrature, and the Efros-type composition integral used for
//! subordination.
//!
//! Convention: `f̂(z) = ∫_0^∞ e^{-zt} f(t) dt`.

use num_complex::Complex64;

use crate::dd::Dd;
use crate::error::{domain, Error, Result};
use crate::quad::{exp_sinh, tanh_sinh};
use crate::specfun::levy_stable_density;

type ComplexFn<'a> = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync + 'a>;
type DdFn<'a> = Box<dyn Fn(Dd) -> Dd + Send + Sync + 'a>;

/// A Laplace image `f̂(z)`.
///
/// `evaluator` returns the full image. A constant term in `z` (a δ at the
/// origin in time) is declared through `singular_weight` and removed before
/// inversion, so inverted values are always the regular part.
pub struct LaplaceImage<'a> {
    pub evaluator: ComplexFn<'a>,
    /// Optional extended-precision evaluation on the positive real axis,
    /// enabling high-order Gaver-Stehfest.
    pub real_dd: Option<DdFn<'a>>,
    pub abscissa: f64,
    pub singular_weight: f64,
}

impl<'a> LaplaceImage<'a> {
    pub fn new(evaluator: impl Fn(Complex64) -> Complex64 + Send + Sync + 'a) -> Self {
        LaplaceImage { evaluator: Box::new(evaluator), real_dd: None, abscissa: 0.0, singular_weight: 0.0 }
    }

    pub fn with_dd(mut self, f: impl Fn(Dd) -> Dd + Send + Sync + 'a) -> Self {
        self.real_dd = Some(Box::new(f));
        self
    }

    pub fn with_singular_weight(mut self, w: f64) -> Self {
        self.singular_weight = w;
        self
    }

    pub fn with_abscissa(mut self, a: f64) -> Self {
        self.abscissa = a;
        self
    }

    fn regular(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z) - self.singular_weight
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    Talbot,
    GaverStehfest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InversionConfig {
    pub method: InversionMethod,
    /// Contour nodes (Talbot) or Stehfest order (Gaver-Stehfest).
    pub nodes: usize,
    pub cross_check: bool,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig { method: InversionMethod::Talbot, nodes: 32, cross_check: false }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        match self.method {
            InversionMethod::Talbot if self.nodes < 16 => domain("Talbot needs at least 16 nodes"),
            InversionMethod::GaverStehfest if self.nodes < 8 || self.nodes % 2 == 1 => {
                domain("Gaver-Stehfest order must be even and at least 8")
            }
            _ => Ok(()),
        }
    }
}

/// Relative agreement demanded between the two inversion methods.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

// Weideman-Trefethen optimized cotangent contour
const TA: f64 = 0.6407;
const TB: f64 = 0.5017;
const TC: f64 = 0.2645;
const TS: f64 = -0.6122;

/// Fixed-contour Talbot inversion of `f` at time `t` with `n` nodes.
///
/// The contour is symmetric about the real axis and `f(conj z) = conj f(z)`
/// is assumed, so only the upper half is sampled.
pub fn talbot<F: Fn(Complex64) -> Complex64>(f: F, t: f64, n: usize) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("inversion time must be positive, got {t}"));
    }
    let nf = n as f64;
    let scale = nf / t;
    let mut acc = 0.0;
    for j in 0..n / 2 {
        let th = (2 * j + 1) as f64 * std::f64::consts::PI / nf;
        let (s, c) = (TA * th).sin_cos();
        let cot = c / s;
        let z = Complex64::new(scale * (TS + TB * th * cot), scale * TC * th);
        let dz = Complex64::new(scale * TB * (cot - TA * th / (s * s)), scale * TC);
        let v = (z * t).exp() * f(z) * dz;
        if !v.is_finite() {
            return Err(Error::ContourOverflow(format!("non-finite image value at z = {z}")));
        }
        acc += v.im;
    }
    Ok(2.0 / nf * acc)
}

fn stehfest_weights(order: usize) -> Vec<Dd> {
    let half = order / 2;
    let fact: Vec<Dd> = {
        let mut v = vec![Dd::ONE; order + 1];
        for i in 1..=order {
            v[i] = v[i - 1] * Dd::new(i as f64);
        }
        v
    };
    (1..=order)
        .map(|k| {
            let mut sum = Dd::ZERO;
            for j in (k + 1) / 2..=k.min(half) {
                let mut num = Dd::ONE;
                for _ in 0..half {
                    num = num * Dd::new(j as f64);
                }
                num = num * fact[2 * j];
                let den = fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
                sum = sum + num / den;
            }
            if (k + half) % 2 == 1 {
                -sum
            } else {
                sum
            }
        })
        .collect()
}

/// Gaver-Stehfest inversion in double-double arithmetic.
pub fn gaver_stehfest_dd<F: Fn(Dd) -> Dd>(f: F, t: f64, order: usize) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("inversion time must be positive, got {t}"));
    }
    let w = stehfest_weights(order);
    let step = crate::dd::LN2 / Dd::new(t);
    let mut acc = Dd::ZERO;
    for (i, wk) in w.iter().enumerate() {
        let z = step * Dd::new((i + 1) as f64);
        let v = f(z);
        if !v.is_finite() {
            return Err(Error::ContourOverflow(format!("non-finite image value at z = {}", z.to_f64())));
        }
        acc = acc + *wk * v;
    }
    Ok((acc * step).to_f64())
}

/// Gaver-Stehfest inversion in plain `f64`; reliable only to about 1e-5
/// and only for small orders.
pub fn gaver_stehfest<F: Fn(f64) -> f64>(f: F, t: f64, order: usize) -> Result<f64> {
    gaver_stehfest_dd(|z| Dd::new(f(z.to_f64())), t, order)
}

fn invert_once(image: &LaplaceImage, t: f64, method: InversionMethod, nodes: usize) -> Result<f64> {
    let sigma = image.abscissa.max(0.0);
    let shift = |v: f64| if sigma > 0.0 { v * (sigma * t).exp() } else { v };
    match method {
        InversionMethod::Talbot => {
            talbot(|z| image.regular(z + sigma), t, nodes).map(shift)
        }
        InversionMethod::GaverStehfest => {
            let w = image.singular_weight;
            match &image.real_dd {
                Some(g) => gaver_stehfest_dd(|z| g(z + Dd::new(sigma)) - Dd::new(w), t, nodes).map(shift),
                None => gaver_stehfest(|z| image.regular(Complex64::new(z + sigma, 0.0)).re, t, nodes.min(16))
                    .map(shift),
            }
        }
    }
}

/// Regular part of `ℒ^{-1}[image](t)`.
///
/// With `cross_check` the other method is also run and the call fails with
/// `InversionDisagreement` when the two differ by more than
/// [`CROSS_CHECK_TOL`] relative.
pub fn inverse_laplace(image: &LaplaceImage, t: f64, cfg: &InversionConfig) -> Result<f64> {
    cfg.validate()?;
    let v = invert_once(image, t, cfg.method, cfg.nodes)?;
    if cfg.cross_check {
        let (other, nodes) = match cfg.method {
            InversionMethod::Talbot => (InversionMethod::GaverStehfest, 32),
            InversionMethod::GaverStehfest => (InversionMethod::Talbot, 32),
        };
        let w = invert_once(image, t, other, nodes)?;
        let scale = v.abs().max(w.abs());
        if (v - w).abs() > CROSS_CHECK_TOL * scale {
            return Err(Error::InversionDisagreement(format!(
                "t = {t}: {:?} gives {v:e}, {:?} gives {w:e}",
                cfg.method, other
            )));
        }
    }
    Ok(v)
}

/// `∫_0^∞ e^{-zt} f(t) dt` by double-exponential quadrature on `(0, T]`,
/// `T = 40/z`, plus a power-law tail `f(t) ≈ f(T)(t/T)^p` beyond `T`.
pub fn forward_laplace<F: Fn(f64) -> f64>(f: F, z: f64, tail_exponent: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("forward transform needs z > 0, got {z}"));
    }
    let big_t = 40.0 / z;
    let g = |t: f64| (-z * t).exp() * f(t);
    let mut total = 0.0;
    let mut lo = 0.0;
    for hi in [0.01 / z, 1.0 / z, 8.0 / z, big_t] {
        total += tanh_sinh(&g, lo, hi, 1e-10)?.value;
        lo = hi;
    }
    // ∫_T^∞ e^{-zt} (t/T)^p dt ≈ e^{-zT}/z · (1 + p/(zT) + p(p-1)/(zT)^2)
    let u = z * big_t;
    let p = tail_exponent;
    let tail = f(big_t) * (-u).exp() / z * (1.0 + p / u + p * (p - 1.0) / (u * u));
    if !total.is_finite() {
        return Err(Error::QuadratureFailure(format!("non-finite forward transform at z = {z}")));
    }
    Ok(total + if tail.is_finite() { tail } else { 0.0 })
}

/// `∫_0^∞ h(ξ) f(ξ, t) dξ` for a nonnegative kernel `f` (a probability
/// density in ξ for each `t`).
///
/// The half-line is split at the kernel's mass concentration point (the
/// kernel median along a coarse log scan) and each piece is integrated with
/// a double-exponential rule, the outer one through `ξ → 1/v`-type
/// exp-sinh mapping.
pub fn efros_compose<H, K>(h: H, kernel_f: K, t: f64) -> Result<f64>
where
    H: Fn(f64) -> f64,
    K: Fn(f64, f64) -> f64,
{
    if !(t > 0.0) {
        return domain(format!("composition time must be positive, got {t}"));
    }
    let k = |x: f64| kernel_f(x, t);
    // locate the peak of ξ k(ξ) on a log scan
    let mut best = (f64::NEG_INFINITY, 1.0);
    for i in -60..=60 {
        let x = 10f64.powf(i as f64 / 6.0);
        let v = x * k(x);
        if v.is_finite() && v > best.0 {
            best = (v, x);
        }
    }
    let c = best.1;
    let integrand = |x: f64| {
        let kv = k(x);
        if kv == 0.0 {
            0.0
        } else {
            h(x) * kv
        }
    };
    let mut total = 0.0;
    let mut lo = 0.0;
    for hi in [c / 8.0, c, 8.0 * c] {
        total += tanh_sinh(&integrand, lo, hi, 1e-10)?.value;
        lo = hi;
    }
    total += exp_sinh(&integrand, lo, 1e-10)?.value;
    if !total.is_finite() {
        return Err(Error::QuadratureFailure(format!("non-finite composition at t = {t}")));
    }
    Ok(total)
}

/// Subordination kernel `f(α; u, t) = t/(α u^{1+1/α}) Φ_α(t u^{-1/α})`,
/// a probability density in `u` for fixed `t`.
pub fn subordination_kernel(alpha: f64, u: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("subordination kernel needs 0 < alpha < 1, got {alpha}"));
    }
    if !(u > 0.0 && t > 0.0) {
        return domain("subordination kernel needs u > 0 and t > 0");
    }
    let arg = t * u.powf(-1.0 / alpha);
    if arg == 0.0 || !arg.is_finite() {
        return Ok(0.0);
    }
    let phi = levy_stable_density(alpha, arg)?;
    // combine in log space: u^{-1-1/α} can overflow for tiny u
    let lg = t.ln() - alpha.ln() - (1.0 + 1.0 / alpha) * u.ln();
    if phi == 0.0 {
        return Ok(0.0);
    }
    Ok((lg + phi.ln()).exp())
}

/// `∫_0^∞ f(α; u, t) du`; equals one for every `t`.
pub fn subordination_mass(alpha: f64, t: f64) -> Result<f64> {
    efros_compose(|_| 1.0, |u, tt| subordination_kernel(alpha, u, tt).unwrap_or(0.0), t)
}
