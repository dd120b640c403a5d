//! The three-parameter Mittag-Leffler (Prabhakar) function
//! `E^ν_{α,μ}(z) = Σ_k (ν)_k z^k / (k! Γ(αk + μ))` on the negative real axis.
//!
//! Four independent representations are available: the power series, the
//! algebraic asymptotic series, contour inversion of the Laplace pair
//! `t^{μ-1} E^ν_{α,μ}(-t^α) ÷ s^{αν-μ} (1 + s^α)^{-ν}`, and (for rational α)
//! a finite sum of hypergeometric series. The automatic strategy picks by
//! the dimensionless time `s = x^{1/α}` and cross-checks in the handoff band.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::laplace::talbot;
use crate::util::ln1p_c;

use super::gamma::{is_gamma_pole, ln_gamma_signed, recip_gamma};
use super::hyper::{pfq_sum, EvalStrategy, SeriesSum, StrategyKind};

/// Index triple of `E^ν_{α,μ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrabhakarParams {
    pub alpha: f64,
    pub mu: f64,
    pub nu: f64,
}

impl PrabhakarParams {
    pub fn new(alpha: f64, mu: f64, nu: f64) -> Result<Self> {
        let p = PrabhakarParams { alpha, mu, nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return domain(format!("Prabhakar order alpha must be positive, got {}", self.alpha));
        }
        if !self.mu.is_finite() || !self.nu.is_finite() {
            return domain("Prabhakar indices must be finite");
        }
        Ok(())
    }
}

/// Rational order `α = l/k` in lowest terms with `0 < l ≤ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalOrder {
    pub l: u32,
    pub k: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RationalOrder {
    pub fn new(l: u32, k: u32) -> Result<Self> {
        if l == 0 || l > k {
            return domain(format!("rational order needs 0 < l <= k, got {l}/{k}"));
        }
        if gcd(l, k) != 1 {
            return domain(format!("rational order {l}/{k} is not in lowest terms"));
        }
        Ok(RationalOrder { l, k })
    }

    pub fn value(&self) -> f64 {
        self.l as f64 / self.k as f64
    }

    /// Recognise `alpha` as `l/k` with a small denominator.
    pub fn from_f64(alpha: f64) -> Option<Self> {
        (1..=48u32).find_map(|k| {
            let l = (alpha * k as f64).round();
            if l >= 1.0 && l <= k as f64 && (l / k as f64 - alpha).abs() < 1e-14 {
                RationalOrder::new(l as u32, k).ok()
            } else {
                None
            }
        })
    }
}

/// Condition number beyond which the power series is not trusted by the
/// automatic strategy.
const SERIES_CONDITION_LIMIT: f64 = 1e5;
/// Below this dimensionless time the asymptotic series is never tried.
const ASYMPTOTIC_START: f64 = 40.0;
const CONTOUR_NODES: usize = 32;

/// `x^k / Γ(αk + μ)` with sign, falling back to logarithms when the direct
/// form would overflow.
fn power_over_gamma(x: f64, k: i32, arg: f64) -> f64 {
    if is_gamma_pole(arg) {
        return 0.0;
    }
    if arg < 170.0 {
        let p = x.powi(k);
        if p.is_finite() && p != 0.0 {
            return p * recip_gamma(arg);
        }
    }
    let (lg, sg) = ln_gamma_signed(arg);
    sg * (k as f64 * x.ln() - lg).exp()
}

fn series(a: f64, mu: f64, nu: f64, x: f64, s: f64, st: &EvalStrategy) -> Result<SeriesSum> {
    let tol = st.rel_tolerance;
    // terms grow until k ≈ s/α
    let k_peak = (s / a).ceil() as usize + 2;
    let mut c: f64 = 1.0; // (ν)_k / k!
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut small = 0;
    for k in 0..st.series_max_terms {
        let term = c * power_over_gamma(x, k as i32, a * k as f64 + mu) * if k % 2 == 1 { -1.0 } else { 1.0 };
        sum += term;
        abs_sum += term.abs();
        c *= (nu + k as f64) / (k as f64 + 1.0);
        if c == 0.0 {
            // ν is a nonpositive integer: the series is a polynomial
            return Ok(SeriesSum { value: sum, condition: abs_sum / sum.abs() });
        }
        if k > k_peak && term.abs() <= tol * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(SeriesSum { value: sum, condition: abs_sum / sum.abs() });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent(format!(
        "Prabhakar series (alpha={a}, mu={mu}, nu={nu}) at x={x} needs more than {} terms",
        st.series_max_terms
    )))
}

/// α = 1: `E^ν_{1,μ}(-x) = e^{-x} Σ_r (μ-ν)_r x^r / (r! Γ(μ+r))` (Kummer's
/// transformation), a sum with no cancellation. Far out, the algebraic
/// expansion `x^{-ν}/Γ(μ-ν) Σ_k (ν)_k (1+ν-μ)_k / k! x^{-k}` is used.
fn kummer(mu: f64, nu: f64, x: f64, st: &EvalStrategy) -> Result<f64> {
    let a = mu - nu;
    let finite = is_gamma_pole(a);
    if x <= 500.0 || finite {
        let mut c: f64 = 1.0; // (a)_r / r!
        let mut sum = 0.0;
        let mut small = 0;
        let cap = if finite { (-a) as usize + 1 } else { st.series_max_terms };
        for r in 0..cap {
            let arg = mu + r as f64;
            let term = if is_gamma_pole(arg) || c == 0.0 {
                0.0
            } else {
                let (lg, sg) = ln_gamma_signed(arg);
                c.signum() * sg * (c.abs().ln() + r as f64 * x.ln() - lg - x).exp()
            };
            let term = if r == 0 && x == 0.0 { recip_gamma(mu) } else { term };
            sum += term;
            c *= (a + r as f64) / (r as f64 + 1.0);
            if finite {
                continue;
            }
            if r as f64 > x && term.abs() <= st.rel_tolerance * sum.abs() {
                small += 1;
                if small >= 3 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        if finite {
            return Ok(sum);
        }
        return Err(Error::NonConvergent(format!("Kummer series at x={x} did not converge")));
    }
    let lead = x.powf(-nu) * recip_gamma(mu - nu);
    let mut term: f64 = 1.0;
    let mut sum = 1.0;
    for k in 0..200 {
        let kf = k as f64;
        let next = term * (nu + kf) * (1.0 + nu - mu + kf) / ((kf + 1.0) * x);
        if next.abs() >= term.abs() && k > 0 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(lead * sum)
}

/// Algebraic asymptotic series for 0 < α < 1, truncated at its smallest
/// term. Returns `(value, error estimate)`.
fn asymptotic(a: f64, mu: f64, nu: f64, x: f64) -> (f64, f64) {
    let mut c: f64 = 1.0; // (ν)_k / k!
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let lx = x.ln();
    for k in 0..400 {
        if c == 0.0 {
            return (sum, 0.0);
        }
        let kf = k as f64;
        let arg = mu - a * (nu + kf);
        let term = if is_gamma_pole(arg) {
            0.0
        } else {
            let (lg, sg) = ln_gamma_signed(arg);
            let sign = c.signum() * sg * if k % 2 == 1 { -1.0 } else { 1.0 };
            sign * (c.abs().ln() - (nu + kf) * lx - lg).exp()
        };
        if term != 0.0 {
            if term.abs() > last {
                return (sum, term.abs());
            }
            last = term.abs();
            sum += term;
        }
        c *= (nu + kf) / (kf + 1.0);
    }
    (sum, last)
}

/// Contour inversion of `s^{αν-μ}(1+s^α)^{-ν}` at `t = s_val`.
fn contour(a: f64, mu: f64, nu: f64, t: f64) -> Result<f64> {
    if nu == 0.0 {
        return Ok(recip_gamma(mu));
    }
    if mu < 0.0 {
        // E^ν_{α,μ} = αν E^{ν+1}_{α,μ+1} - (αν - μ) E^ν_{α,μ+1}
        let e1 = contour(a, mu + 1.0, nu + 1.0, t)?;
        let e0 = contour(a, mu + 1.0, nu, t)?;
        return Ok(a * nu * e1 - (a * nu - mu) * e0);
    }
    let subtract = if mu == 0.0 { 1.0 } else { 0.0 };
    let image = |z: Complex64| {
        let lz = z.ln();
        let w = (a * lz).exp();
        // s^{αν-μ} (1+s^α)^{-ν}; for large |s| write it as s^{-μ}(1+s^{-α})^{-ν}
        let log_img = if w.norm() > 1.0 {
            -mu * lz - nu * ln1p_c(1.0 / w)
        } else {
            (a * nu - mu) * lz - nu * ln1p_c(w)
        };
        log_img.exp() - subtract
    };
    let f = talbot(image, t, CONTOUR_NODES)?;
    Ok(f * t.powf(1.0 - mu))
}

fn rational(order: RationalOrder, mu: f64, nu: f64, x: f64, st: &EvalStrategy) -> Result<f64> {
    let (l, k) = (order.l as usize, order.k as usize);
    let lf = l as f64;
    let kf = k as f64;
    let arg = (if k % 2 == 1 { -1.0 } else { 1.0 }) * x.powi(k as i32) / lf.powi(l as i32);
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut c = 1.0; // (ν)_j / j!
    for j in 0..k {
        let jf = j as f64;
        let cj = mu + lf * jf / kf;
        if is_gamma_pole(cj) {
            return domain(format!("rational reduction: Gamma pole at {cj}"));
        }
        let coef = c * power_over_gamma(x, j as i32, cj) * if j % 2 == 1 { -1.0 } else { 1.0 };
        c *= (nu + jf) / (jf + 1.0);
        if coef == 0.0 {
            continue;
        }
        let mut num = vec![1.0];
        num.extend((0..k).map(|i| (nu + jf + i as f64) / kf));
        let mut den: Vec<f64> = (0..k).map(|i| (1.0 + jf + i as f64) / kf).collect();
        den.extend((0..l).map(|i| (cj + i as f64) / lf));
        let s = pfq_sum(&num, &den, arg, st)?;
        total += coef * s.value;
        abs_total += coef.abs() * s.value.abs() * s.condition;
    }
    if abs_total > 1e6 * total.abs() {
        return domain(format!(
            "rational reduction at x={x}: cancellation {:.1e} outside safeguard",
            abs_total / total.abs()
        ));
    }
    Ok(total)
}

fn eval(p: &PrabhakarParams, x: f64, s: f64, st: &EvalStrategy) -> Result<f64> {
    p.validate()?;
    st.validate()?;
    if !(x >= 0.0) {
        return domain(format!("Prabhakar argument must be -x with x >= 0, got x = {x}"));
    }
    let (a, mu, nu) = (p.alpha, p.mu, p.nu);
    if x == 0.0 || nu == 0.0 {
        return Ok(recip_gamma(mu));
    }
    if !x.is_finite() {
        return domain("infinite argument");
    }
    match st.kind {
        StrategyKind::PowerSeries => series(a, mu, nu, x, s, st).and_then(|r| {
            if r.condition > SERIES_CONDITION_LIMIT {
                Err(Error::NonConvergent(format!("series cancellation {:.1e} at x={x}", r.condition)))
            } else {
                Ok(r.value)
            }
        }),
        StrategyKind::AsymptoticSeries => {
            if a >= 1.0 {
                return domain("asymptotic series implemented for 0 < alpha < 1");
            }
            let (v, err) = asymptotic(a, mu, nu, x);
            if v == 0.0 || !(err <= 1e-3 * v.abs()) {
                return Err(Error::NonConvergent(format!("asymptotic series not accurate at x={x}")));
            }
            Ok(v)
        }
        StrategyKind::ContourInversion => {
            if a > 1.0 {
                return domain("contour inversion implemented for alpha <= 1");
            }
            contour(a, mu, nu, s)
        }
        StrategyKind::HypergeometricReduction => match RationalOrder::from_f64(a) {
            Some(o) => rational(o, mu, nu, x, st),
            None => domain(format!("alpha = {a} is not a rational l/k with small k")),
        },
        StrategyKind::AutoSwitch => auto(a, mu, nu, x, s, st),
    }
}

fn auto(a: f64, mu: f64, nu: f64, x: f64, s: f64, st: &EvalStrategy) -> Result<f64> {
    if a == 1.0 {
        return kummer(mu, nu, x, st);
    }
    if a > 1.0 {
        let r = series(a, mu, nu, x, s, st)?;
        if r.condition > SERIES_CONDITION_LIMIT {
            return Err(Error::NonConvergent(format!("alpha > 1 series cancellation at x={x}")));
        }
        return Ok(r.value);
    }
    let cross = st.crossover_magnitude;
    if s <= cross {
        if let Ok(r) = series(a, mu, nu, x, s, st) {
            if r.condition <= SERIES_CONDITION_LIMIT {
                if s >= 0.6 * cross {
                    let c = contour(a, mu, nu, s)?;
                    let guard = (10.0 * st.rel_tolerance).max(1e-8);
                    let scale = r.value.abs().max(1e-4 * r.value.abs() * r.condition);
                    if (c - r.value).abs() > guard * scale {
                        return Err(Error::StrategyDisagreement(format!(
                            "E(alpha={a}, mu={mu}, nu={nu}; -{x}): series {} vs contour {c}",
                            r.value
                        )));
                    }
                }
                return Ok(r.value);
            }
        }
    }
    if s >= ASYMPTOTIC_START {
        let (v, err) = asymptotic(a, mu, nu, x);
        if v != 0.0 && err <= 10.0 * st.rel_tolerance * v.abs() {
            return Ok(v);
        }
    }
    contour(a, mu, nu, s)
}

/// `E^ν_{α,μ}(-x)` for `x ≥ 0`.
pub fn prabhakar(params: PrabhakarParams, x: f64, strategy: &EvalStrategy) -> Result<f64> {
    let s = if params.alpha == 1.0 { x } else { x.powf(1.0 / params.alpha) };
    eval(&params, x, s, strategy)
}

/// `E^ν_{α,μ}(-t^α)` for `t ≥ 0`; avoids the round trip through `x^{1/α}`.
pub fn prabhakar_t(params: PrabhakarParams, t: f64, strategy: &EvalStrategy) -> Result<f64> {
    let x = if params.alpha == 1.0 { t } else { t.powf(params.alpha) };
    eval(&params, x, t, strategy)
}

/// Shorthand: `E^ν_{α,μ}(-t^α)` with the default strategy.
pub fn ml(alpha: f64, mu: f64, nu: f64, t: f64) -> Result<f64> {
    prabhakar_t(PrabhakarParams { alpha, mu, nu }, t, &EvalStrategy::default())
}

/// `E^ν_{α,μ}(-x)` for rational `α = l/k` via the finite sum of `k`
/// hypergeometric series of argument `(-x)^k / l^l`.
pub fn prabhakar_rational(order: RationalOrder, mu: f64, nu: f64, x: f64, strategy: &EvalStrategy) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("argument must be -x with x >= 0, got x = {x}"));
    }
    if x == 0.0 {
        return Ok(recip_gamma(mu));
    }
    rational(order, mu, nu, x, strategy)
}

/// `d/dx [x^{μ-1} E^ν_{α,μ}(λ x^α)] = x^{μ-2} E^ν_{α,μ-1}(λ x^α)`, for `λ ≤ 0`.
pub fn prabhakar_derivative(params: PrabhakarParams, lambda: f64, x: f64, strategy: &EvalStrategy) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("derivative needs x > 0, got {x}"));
    }
    if lambda > 0.0 {
        return domain("only non-positive scales are supported (negative-argument Prabhakar)");
    }
    let shifted = PrabhakarParams { mu: params.mu - 1.0, ..params };
    let e = if lambda == 0.0 {
        recip_gamma(shifted.mu)
    } else {
        // λ x^α = -(c x)^α with c = (-λ)^{1/α}
        let t = (-lambda).powf(1.0 / params.alpha) * x;
        prabhakar_t(shifted, t, strategy)?
    };
    Ok(x.powf(params.mu - 2.0) * e)
}
