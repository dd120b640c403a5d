//! Leading-order short- and long-time behaviour of φ(t) and n(t).

use serde::{Deserialize, Serialize};

use super::{ModelKind, ModelSpec};
use crate::error::{domain, Result};
use crate::specfun::gamma::recip_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Response,
    Relaxation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Short,
    Long,
}

/// An asymptotic value. `next_order` is set when the leading coefficient
/// vanishes (its Γ sits at a pole) and the following term is returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptote {
    pub value: f64,
    pub next_order: bool,
}

/// Leading asymptotic form of φ or n at time `t`. The caller decides
/// whether `t/τ` is small or large enough for the form to be meaningful.
pub fn asymptotic(spec: &ModelSpec, which: Quantity, regime: Regime, t: f64) -> Result<Asymptote> {
    spec.validate()?;
    if !(t > 0.0) {
        return domain(format!("time must be positive, got {t}"));
    }
    let c = spec.canonical();
    let (a, b) = (c.alpha, c.beta);
    let ab = a * b;
    let c2 = b * (b + 1.0) / 2.0;
    let g = recip_gamma;
    use ModelKind::*;
    use Quantity::*;
    use Regime::*;
    // (offset, [(coefficient, power of x)]) for the first two terms
    let (offset, terms): (f64, [(f64, f64); 2]) = match (c.kind, which, regime) {
        (KWW, Response, Short) => (0.0, [(a, a - 1.0), (-a, 2.0 * a - 1.0)]),
        (KWW, Relaxation, Short) => (1.0, [(-1.0, a), (0.5, 2.0 * a)]),
        (KWW, _, Long) => return domain("stretched exponential decay has no power-law tail"),
        (JWS | MCD, Response, Short) => (0.0, [(b * g(a), a - 1.0), (-c2 * g(2.0 * a), 2.0 * a - 1.0)]),
        (JWS | MCD, Response, Long) => (0.0, [(-g(-ab), -1.0 - ab), (b * g(-ab - a), -1.0 - ab - a)]),
        (JWS | MCD, Relaxation, Short) => (1.0, [(-b * g(1.0 + a), a), (c2 * g(1.0 + 2.0 * a), 2.0 * a)]),
        (JWS | MCD, Relaxation, Long) => (0.0, [(g(1.0 - ab), -ab), (-b * g(1.0 - ab - a), -ab - a)]),
        (_, Response, Short) => (0.0, [(g(ab), ab - 1.0), (-b * g(ab + a), ab + a - 1.0)]),
        (_, Response, Long) => (0.0, [(-b * g(-a), -1.0 - a), (c2 * g(-2.0 * a), -1.0 - 2.0 * a)]),
        (_, Relaxation, Short) => (1.0, [(-g(1.0 + ab), ab), (b * g(1.0 + ab + a), ab + a)]),
        (_, Relaxation, Long) => (0.0, [(b * g(1.0 - a), -a), (-c2 * g(1.0 - 2.0 * a), -2.0 * a)]),
    };
    let x = t / c.tau;
    let unit = if which == Response { 1.0 / c.tau } else { 1.0 };
    for (i, &(coef, p)) in terms.iter().enumerate() {
        if coef != 0.0 {
            return Ok(Asymptote { value: unit * (offset + coef * x.powf(p)), next_order: i > 0 });
        }
    }
    domain(format!("{} has no algebraic {regime:?}-time {which:?} asymptote", c.kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{relaxation, response};

    #[test]
    fn examples() {
        let d = ModelSpec::hn(1.0, 1.0, 2.0).unwrap();
        let v = asymptotic(&d, Quantity::Response, Regime::Short, 1e-3).unwrap();
        assert!((v.value - 0.5).abs() < 1e-15 && !v.next_order);
        let h = ModelSpec::hn(0.5, 0.5, 1.0).unwrap();
        let v = asymptotic(&h, Quantity::Relaxation, Regime::Long, 1e4).unwrap().value;
        assert!((v - 2.8209e-3).abs() < 1e-7);
        let exact = relaxation(&h, 1e4).unwrap();
        assert!((exact / v - 1.0).abs() < 0.02);
        let j = ModelSpec::jws(0.5, 0.5, 1.0).unwrap();
        let v = asymptotic(&j, Quantity::Relaxation, Regime::Short, 1e-300).unwrap();
        assert!((v.value - 1.0).abs() < 1e-100);
        assert!(asymptotic(&ModelSpec::cd(0.5, 1.0).unwrap(), Quantity::Relaxation, Regime::Long, 1e4).is_err());
    }

    #[test]
    fn pole_falls_back_to_next_order() {
        // αβ = 1: Γ(-αβ) is at a pole for the long-time JWS response
        let j = ModelSpec::jws(0.5, 2.0, 1.0).unwrap();
        let v = asymptotic(&j, Quantity::Response, Regime::Long, 1e4).unwrap();
        assert!(v.next_order);
        let exact = response(&j, 1e4).unwrap().regular;
        assert!((exact / v.value - 1.0).abs() < 0.05, "{exact} {}", v.value);
    }
}
