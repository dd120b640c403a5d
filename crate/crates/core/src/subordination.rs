//! Relaxation functions rebuilt as subordinated processes.
//!
//! Two routes are offered. Either the Debye law `e^{-Bξ}` is run on the
//! operational time whose density has image `Ψ̂(s)/s · e^{-ξΨ̂(s)}`, or a
//! parent with `α = 1` (CD for the HN family, MCD for JWS, Debye for CC) is
//! run on the inverse α-stable time `f(α; u, t)`, with time constant `τ^α`.
//! Both must reproduce the direct relaxation function.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::laplace::{efros_compose, subordination_kernel, talbot};
use crate::models::{relaxation, ModelKind, ModelSpec};
use crate::util::{expm1_c, ln1p_c};

/// Talbot nodes for the operational-time density.
const NODES: usize = 32;

fn exponent(spec: &ModelSpec, w: Complex64) -> Complex64 {
    let (a, b) = (spec.alpha, spec.beta);
    let wa = if a == 1.0 { w } else { (a * w.ln()).exp() };
    match spec.kind {
        ModelKind::Debye => w,
        ModelKind::CC => wa,
        ModelKind::CD | ModelKind::HN => expm1_c(b * ln1p_c(wa)),
        _ => 1.0 / expm1_c(b * ln1p_c(1.0 / wa)),
    }
}

fn check(spec: &ModelSpec, t: f64) -> Result<ModelSpec> {
    spec.validate()?;
    if spec.kind == ModelKind::KWW {
        return domain("KWW has no closed-form subordinator");
    }
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("composition time must be positive, got {t}"));
    }
    Ok(spec.canonical())
}

/// Density in `ξ` of the operational time at physical time `t`, for
/// rate `B = 1/τ`; `ξ` is measured in units of `τ`.
pub fn operational_time_density(spec: &ModelSpec, xi: f64, t: f64) -> Result<f64> {
    let c = check(spec, t)?;
    if !(xi >= 0.0) {
        return domain(format!("operational time must be nonnegative, got {xi}"));
    }
    let image = |w: Complex64| {
        let p = exponent(&c, w);
        p / w * (-xi * p).exp()
    };
    talbot(image, t / c.tau, NODES)
}

/// `n(t) = ∫_0^∞ e^{-ξ} f_Ψ(ξ, t) dξ`.
pub fn compose_debye_parent(spec: &ModelSpec, t: f64) -> Result<f64> {
    let c = check(spec, t)?;
    efros_compose(
        |xi| (-xi).exp(),
        |xi, tt| operational_time_density(&c, xi, tt).unwrap_or(f64::NAN),
        t,
    )
}

/// The `α = 1` member of the family, with time constant `τ^α`.
pub fn stable_parent(spec: &ModelSpec) -> Result<ModelSpec> {
    let c = spec.canonical();
    let tau = c.tau.powf(c.alpha);
    match c.kind {
        ModelKind::CC => ModelSpec::debye(tau),
        ModelKind::HN => ModelSpec::cd(c.beta, tau),
        ModelKind::JWS => ModelSpec::mcd(c.beta, tau),
        _ => domain(format!("{} has no stable-subordinated parent (alpha must be below 1)", c.kind)),
    }
}

/// `n(t) = ∫_0^∞ n_parent(u) f(α; u, t) du` with the parent from
/// [`stable_parent`].
pub fn compose_stable_parent(spec: &ModelSpec, t: f64) -> Result<f64> {
    let c = check(spec, t)?;
    let parent = stable_parent(&c)?;
    let a = c.alpha;
    efros_compose(
        |u| relaxation(&parent, u).unwrap_or(f64::NAN),
        |u, tt| subordination_kernel(a, u, tt).unwrap_or(0.0),
        t,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn debye_operational_time_is_a_point_mass_limit() {
        // CC: f_Ψ(ξ, t) is the inverse-stable density in ξ at time t
        let spec = ModelSpec::cc(0.5, 1.0).unwrap();
        let a = operational_time_density(&spec, 0.7, 2.0).unwrap();
        let b = subordination_kernel(0.5, 0.7, 2.0).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} {b}");
    }

    #[test]
    fn compositions_reproduce_relaxation() {
        for spec in [ModelSpec::hn(0.5, 0.5, 1.0).unwrap(), ModelSpec::jws(0.5, 0.5, 1.0).unwrap()] {
            for t in [0.2, 1.0, 5.0] {
                let n = relaxation(&spec, t).unwrap();
                let d = compose_debye_parent(&spec, t).unwrap();
                let s = compose_stable_parent(&spec, t).unwrap();
                assert!((n - d).abs() < 1e-6 && (n - s).abs() < 1e-6, "{:?} t={t}: {n} {d} {s}", spec.kind);
            }
        }
    }
}
