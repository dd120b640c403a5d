//! Self-verification suites: algebraic identities, duality, densities,
//! subordination, complete monotonicity, asymptotics and the qualitative
//! shape of the classic figure families. Every check reports its largest
//! observed error against a tolerance; all runs are deterministic.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitio::{Grid, Spacing};
use crate::kernels::{caputo_rl_pair, evolution_residual, memory_k_hat, memory_m_hat, KernelConfig};
use crate::laplace::{forward_laplace, subordination_kernel};
use crate::models::{
    asymptotic, pdf_cc, pdf_g, pdf_hn_hyper, pdf_hn_trig, pdf_jws_hyper, pdf_jws_trig, pdf_laplace, pdf_mass,
    relaxation, response, response_derivative, spectral, ModelKind, ModelSpec, Quantity, Regime,
};
use crate::quad::{exp_sinh, tanh_sinh};
use crate::specfun::{levy_stable_density, ml, RationalOrder};
use crate::subordination::{compose_debye_parent, compose_stable_parent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Sonine,
    Duality,
    Pdf,
    Subordination,
    Cm,
    Asymptotics,
    Figures,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Sonine, Suite::Duality, Suite::Pdf, Suite::Subordination, Suite::Cm, Suite::Asymptotics, Suite::Figures];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Sonine => "sonine",
            Suite::Duality => "duality",
            Suite::Pdf => "pdf",
            Suite::Subordination => "subordination",
            Suite::Cm => "cm",
            Suite::Asymptotics => "asymptotics",
            Suite::Figures => "figures",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}'")))
    }
}

/// Outcome of one check. `max_error` is `None` when the check could not be
/// evaluated (the reason is in `detail`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    /// Replaces every check's own tolerance when set.
    pub tolerance: Option<f64>,
}

type Probe = Box<dyn Fn() -> Result<f64> + Send + Sync>;

struct Spec {
    suite: Suite,
    name: String,
    tolerance: f64,
    probe: Probe,
}

fn check(suite: Suite, name: impl Into<String>, tolerance: f64, probe: impl Fn() -> Result<f64> + Send + Sync + 'static) -> Spec {
    Spec { suite, name: name.into(), tolerance, probe: Box::new(probe) }
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    Grid { start: a, stop: b, points: n, spacing: Spacing::Log }.values()
}

fn lin_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    Grid { start: a, stop: b, points: n, spacing: Spacing::Linear }.values()
}

fn max_over(xs: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    xs.iter().try_fold(0.0f64, |m, &x| Ok(m.max(f(x)?)))
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn label(s: &ModelSpec) -> String {
    match s.kind {
        ModelKind::Debye => "debye".into(),
        ModelKind::CC | ModelKind::KWW => format!("{}({})", s.kind, s.alpha),
        ModelKind::CD | ModelKind::MCD => format!("{}({})", s.kind, s.beta),
        _ => format!("{}({},{:.4})", s.kind, s.alpha, s.beta),
    }
}

fn kernel_models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::debye(1.0).unwrap(),
        ModelSpec::cc(0.6, 1.0).unwrap(),
        ModelSpec::cd(0.4, 1.0).unwrap(),
        ModelSpec::mcd(0.4, 1.0).unwrap(),
        ModelSpec::hn(0.5, 0.5, 1.0).unwrap(),
        ModelSpec::jws(0.5, 0.5, 1.0).unwrap(),
    ]
}

fn sonine() -> Vec<Spec> {
    let mut out = Vec::new();
    for spec in kernel_models() {
        out.push(check(Suite::Sonine, format!("sonine/{}", label(&spec)), 1e-14, move || {
            let cfg = KernelConfig::new(spec).with_rate(2.5);
            max_over(&log_grid(1e-3, 1e3, 61), |s| {
                Ok((s * memory_m_hat(&cfg, s)? * memory_k_hat(&cfg, s)? - 1.0).abs())
            })
        }));
    }
    let grid = lin_grid(0.1, 5.0, 11);
    for spec in [ModelSpec::hn(0.5, 0.5, 1.0), ModelSpec::hn(0.75, 1.0 / 3.0, 1.0), ModelSpec::jws(0.5, 0.5, 1.0), ModelSpec::jws(0.75, 1.0 / 3.0, 1.0)] {
        let spec = spec.unwrap();
        let g = grid.clone();
        out.push(check(Suite::Sonine, format!("evolution/{}", label(&spec)), 1e-4, move || {
            evolution_residual(&KernelConfig::new(spec), &g)
        }));
    }
    for spec in [ModelSpec::hn(0.5, 0.5, 1.0), ModelSpec::hn(0.75, 1.0 / 3.0, 1.0)] {
        let spec = spec.unwrap();
        let g = grid.clone();
        out.push(check(Suite::Sonine, format!("caputo_rl/{}", label(&spec)), 1e-4, move || {
            max_over(&g, |t| {
                let (c, r) = caputo_rl_pair(&spec, t)?;
                Ok((c - r).abs())
            })
        }));
    }
    out
}

const DUAL_PAIRS: [(f64, f64); 3] = [(0.3, 0.5), (0.5, 0.5), (0.75, 1.0 / 3.0)];

fn duality() -> Vec<Spec> {
    let mut out = Vec::new();
    for (a, b) in DUAL_PAIRS {
        out.push(check(Suite::Duality, format!("spectral/jws({a},{b:.4})"), 1e-12, move || {
            let spec = ModelSpec::jws(a, b, 1.0)?;
            max_over(&log_grid(1e-3, 1e3, 30), |w| {
                let iw = Complex64::new(0.0, w);
                let mirror = (1.0 + iw.powf(-a)).powf(-b);
                Ok((spectral(&spec, w)? + mirror - 1.0).norm())
            })
        }));
        out.push(check(Suite::Duality, format!("relaxation/jws({a},{b:.4})"), 1e-6, move || {
            let spec = ModelSpec::jws(a, b, 1.0)?;
            // the hidden unit atom of u^{-1}E^β_{α,0} contributes the 1
            max_over(&log_grid(1e-2, 1e2, 30), |t| {
                let q = tanh_sinh(|u| ml(a, 0.0, b, u).unwrap_or(f64::NAN) / u, 0.0, t, 1e-12)?;
                Ok((relaxation(&spec, t)? - (1.0 + q.value)).abs())
            })
        }));
    }
    out
}

fn valid_density_specs() -> Vec<ModelSpec> {
    let mut v = vec![ModelSpec::cc(0.3, 1.0).unwrap(), ModelSpec::cc(0.7, 1.0).unwrap(), ModelSpec::cd(0.4, 1.0).unwrap(), ModelSpec::mcd(0.4, 1.0).unwrap()];
    for (a, b) in [(0.3, 0.5), (0.5, 0.5), (0.75, 1.0 / 3.0), (0.5, 2.0), (0.8, 1.2)] {
        v.push(ModelSpec::hn(a, b, 1.0).unwrap());
        v.push(ModelSpec::jws(a, b, 1.0).unwrap());
    }
    v
}

fn pdf() -> Vec<Spec> {
    let mut out = Vec::new();
    let xi = log_grid(1e-4, 1e4, 161);
    for spec in valid_density_specs() {
        let g = xi.clone();
        out.push(check(Suite::Pdf, format!("nonnegative/{}", label(&spec)), 0.0, move || {
            max_over(&g, |x| Ok((-pdf_g(&spec, x)?).max(0.0)))
        }));
        out.push(check(Suite::Pdf, format!("mass/{}", label(&spec)), 1e-6, move || Ok((pdf_mass(&spec)? - 1.0).abs())));
    }
    out.push(check(Suite::Pdf, "support/cd(0.4)", 0.0, || {
        let s = ModelSpec::cd(0.4, 1.0)?;
        max_over(&lin_grid(1e-3, 1.0, 101), |x| Ok(pdf_g(&s, x)?.abs()))
    }));
    out.push(check(Suite::Pdf, "support/mcd(0.4)", 0.0, || {
        let s = ModelSpec::mcd(0.4, 1.0)?;
        max_over(&log_grid(1.0, 1e3, 101), |x| Ok(pdf_g(&s, x)?.abs()))
    }));
    for a in [0.3, 0.5, 0.8] {
        let g = xi.clone();
        out.push(check(Suite::Pdf, format!("hn_beta1_is_cc/{a}"), 1e-12, move || {
            max_over(&g, |x| Ok(rel(pdf_hn_trig(a, 1.0, x), pdf_cc(a, x))))
        }));
    }
    for (l, k, b) in [(1, 2, 0.5), (1, 3, 0.7), (2, 3, 0.5), (3, 4, 1.0 / 3.0), (3, 4, 1.0)] {
        out.push(check(Suite::Pdf, format!("trig_vs_hyper/hn({l}/{k},{b:.4})"), 1e-9, move || {
            let o = RationalOrder::new(l, k)?;
            let a = o.value();
            max_over(&log_grid(1.5, 1e3, 40), |x| Ok(rel(pdf_hn_hyper(o, b, x)?, pdf_hn_trig(a, b, x))))
        }));
        out.push(check(Suite::Pdf, format!("trig_vs_hyper/jws({l}/{k},{b:.4})"), 1e-9, move || {
            let o = RationalOrder::new(l, k)?;
            let a = o.value();
            max_over(&log_grid(1e-3, 0.67, 40), |x| Ok(rel(pdf_jws_hyper(o, b, x)?, pdf_jws_trig(a, b, x))))
        }));
    }
    // the β > 1/α regime must show a negative lobe; report how far above
    // zero the minimum stays (0 when the lobe is there)
    out.push(check(Suite::Pdf, "negative_lobe/hn(0.75,2.3333)", 0.0, || {
        let s = ModelSpec::with_override(ModelKind::HN, 0.75, 7.0 / 3.0, 1.0)?;
        let min = log_grid(1e-3, 1e3, 200).into_iter().try_fold(f64::INFINITY, |m, x| Ok::<_, Error>(m.min(pdf_g(&s, x)?)))?;
        Ok(min.max(0.0))
    }));
    let mix = [
        ModelSpec::hn(0.5, 0.5, 1.0),
        ModelSpec::jws(0.5, 0.5, 1.0),
        ModelSpec::cc(0.7, 1.0),
        ModelSpec::cd(0.4, 1.0),
        ModelSpec::mcd(0.4, 1.0),
    ];
    for spec in mix {
        let spec = spec.unwrap();
        out.push(check(Suite::Pdf, format!("mixture/{}", label(&spec)), 1e-5, move || {
            max_over(&[0.1, 1.0, 10.0], |t| Ok((pdf_laplace(&spec, t)? - relaxation(&spec, t)?).abs()))
        }));
    }
    out
}

fn subordination() -> Vec<Spec> {
    let mut out = Vec::new();
    for spec in [ModelSpec::hn(0.5, 0.5, 1.0).unwrap(), ModelSpec::jws(0.5, 0.5, 1.0).unwrap()] {
        out.push(check(Suite::Subordination, format!("debye_parent/{}", label(&spec)), 1e-5, move || {
            max_over(&[0.2, 1.0, 5.0], |t| Ok((compose_debye_parent(&spec, t)? - relaxation(&spec, t)?).abs()))
        }));
        out.push(check(Suite::Subordination, format!("stable_parent/{}", label(&spec)), 1e-5, move || {
            max_over(&[0.2, 1.0, 5.0], |t| Ok((compose_stable_parent(&spec, t)? - relaxation(&spec, t)?).abs()))
        }));
        out.push(check(Suite::Subordination, format!("parents_agree/{}", label(&spec)), 1e-5, move || {
            max_over(&[0.2, 1.0, 5.0], |t| Ok((compose_stable_parent(&spec, t)? - compose_debye_parent(&spec, t)?).abs()))
        }));
    }
    for a in [0.3, 0.5, 0.8] {
        out.push(check(Suite::Subordination, format!("levy_mass/{a}"), 1e-6, move || {
            let f = |x: f64| levy_stable_density(a, x).unwrap_or(f64::NAN);
            let q = tanh_sinh(f, 0.0, 1.0, 1e-12)?.value + exp_sinh(f, 1.0, 1e-12)?.value;
            Ok((q - 1.0).abs())
        }));
        out.push(check(Suite::Subordination, format!("levy_laplace/{a}"), 1e-7, move || {
            max_over(&[0.5, 1.0, 2.0], |z| {
                let v = forward_laplace(|x| levy_stable_density(a, x).unwrap_or(f64::NAN), z, -1.0 - a)?;
                Ok((v - (-z.powf(a)).exp()).abs())
            })
        }));
        out.push(check(Suite::Subordination, format!("kernel_mass/{a}"), 1e-6, move || {
            max_over(&[0.2, 1.0, 5.0], |t| {
                let f = |u: f64| subordination_kernel(a, u, t).unwrap_or(0.0);
                let q = tanh_sinh(f, 0.0, t, 1e-12)?.value + exp_sinh(f, t, 1e-12)?.value;
                Ok((q - 1.0).abs())
            })
        }));
    }
    out
}

fn cm_specs() -> Vec<ModelSpec> {
    let mut v = vec![
        ModelSpec::debye(1.0).unwrap(),
        ModelSpec::cc(0.4, 1.0).unwrap(),
        ModelSpec::cd(0.4, 1.0).unwrap(),
        ModelSpec::mcd(0.4, 1.0).unwrap(),
        ModelSpec::kww(0.6, 1.0).unwrap(),
    ];
    for (a, b) in [(0.3, 0.7), (0.5, 0.5), (0.75, 1.0 / 3.0), (0.9, 1.0)] {
        v.push(ModelSpec::hn(a, b, 1.0).unwrap());
        v.push(ModelSpec::jws(a, b, 1.0).unwrap());
    }
    v
}

fn cm() -> Vec<Spec> {
    cm_specs()
        .into_iter()
        .map(|spec| {
            check(Suite::Cm, format!("signs/{}", label(&spec)), 0.0, move || {
                // size of the worst sign violation of (n, n', n'') = (+, -, +)
                max_over(&log_grid(1e-3, 1e3, 50), |t| {
                    let n = relaxation(&spec, t)?;
                    let d1 = -response(&spec, t)?.regular;
                    let d2 = -response_derivative(&spec, t)?;
                    Ok((-n).max(d1).max(-d2).max(0.0))
                })
            })
        })
        .collect()
}

fn asymptotics() -> Vec<Spec> {
    let mut out = Vec::new();
    for spec in [ModelSpec::hn(0.75, 1.0 / 3.0, 1.0).unwrap(), ModelSpec::jws(0.75, 1.0 / 3.0, 1.0).unwrap()] {
        for (regime, t, tol) in [(Regime::Short, 1e-4, 0.01), (Regime::Long, 1e4, 0.02)] {
            for which in [Quantity::Response, Quantity::Relaxation] {
                let name = format!("{}/{:?}/{:?}", label(&spec), which, regime).to_lowercase();
                out.push(check(Suite::Asymptotics, name, tol, move || {
                    let lead = asymptotic(&spec, which, regime, t)?.value;
                    Ok(match which {
                        Quantity::Response => rel(response(&spec, t)?.regular, lead),
                        // short times: compare the departures from 1
                        Quantity::Relaxation if regime == Regime::Short => rel(1.0 - relaxation(&spec, t)?, 1.0 - lead),
                        Quantity::Relaxation => rel(relaxation(&spec, t)?, lead),
                    })
                }));
            }
        }
    }
    out
}

fn figures() -> Vec<Spec> {
    let mut out = Vec::new();
    out.push(check(Suite::Figures, "unimodal/hn(0.5,3)", 0.0, || {
        let s = ModelSpec::with_override(ModelKind::HN, 0.5, 3.0, 1.0)?;
        let g = log_grid(1e-3, 1e2, 200);
        let v = g.iter().map(|&t| Ok(response(&s, t)?.regular)).collect::<Result<Vec<_>>>()?;
        let (imax, _) = v.iter().enumerate().fold((0, f64::NEG_INFINITY), |m, (i, &x)| if x > m.1 { (i, x) } else { m });
        // 0 when the maximum is strictly interior, 1 otherwise
        Ok(if imax > 0 && imax + 1 < v.len() { 0.0 } else { 1.0 })
    }));
    for b in [0.5, 1.0, 1.5, 2.0] {
        out.push(check(Suite::Figures, format!("decreasing/hn(0.5,{b})"), 0.0, move || {
            let s = ModelSpec::hn(0.5, b, 1.0)?;
            let g = log_grid(1e-3, 1e2, 200);
            let v = g.iter().map(|&t| Ok(response(&s, t)?.regular)).collect::<Result<Vec<_>>>()?;
            // largest increase between consecutive samples
            Ok(v.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, f64::max))
        }));
    }
    out
}

fn specs_for(suite: Suite) -> Vec<Spec> {
    match suite {
        Suite::All => Suite::EACH.into_iter().flat_map(specs_for).collect(),
        Suite::Sonine => sonine(),
        Suite::Duality => duality(),
        Suite::Pdf => pdf(),
        Suite::Subordination => subordination(),
        Suite::Cm => cm(),
        Suite::Asymptotics => asymptotics(),
        Suite::Figures => figures(),
    }
}

/// Runs a suite. Checks run in parallel; the report keeps their fixed order.
pub fn run(suite: Suite, opts: &VerifyOptions) -> Report {
    let checks: Vec<Check> = specs_for(suite)
        .into_par_iter()
        .map(|s| {
            let tolerance = opts.tolerance.unwrap_or(s.tolerance);
            match (s.probe)() {
                Ok(e) if e.is_finite() => Check {
                    suite: s.suite,
                    name: s.name,
                    max_error: Some(e),
                    tolerance,
                    passed: e <= tolerance,
                    detail: String::new(),
                },
                Ok(e) => Check { suite: s.suite, name: s.name, max_error: None, tolerance, passed: false, detail: format!("non-finite error {e}") },
                Err(err) => Check { suite: s.suite, name: s.name, max_error: None, tolerance, passed: false, detail: err.to_string() },
            }
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Report { suite, passed, checks }
}
