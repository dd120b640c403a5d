//! Levenberg-Marquardt fitting in an unconstrained parametrization, and
//! model ranking by the small-sample corrected Akaike criterion (AICc).
//!
//! Shape parameters live on logit scales: `logit α`, and `logit(αβ)` for
//! the two-parameter laws (`logit β` under `strict_experimental`), which
//! keeps every trial point inside the admissible region. The time scale is
//! fitted as `ln τ`, the permittivity levels directly.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::{DataDomain, Dataset};
use crate::error::{domain, Error, Result};
use crate::models::{permittivity, relaxation, ModelKind, ModelSpec, PermittivityScale};

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Starting point; overrides the data-driven initial guess.
    pub init: Option<ModelSpec>,
    /// Box for τ; trial points are projected into it.
    pub tau_bounds: (f64, f64),
    pub max_iter: usize,
    pub strict_experimental: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { init: None, tau_bounds: (1e-15, 1e15), max_iter: 200, strict_experimental: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelKind,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    /// `None` for time-domain fits.
    pub eps_static: Option<f64>,
    pub eps_inf: Option<f64>,
    /// Square root of the weighted sum of squared residuals.
    pub residual_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Gauss-Newton standard errors of the free parameters.
    pub stderr: BTreeMap<String, f64>,
}

impl FitResult {
    pub fn spec(&self) -> Result<ModelSpec> {
        ModelSpec::new(self.model, self.alpha, self.beta, self.tau)
    }
}

/// A ranked candidate of [`compare`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranked {
    pub kind: ModelKind,
    pub score: f64,
    pub n_params: usize,
    pub result: FitResult,
}

const GRAD_TOL: f64 = 1e-10;
const STEP_TOL: f64 = 1e-12;
/// Logit and log coordinates are kept inside ±LOGIT_CAP.
const LOGIT_CAP: f64 = 36.0;

fn sigmoid(q: f64) -> f64 {
    1.0 / (1.0 + (-q).exp())
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    (p / (1.0 - p)).ln()
}

/// Layout of the parameter vector for one law and data domain.
#[derive(Debug, Clone, Copy)]
struct Layout {
    kind: ModelKind,
    domain: DataDomain,
    strict: bool,
    tau_bounds: (f64, f64),
}

/// Physical parameters decoded from a parameter vector.
#[derive(Debug, Clone, Copy)]
struct Phys {
    alpha: f64,
    beta: f64,
    tau: f64,
    eps_static: f64,
    eps_inf: f64,
}

impl Layout {
    fn n_shape(&self) -> usize {
        self.kind.shape_params()
    }

    fn len(&self) -> usize {
        self.n_shape() + 1 + if self.domain == DataDomain::Frequency { 2 } else { 0 }
    }

    fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.kind.alpha_free() {
            v.push("alpha");
        }
        if self.kind.beta_free() {
            v.push("beta");
        }
        v.push("tau");
        if self.domain == DataDomain::Frequency {
            v.extend(["eps_static", "eps_inf"]);
        }
        v
    }

    fn decode(&self, p: &[f64]) -> Phys {
        let mut i = 0;
        let mut alpha = 1.0;
        let mut beta = 1.0;
        if self.kind.alpha_free() {
            alpha = sigmoid(p[i]);
            i += 1;
        }
        if self.kind.beta_free() {
            // αβ on the logit scale keeps β ≤ 1/α
            beta = if self.strict || alpha == 1.0 { sigmoid(p[i]) } else { sigmoid(p[i]) / alpha };
            i += 1;
        }
        let tau = p[i].exp();
        let (eps_static, eps_inf) =
            if self.domain == DataDomain::Frequency { (p[i + 1], p[i + 2]) } else { (1.0, 0.0) };
        Phys { alpha, beta, tau, eps_static, eps_inf }
    }

    fn encode(&self, ph: &Phys) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.len());
        if self.kind.alpha_free() {
            v.push(logit(ph.alpha));
        }
        if self.kind.beta_free() {
            let a = if self.kind.alpha_free() { ph.alpha } else { 1.0 };
            v.push(if self.strict { logit(ph.beta) } else { logit(a * ph.beta) });
        }
        v.push(ph.tau.ln());
        if self.domain == DataDomain::Frequency {
            v.extend([ph.eps_static, ph.eps_inf]);
        }
        v
    }

    /// Box projection.
    fn project(&self, p: &mut [f64]) {
        let ns = self.n_shape();
        for q in &mut p[..ns] {
            *q = q.clamp(-LOGIT_CAP, LOGIT_CAP);
        }
        p[ns] = p[ns].clamp(self.tau_bounds.0.ln(), self.tau_bounds.1.ln());
    }

    fn spec(&self, ph: &Phys) -> ModelSpec {
        // decoded values satisfy the constraints by construction; build the
        // spec without re-validating rounding-level excursions
        let (alpha, beta) = match self.kind {
            ModelKind::Debye => (1.0, 1.0),
            ModelKind::CC | ModelKind::KWW => (ph.alpha, 1.0),
            ModelKind::CD | ModelKind::MCD => (1.0, ph.beta),
            _ => (ph.alpha, ph.beta),
        };
        ModelSpec {
            kind: self.kind,
            alpha,
            beta,
            tau: ph.tau,
            strict_experimental: self.strict,
            allow_negative: true,
        }
    }
}

struct Problem<'a> {
    data: &'a Dataset,
    layout: Layout,
}

impl Problem<'_> {
    fn residual_len(&self) -> usize {
        match self.data {
            Dataset::Frequency(d) => 2 * d.points.len(),
            Dataset::Time(d) => d.points.len(),
        }
    }

    fn residuals(&self, p: &[f64]) -> Result<DVector<f64>> {
        let ph = self.layout.decode(p);
        let spec = self.layout.spec(&ph);
        let w = |i: usize| self.data.weights().map_or(1.0, |w| w[i]);
        let r: Vec<f64> = match self.data {
            Dataset::Frequency(d) => {
                let scale = PermittivityScale { eps_static: ph.eps_static, eps_inf: ph.eps_inf };
                let pairs = d
                    .points
                    .par_iter()
                    .enumerate()
                    .map(|(i, pt)| {
                        let (re, im) = permittivity(&spec, &scale, pt.omega)?;
                        Ok([w(i) * (re - pt.eps_re), w(i) * (im - pt.eps_im)])
                    })
                    .collect::<Result<Vec<_>>>()?;
                pairs.into_iter().flatten().collect()
            }
            Dataset::Time(d) => d
                .points
                .par_iter()
                .enumerate()
                .map(|(i, pt)| {
                    let n = if pt.t == 0.0 { 1.0 } else { relaxation(&spec, pt.t)? };
                    Ok(w(i) * (n - pt.n))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonConvergence("model produced a non-finite residual".into()));
        }
        Ok(DVector::from_vec(r))
    }

    /// Central-difference Jacobian in the fitted coordinates.
    fn jacobian(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let m = self.residual_len();
        let mut jac = DMatrix::zeros(m, p.len());
        for j in 0..p.len() {
            let h = 1e-6 * (1.0 + p[j].abs());
            let mut hi = p.to_vec();
            let mut lo = p.to_vec();
            hi[j] += h;
            lo[j] -= h;
            let d = (self.residuals(&hi)? - self.residuals(&lo)?) / (2.0 * h);
            jac.set_column(j, &d);
        }
        Ok(jac)
    }
}

struct LmOutcome {
    p: Vec<f64>,
    rss: f64,
    iterations: usize,
    converged: bool,
}

fn levenberg_marquardt(prob: &Problem, start: Vec<f64>, max_iter: usize) -> Result<LmOutcome> {
    let mut p = start;
    prob.layout.project(&mut p);
    let mut r = prob.residuals(&p)?;
    let mut rss = r.norm_squared();
    let mut jac = prob.jacobian(&p)?;
    for (j, col) in jac.column_iter().enumerate() {
        if col.amax() == 0.0 {
            return Err(Error::DegenerateJacobian(format!(
                "the data do not constrain parameter {} of {}",
                prob.layout.names()[j],
                prob.layout.kind
            )));
        }
    }
    let mut lambda: Option<f64> = None;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let g = jac.transpose() * &r;
        if g.amax() < GRAD_TOL {
            converged = true;
            break;
        }
        let jtj = jac.transpose() * &jac;
        let diag: Vec<f64> = (0..p.len()).map(|i| jtj[(i, i)].max(1e-300)).collect();
        let lam = *lambda.get_or_insert(1e-3 * diag.iter().cloned().fold(0.0, f64::max));
        let mut a = jtj.clone();
        for i in 0..p.len() {
            a[(i, i)] += lam * diag[i];
        }
        let step = match a.cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => {
                lambda = Some(lam * 4.0);
                continue;
            }
        };
        let pnorm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        if step.norm() < STEP_TOL * (1.0 + pnorm) {
            converged = true;
            break;
        }
        let mut trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        prob.layout.project(&mut trial);
        let accepted = match prob.residuals(&trial) {
            Ok(rt) => {
                let rss_t = rt.norm_squared();
                if rss_t < rss {
                    p = trial;
                    r = rt;
                    rss = rss_t;
                    true
                } else {
                    false
                }
            }
            // a failed model evaluation counts as an uphill step
            Err(_) => false,
        };
        if accepted {
            lambda = Some((lam / 3.0).max(1e-15));
            jac = prob.jacobian(&p)?;
        } else {
            lambda = Some(lam * 4.0);
        }
    }
    Ok(LmOutcome { p, rss, iterations, converged })
}

/// Kinds that can be fitted to data of the given domain.
pub fn applicable_kinds(d: DataDomain) -> Vec<ModelKind> {
    match d {
        DataDomain::Frequency => ModelKind::ALL.into_iter().filter(|k| *k != ModelKind::KWW).collect(),
        DataDomain::Time => ModelKind::ALL.to_vec(),
    }
}

/// Data-driven starting points: τ from the loss peak (or from n = 1/e),
/// α from the low-frequency wing slope, β from the high-frequency one
/// together with the fixed guesses 0.8 and 0.5.
fn initial_guesses(data: &Dataset, layout: &Layout) -> Vec<Phys> {
    let mut base = Phys { alpha: 0.8, beta: 0.8, tau: 1.0, eps_static: 1.0, eps_inf: 0.0 };
    let mut slope_beta = None;
    match data {
        Dataset::Frequency(d) => {
            let pts = &d.points;
            let (ipk, pk) = pts
                .iter()
                .enumerate()
                .fold((0, &pts[0]), |acc, (i, p)| if p.eps_im > acc.1.eps_im { (i, p) } else { acc });
            base.tau = 1.0 / pk.omega;
            base.eps_static = pts.iter().map(|p| p.eps_re).fold(f64::NEG_INFINITY, f64::max);
            base.eps_inf = pts.iter().map(|p| p.eps_re).fold(f64::INFINITY, f64::min);
            let slope = |i: usize, j: usize| {
                let (a, b) = (&pts[i], &pts[j]);
                if a.eps_im > 0.0 && b.eps_im > 0.0 {
                    Some((b.eps_im / a.eps_im).ln() / (b.omega / a.omega).ln())
                } else {
                    None
                }
            };
            let n = pts.len();
            if ipk >= 2 {
                if let Some(s) = slope(0, 1.max(ipk / 3)) {
                    base.alpha = s.clamp(0.05, 0.95);
                }
            }
            if n >= 3 && ipk + 2 < n {
                if let Some(s) = slope(n - 1 - ((n - 1 - ipk) / 3).max(1), n - 1) {
                    slope_beta = Some((-s / base.alpha).clamp(0.05, 0.95));
                }
            }
        }
        Dataset::Time(d) => {
            let e = (-1f64).exp();
            if let Some(p) = d.points.iter().find(|p| p.n <= e) {
                base.tau = p.t.max(1e-300);
            } else if let Some(p) = d.points.last() {
                base.tau = p.t.max(1e-300);
            }
        }
    }
    let mut out = vec![base];
    for b in slope_beta.into_iter().chain([0.5]) {
        if layout.kind.beta_free() {
            out.push(Phys { beta: b, ..base });
        }
    }
    out
}

fn finish(prob: &Problem, out: LmOutcome) -> Result<FitResult> {
    let layout = &prob.layout;
    let ph = layout.decode(&out.p);
    let spec = layout.spec(&ph);
    let m = prob.residual_len();
    let k = layout.len();
    // covariance proxy σ² (JᵀJ)⁻¹, mapped to physical parameters
    let jac = prob.jacobian(&out.p)?;
    let jtj = jac.transpose() * &jac;
    // a shape parameter driven to its logit cap leaves a flat direction;
    // the pseudo-inverse reports no spread along it
    let cov = jtj
        .clone()
        .pseudo_inverse(1e-14 * jtj.amax())
        .map_err(|e| Error::DegenerateJacobian(format!("{}: {e}", layout.kind)))?;
    let sigma2 = if m > k { out.rss / (m - k) as f64 } else { 0.0 };
    let phys_vec = |p: &[f64]| {
        let d = layout.decode(p);
        let mut v = Vec::new();
        if layout.kind.alpha_free() {
            v.push(d.alpha);
        }
        if layout.kind.beta_free() {
            v.push(d.beta);
        }
        v.push(d.tau);
        if layout.domain == DataDomain::Frequency {
            v.extend([d.eps_static, d.eps_inf]);
        }
        v
    };
    let mut dphys = DMatrix::zeros(k, k);
    for j in 0..k {
        let h = 1e-7 * (1.0 + out.p[j].abs());
        let mut hi = out.p.clone();
        let mut lo = out.p.clone();
        hi[j] += h;
        lo[j] -= h;
        let (a, b) = (phys_vec(&hi), phys_vec(&lo));
        for i in 0..k {
            dphys[(i, j)] = (a[i] - b[i]) / (2.0 * h);
        }
    }
    let cov_phys = &dphys * cov * dphys.transpose() * sigma2;
    let stderr = layout
        .names()
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n.to_string(), cov_phys[(i, i)].max(0.0).sqrt()))
        .collect();
    let freq = layout.domain == DataDomain::Frequency;
    Ok(FitResult {
        model: layout.kind,
        alpha: spec.alpha,
        beta: spec.beta,
        tau: spec.tau,
        eps_static: freq.then_some(ph.eps_static),
        eps_inf: freq.then_some(ph.eps_inf),
        residual_norm: out.rss.sqrt(),
        converged: out.converged,
        iterations: out.iterations,
        stderr,
    })
}

/// Fits one law to the data. A run that hits the iteration cap returns the
/// best point found with `converged = false`.
pub fn fit(data: &Dataset, kind: ModelKind, opts: &FitOptions) -> Result<FitResult> {
    let d = data.domain();
    if data.len() < 5 {
        return domain(format!("fitting needs at least 5 points, got {}", data.len()));
    }
    if kind == ModelKind::KWW && d == DataDomain::Frequency {
        return domain("KWW is fitted in the time domain only");
    }
    let layout = Layout { kind, domain: d, strict: opts.strict_experimental, tau_bounds: opts.tau_bounds };
    let prob = Problem { data, layout };
    let starts = match &opts.init {
        Some(s) => {
            let base = initial_guesses(data, &layout)[0];
            vec![Phys { alpha: s.alpha, beta: s.beta, tau: s.tau, ..base }]
        }
        None => initial_guesses(data, &layout),
    };
    let mut best: Option<LmOutcome> = None;
    let mut last_err = None;
    for s in starts {
        let mut start = layout.encode(&s);
        layout.project(&mut start);
        match levenberg_marquardt(&prob, start, opts.max_iter) {
            Ok(o) => {
                if best.as_ref().map_or(true, |b| o.rss < b.rss) {
                    best = Some(o);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let best = best.ok_or_else(|| last_err.unwrap_or_else(|| Error::NonConvergence("no start succeeded".into())))?;
    finish(&prob, best)
}

/// AICc with the residual sum floored at a relative 1e-10 of the data so
/// that exact fits of nested laws tie and the parameter penalty decides.
fn aicc(data: &Dataset, rss: f64, k: usize) -> f64 {
    let (m, scale) = match data {
        Dataset::Frequency(d) => {
            let s = d.points.iter().map(|p| p.eps_re * p.eps_re + p.eps_im * p.eps_im).sum::<f64>();
            (2 * d.points.len(), s / (2 * d.points.len()) as f64)
        }
        Dataset::Time(d) => (d.points.len(), d.points.iter().map(|p| p.n * p.n).sum::<f64>() / d.points.len() as f64),
    };
    let floor = m as f64 * 1e-20 * scale.max(1e-300);
    let (m, k) = (m as f64, k as f64);
    let corr = if m - k - 1.0 > 0.0 { 2.0 * k * (k + 1.0) / (m - k - 1.0) } else { f64::INFINITY };
    m * (rss.max(floor) / m).ln() + 2.0 * k + corr
}

/// Fits every candidate and ranks them by AICc; ties go to fewer
/// parameters, then to the lexically first name.
pub fn compare(data: &Dataset, candidates: &[ModelKind], opts: &FitOptions) -> Result<Vec<Ranked>> {
    if candidates.is_empty() {
        return domain("compare needs at least one candidate");
    }
    let mut out = Vec::new();
    for &kind in candidates {
        let result = fit(data, kind, opts)?;
        let n_params = Layout { kind, domain: data.domain(), strict: false, tau_bounds: (1.0, 1.0) }.len();
        let score = aicc(data, result.residual_norm.powi(2), n_params);
        out.push(Ranked { kind, score, n_params, result });
    }
    out.sort_by(|a, b| {
        a.score
            .total_cmp(&b.score)
            .then(a.n_params.cmp(&b.n_params))
            .then(a.kind.name().cmp(b.kind.name()))
    });
    Ok(out)
}

/// [`compare`] over all kinds applicable to the data's domain.
pub fn fit_auto(data: &Dataset, opts: &FitOptions) -> Result<Vec<Ranked>> {
    compare(data, &applicable_kinds(data.domain()), opts)
}
