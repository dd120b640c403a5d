//! The standard relaxation laws — Debye, Cole-Cole (CC), Cole-Davidson
//! (CD), mirror Cole-Davidson (MCD), Havriliak-Negami (HN),
//! its frequency mirror JWS, and Kohlrausch-Williams-Watts (KWW) —
//! in the frequency domain, the time domain, as mixtures of exponentials,
//! and asymptotically.
//!
//! Parameters that make one law a special case of another are canonicalized
//! before evaluation (e.g. HN with β = 1 *is* CC), so reductions hold exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

mod asymptotic;
mod pdf;
mod spectral;
mod time;

pub use asymptotic::{asymptotic, Asymptote, Quantity, Regime};
pub use pdf::{
    pdf_g, pdf_laplace, pdf_mass, pdf_cc, pdf_cd, pdf_hn_hyper, pdf_hn_tail_mass, pdf_hn_trig, pdf_jws_hyper,
    pdf_jws_trig, pdf_mcd,
};
pub use spectral::{laplace_image, laplace_image_dd, permittivity, permittivity_via_spectral, spectral, theta};
pub use time::{relaxation, relaxation_derivative, response, response_derivative, TimeResponse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Debye,
    CC,
    CD,
    MCD,
    HN,
    JWS,
    KWW,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] =
        [ModelKind::Debye, ModelKind::CC, ModelKind::CD, ModelKind::MCD, ModelKind::HN, ModelKind::JWS, ModelKind::KWW];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Debye => "debye",
            ModelKind::CC => "cc",
            ModelKind::CD => "cd",
            ModelKind::MCD => "mcd",
            ModelKind::HN => "hn",
            ModelKind::JWS => "jws",
            ModelKind::KWW => "kww",
        }
    }

    /// Number of shape parameters (α, β) that are free for this law.
    pub fn shape_params(self) -> usize {
        match self {
            ModelKind::Debye => 0,
            ModelKind::CC | ModelKind::CD | ModelKind::MCD | ModelKind::KWW => 1,
            ModelKind::HN | ModelKind::JWS => 2,
        }
    }

    pub fn alpha_free(self) -> bool {
        matches!(self, ModelKind::CC | ModelKind::HN | ModelKind::JWS | ModelKind::KWW)
    }

    pub fn beta_free(self) -> bool {
        matches!(self, ModelKind::CD | ModelKind::MCD | ModelKind::HN | ModelKind::JWS)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown model '{s}'")))
    }
}

/// A relaxation law with its shape parameters and time scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    /// Restrict β to (0, 1], the range seen in experiments.
    #[serde(default)]
    pub strict_experimental: bool,
    /// Allow β > 1/α, where the densities acquire negative lobes.
    #[serde(default)]
    pub allow_negative: bool,
}

impl ModelSpec {
    fn raw(kind: ModelKind, alpha: f64, beta: f64, tau: f64) -> Self {
        ModelSpec { kind, alpha, beta, tau, strict_experimental: false, allow_negative: false }
    }

    pub fn new(kind: ModelKind, alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        let (alpha, beta) = match kind {
            ModelKind::Debye => (1.0, 1.0),
            ModelKind::CC | ModelKind::KWW => (alpha, 1.0),
            ModelKind::CD | ModelKind::MCD => (1.0, beta),
            ModelKind::HN | ModelKind::JWS => (alpha, beta),
        };
        let s = Self::raw(kind, alpha, beta, tau);
        s.validate()?;
        Ok(s)
    }

    pub fn debye(tau: f64) -> Result<Self> {
        Self::new(ModelKind::Debye, 1.0, 1.0, tau)
    }
    pub fn cc(alpha: f64, tau: f64) -> Result<Self> {
        Self::new(ModelKind::CC, alpha, 1.0, tau)
    }
    pub fn cd(beta: f64, tau: f64) -> Result<Self> {
        Self::new(ModelKind::CD, 1.0, beta, tau)
    }
    pub fn mcd(beta: f64, tau: f64) -> Result<Self> {
        Self::new(ModelKind::MCD, 1.0, beta, tau)
    }
    pub fn hn(alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        Self::new(ModelKind::HN, alpha, beta, tau)
    }
    pub fn jws(alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        Self::new(ModelKind::JWS, alpha, beta, tau)
    }
    pub fn kww(alpha: f64, tau: f64) -> Result<Self> {
        Self::new(ModelKind::KWW, alpha, 1.0, tau)
    }

    /// Same law with the regime override enabled (for plotting β > 1/α).
    pub fn with_override(kind: ModelKind, alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        let mut s = Self::raw(kind, alpha, beta, tau);
        s.allow_negative = true;
        s.validate()?;
        Ok(s)
    }

    pub fn strict(mut self) -> Result<Self> {
        self.strict_experimental = true;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.alpha, self.beta);
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return domain(format!("tau must be positive, got {}", self.tau));
        }
        if !(a > 0.0 && a <= 1.0) {
            return domain(format!("alpha must lie in (0, 1], got {a}"));
        }
        if !(b > 0.0 && b.is_finite()) {
            return domain(format!("beta must be positive, got {b}"));
        }
        let pinned = match self.kind {
            ModelKind::Debye => a == 1.0 && b == 1.0,
            ModelKind::CC | ModelKind::KWW => b == 1.0,
            ModelKind::CD | ModelKind::MCD => a == 1.0,
            ModelKind::HN | ModelKind::JWS => true,
        };
        if !pinned {
            return domain(format!("parameters alpha={a}, beta={b} not allowed for {}", self.kind));
        }
        if self.strict_experimental && b > 1.0 {
            return domain(format!("beta={b} exceeds 1 under strict_experimental"));
        }
        if !self.allow_negative && a * b > 1.0 + 1e-12 {
            return domain(format!("beta={b} exceeds 1/alpha={} (non-negativity regime)", 1.0 / a));
        }
        Ok(())
    }

    /// The simplest law describing the same function.
    pub fn canonical(&self) -> ModelSpec {
        let (a, b) = (self.alpha, self.beta);
        let kind = match self.kind {
            ModelKind::KWW => ModelKind::KWW,
            _ if a == 1.0 && b == 1.0 => ModelKind::Debye,
            ModelKind::HN | ModelKind::JWS if b == 1.0 => ModelKind::CC,
            ModelKind::HN if a == 1.0 => ModelKind::CD,
            ModelKind::JWS if a == 1.0 => ModelKind::MCD,
            k => k,
        };
        ModelSpec { kind, ..*self }
    }
}

/// Static and high-frequency permittivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PermittivityScale {
    pub eps_static: f64,
    pub eps_inf: f64,
}

impl PermittivityScale {
    pub fn new(eps_static: f64, eps_inf: f64) -> Result<Self> {
        if !(eps_static > eps_inf) {
            return domain(format!("eps_static ({eps_static}) must exceed eps_inf ({eps_inf})"));
        }
        Ok(PermittivityScale { eps_static, eps_inf })
    }

    pub fn delta(&self) -> f64 {
        self.eps_static - self.eps_inf
    }
}

impl Default for PermittivityScale {
    fn default() -> Self {
        PermittivityScale { eps_static: 1.0, eps_inf: 0.0 }
    }
}
