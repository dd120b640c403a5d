//! Evaluation strategy plumbing, Pochhammer symbols and the generalized
//! hypergeometric series pFq.

use crate::error::{domain, Error, Result};

use super::gamma::is_gamma_pole;

/// Which representation to use when evaluating a special function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Series near the origin, contour inversion midrange, asymptotic far out,
    /// cross-checked in the overlap band.
    AutoSwitch,
    PowerSeries,
    AsymptoticSeries,
    ContourInversion,
    /// Rational-order finite sum of hypergeometric series (needs α = l/k).
    HypergeometricReduction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalStrategy {
    pub kind: StrategyKind,
    pub series_max_terms: usize,
    pub rel_tolerance: f64,
    /// Series/contour handoff, measured on the dimensionless time `x^(1/α)`.
    pub crossover_magnitude: f64,
}

impl Default for EvalStrategy {
    fn default() -> Self {
        EvalStrategy {
            kind: StrategyKind::AutoSwitch,
            series_max_terms: 2000,
            rel_tolerance: 1e-13,
            crossover_magnitude: 5.0,
        }
    }
}

impl EvalStrategy {
    pub fn with_kind(kind: StrategyKind) -> Self {
        EvalStrategy { kind, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.series_max_terms < 1 {
            return domain("series_max_terms must be at least 1");
        }
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance < 1.0) {
            return domain("rel_tolerance must lie in (0, 1)");
        }
        if !(self.crossover_magnitude > 0.0) {
            return domain("crossover_magnitude must be positive");
        }
        Ok(())
    }
}

/// Rising factorial `(c)_r = c (c+1) ... (c+r-1)`, formed as a product.
/// Overflow shows up as `±inf`.
pub fn pochhammer(c: f64, r: u32) -> f64 {
    let mut p = 1.0;
    for j in 0..r {
        p *= c + j as f64;
        if p == 0.0 || !p.is_finite() {
            break;
        }
    }
    p
}

/// Summation result with the cancellation diagnostic `Σ|t| / |Σ t|`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: f64,
    pub condition: f64,
}

/// Largest tolerated loss of significance before a series result is
/// rejected as numerically meaningless.
pub(crate) const MAX_CONDITION: f64 = 1e8;

pub(crate) fn pfq_sum(a: &[f64], b: &[f64], x: f64, strategy: &EvalStrategy) -> Result<SeriesSum> {
    let p = a.len();
    let q = b.len();
    if p > q + 1 {
        return domain(format!("{p}F{q} diverges for every x != 0"));
    }
    // first nonpositive integer numerator ends the series
    let terminate_at = a
        .iter()
        .filter(|&&ai| is_gamma_pole(ai))
        .map(|&ai| (-ai) as usize)
        .min();
    for &bj in b {
        if is_gamma_pole(bj) {
            let reached = (-bj) as usize;
            if terminate_at.map_or(true, |n| reached < n) {
                return domain(format!("denominator parameter {bj} hits a pole"));
            }
        }
    }
    if p == q + 1 && x.abs() >= 1.0 && terminate_at.is_none() {
        return domain(format!("{p}F{q} requires |x| < 1, got {x}"));
    }
    if x == 0.0 {
        return Ok(SeriesSum { value: 1.0, condition: 1.0 });
    }
    let cap = terminate_at.map_or(strategy.series_max_terms, |n| n + 1);
    let tol = strategy.rel_tolerance;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut abs_sum = 1.0f64;
    let mut small = 0;
    let mut r = 0usize;
    while r + 1 < cap {
        let rf = r as f64;
        let mut ratio = x / (rf + 1.0);
        for &ai in a {
            ratio *= ai + rf;
        }
        for &bj in b {
            ratio /= bj + rf;
        }
        term *= ratio;
        r += 1;
        if !term.is_finite() {
            return Err(Error::NonConvergent(format!("{p}F{q} term overflow at r = {r}")));
        }
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            // a terminating numerator was reached
            return Ok(SeriesSum { value: sum, condition: abs_sum / sum.abs() });
        }
        // the term ratio must have started to shrink before small terms count
        if term.abs() < tol * sum.abs() && ratio.abs() < 1.0 {
            small += 1;
            if small >= 3 {
                return Ok(SeriesSum { value: sum, condition: abs_sum / sum.abs() });
            }
        } else {
            small = 0;
        }
    }
    if terminate_at.is_some() {
        return Ok(SeriesSum { value: sum, condition: abs_sum / sum.abs() });
    }
    Err(Error::NonConvergent(format!(
        "{p}F{q}({x}) not converged after {} terms",
        strategy.series_max_terms
    )))
}

/// Generalized hypergeometric function `pFq(a; b; x)` by direct summation.
///
/// Fails with `NonConvergent` when the term cap is reached or when
/// cancellation between terms destroys more than eight digits.
pub fn hyper_pfq(numerators: &[f64], denominators: &[f64], x: f64, strategy: &EvalStrategy) -> Result<f64> {
    let s = pfq_sum(numerators, denominators, x, strategy)?;
    if !(s.condition <= MAX_CONDITION) {
        return Err(Error::NonConvergent(format!(
            "cancellation in pFq at x = {x}: condition {:.1e}",
            s.condition
        )));
    }
    Ok(s.value)
}
