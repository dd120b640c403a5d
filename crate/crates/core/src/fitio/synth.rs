//! Synthetic datasets: exact model values with optional multiplicative
//! Gaussian noise from a seeded generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::data::{DataDomain, Dataset, SpectrumDataset, SpectrumPoint, TimeDataset, TimePoint};
use crate::error::{domain, Result};
use crate::models::{permittivity, relaxation, ModelSpec, PermittivityScale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// An evaluation grid `start:stop:points[:log|:lin]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let g = Grid { start, stop, points, spacing };
        g.validate()?;
        Ok(g)
    }

    pub fn log(start: f64, stop: f64, points: usize) -> Result<Self> {
        Self::new(start, stop, points, Spacing::Log)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return domain(format!("grid needs start < stop, got {}:{}", self.start, self.stop));
        }
        if self.points < 2 {
            return domain("grid needs at least 2 points");
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0) {
            return domain("log grid needs start > 0");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    return self.stop;
                }
                let f = i as f64 / n as f64;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    // start·r^f hits decades exactly when r is a power of ten
                    Spacing::Log => self.start * (self.stop / self.start).powf(f),
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || crate::Error::Domain(format!("grid '{s}' is not start:stop:points[:log|:lin]"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let start = parts[0].parse().map_err(|_| bad())?;
        let stop = parts[1].parse().map_err(|_| bad())?;
        let points = parts[2].parse().map_err(|_| bad())?;
        let spacing = match parts.get(3) {
            None | Some(&"log") => Spacing::Log,
            Some(&"lin") => Spacing::Linear,
            Some(_) => return Err(bad()),
        };
        Grid::new(start, stop, points, spacing)
    }
}

/// Samples the model on `abscissae` (ω for frequency data, t for time data)
/// and multiplies every value by `1 + noise_rel·N(0,1)`, the normal draws
/// coming from a ChaCha8 stream seeded with `seed`.
pub fn synthesize(
    spec: &ModelSpec,
    scale: &PermittivityScale,
    abscissae: &[f64],
    data_domain: DataDomain,
    noise_rel: f64,
    seed: u64,
) -> Result<Dataset> {
    spec.validate()?;
    if !(noise_rel >= 0.0 && noise_rel.is_finite()) {
        return domain(format!("noise level must be nonnegative, got {noise_rel}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jitter = |v: f64| {
        let z: f64 = StandardNormal.sample(&mut rng);
        if noise_rel == 0.0 {
            v
        } else {
            v * (1.0 + noise_rel * z)
        }
    };
    let meta = format!("synthetic {} alpha={} beta={} tau={} noise={noise_rel} seed={seed}", spec.kind, spec.alpha, spec.beta, spec.tau);
    Ok(match data_domain {
        DataDomain::Frequency => {
            let mut points = Vec::with_capacity(abscissae.len());
            for &omega in abscissae {
                let (re, im) = permittivity(spec, scale, omega)?;
                points.push(SpectrumPoint { omega, eps_re: jitter(re), eps_im: jitter(im) });
            }
            Dataset::Frequency(SpectrumDataset { points, weights: None, meta, warnings: Vec::new() })
        }
        DataDomain::Time => {
            let mut points = Vec::with_capacity(abscissae.len());
            for &t in abscissae {
                let n = if t == 0.0 { 1.0 } else { relaxation(spec, t)? };
                points.push(TimePoint { t, n: jitter(n) });
            }
            Dataset::Time(TimeDataset { points, weights: None, meta, warnings: Vec::new() })
        }
    })
}
