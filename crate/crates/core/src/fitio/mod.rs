//! Datasets, synthetic data, least-squares fitting and model comparison.

mod data;
mod fit;
mod synth;

pub use data::{parse_csv, parse_csv_path, DataDomain, Dataset, SpectrumDataset, SpectrumPoint, TimeDataset, TimePoint};
pub use fit::{applicable_kinds, compare, fit, fit_auto, FitOptions, FitResult, Ranked};
pub use synth::{synthesize, Grid, Spacing};
