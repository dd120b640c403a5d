//! Special functions: gamma helpers, pFq, the Prabhakar function and the
//! one-sided Lévy stable density.

pub mod gamma;
mod hyper;
mod levy;
mod prabhakar;

pub use hyper::{hyper_pfq, pochhammer, EvalStrategy, StrategyKind};
pub use levy::levy_stable_density;
pub use prabhakar::{
    ml, prabhakar, prabhakar_derivative, prabhakar_rational, prabhakar_t, PrabhakarParams, RationalOrder,
};
