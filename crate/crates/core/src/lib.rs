//! Numerics for non-Debye dielectric relaxation: the Prabhakar function and
//! friends, Laplace inversion, the standard relaxation models, memory
//! kernels, and least-squares fitting.

pub mod dd;
pub mod kernels;
pub mod error;
pub mod fitio;
pub mod laplace;
pub mod models;
pub mod quad;
pub mod specfun;
pub mod subordination;
mod util;
pub mod verify;

pub use error::{Error, Result};
