//! Numerics for spherical averages, bilinear spherical averages over
//! `S^{2d-1}`, their maximal and `L^r`-in-scale variants, Littlewood–Paley
//! pieces, Lorentz norms, and exact-rational bookkeeping of the exponent
//! regions where the associated estimates hold.

pub mod families;
pub mod funcspace;
pub mod interp;
pub mod lpdecomp;
pub mod operators;
pub mod planar;
pub mod quad;
pub mod regions;
pub mod suites;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the range the routine supports.
    #[error("domain error: {0}")]
    Domain(String),
    /// An evaluation needs values outside the sampled box of a grid function
    /// whose support reaches the box boundary.
    #[error("support violation: ball of radius {radius} at {point:?} leaves the sampled box")]
    Support { point: Vec<f64>, radius: f64 },
    /// The grid is too coarse to represent the requested frequency band.
    #[error("aliasing: {0}")]
    Aliasing(String),
    #[error("malformed data: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Fixed-shape pairwise summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
