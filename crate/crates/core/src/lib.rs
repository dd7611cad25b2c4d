//! Numerical laboratory for coupled kicked tops and the random-matrix
//! statistics of their entanglement.
//!
//! The crate builds the spin-j operator algebra and the one-period Floquet
//! map of two coupled kicked tops, evolves bipartite states and measures
//! their Schmidt spectra and entropies, and evaluates the random-matrix
//! predictions those quantities saturate to: the eigenvalue density of
//! reduced density matrices, the entanglement bound ln(γN) with γ given by
//! a ₃F₂ evaluation, and the mean linear entropy 1 − (M+N+1)/(MN+2).
//!
//! Everything is generic over the real scalar (`f32` or `f64`) through the
//! [`Real`] trait; the `*64` aliases below fix the double-precision types
//! used by the command-line tools.

pub mod entanglement;
pub mod error;
pub mod histogram;
pub mod linalg;
pub mod quadrature;
pub mod rmt;
pub mod scalar;
pub mod spectral;
pub mod spin;
pub mod tops;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases for the main domain types.
pub type SpinOperators64 = spin::SpinOperators<f64>;
pub type UnitaryMatrix64 = spin::UnitaryMatrix<f64>;
pub type TopConfig64 = tops::TopConfig<f64>;
pub type BipartiteState64 = tops::BipartiteState<f64>;
pub type SchmidtSpectrum64 = entanglement::SchmidtSpectrum<f64>;
pub type DensityMatrix64 = entanglement::DensityMatrix<f64>;
pub type MPDensity64 = rmt::MPDensity<f64>;
pub type FloquetSpectrum64 = spectral::FloquetSpectrum<f64>;
pub type Histogram64 = histogram::Histogram<f64>;
