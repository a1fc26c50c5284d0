//! Exact scattering solution of the one-dimensional barrier
//! `V(x) = V0 / cosh^2(omega x)`.
//!
//! The crate evaluates the closed-form transmission and reflection amplitudes,
//! the scattering function `S = T + R`, energy-normalized scattering states and
//! the spectral (Euclidean-time) propagator. Each analytic result has an
//! independent numerical counterpart in [`oracle`]: a Numerov integrator for
//! the amplitudes and a finite-difference Hamiltonian for the propagator.

pub mod cli;
pub mod error;
pub mod oracle;
pub mod params;
pub mod propagator;
pub mod quadrature;
pub mod scattering;
pub mod special;

pub use error::{Error, Result};
pub use params::{reduce, BarrierIndex, PhysicalParams};
pub use scattering::{Amplitudes, ConnectionCoefficients, WaveSample};
