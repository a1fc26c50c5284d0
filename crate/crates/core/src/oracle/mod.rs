//! Numerical ground truth that does not use any of the closed-form results:
//! Numerov integration for the amplitudes and a finite-difference Hamiltonian
//! for the Euclidean propagator.

mod grid;
mod numerov;

pub use grid::{grid_propagator, GridPropagator, GridSpectrum, GRID_CONVERGENCE_TOL, MIN_GRID_POINTS};
pub use numerov::{integrate as numerov_solve, numerov_amplitudes, MatchBasis, SolverConfig};
