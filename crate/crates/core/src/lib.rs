//! Simulation of a three-qubit quantum-Fourier-transform gate built on
//! circulant coupling symmetry.
//!
//! The crate builds the model Hamiltonians, evaluates their closed-form and
//! numeric spectra, integrates the time-dependent Schrödinger equation through
//! adiabatic (optionally counterdiabatically corrected) schedules, and
//! computes the gate, adiabatic-transfer and entanglement fidelities as
//! machine-readable series.
//!
//! Conventions used everywhere:
//! - ħ = 1, time in ms, every frequency stored as an angular rad/ms value
//!   (a quoted "X/2π = y kHz" enters as 2π·y rad/ms);
//! - the three-spin basis order is |↓↓↓⟩,|↓↓↑⟩,|↓↑↓⟩,|↓↑↑⟩,|↑↓↓⟩,|↑↓↑⟩,
//!   |↑↑↓⟩,|↑↑↑⟩, with σ_z = |↓⟩⟨↓| - |↑⟩⟨↑|.

pub mod dynamics;
pub mod hamiltonians;
pub mod ioncoup;
pub mod numerics;
pub mod schedules;
pub mod spectra;

#[cfg(test)]
pub(crate) mod testutil;

pub use num_complex::Complex64;
pub use numerics::{Operator, StateVector, DIM};
