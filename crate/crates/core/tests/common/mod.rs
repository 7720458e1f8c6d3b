//! Shared fixtures for the integration suites: deterministic RNG and the
//! figure-parameter schedules in rad/ms.

use std::f64::consts::{FRAC_PI_4, PI};

use circulant_qft::schedules::{OffsetSchedule, RabiSchedule};

pub const TAU: f64 = 2.0 * PI;

/// SplitMix64, the same small deterministic generator the unit tests use.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Eigenfrequency-figure schedule: J0/2π = 1, J01/2π = 2,
/// Δ/2π = (120, 60, 30) kHz, ω′/2π = 0.15 kHz.
pub fn spectrum_schedule() -> OffsetSchedule {
    OffsetSchedule {
        j0: TAU * 1.0,
        j01: TAU * 2.0,
        delta1: TAU * 120.0,
        delta2: TAU * 60.0,
        delta3: TAU * 30.0,
        omega_prime: TAU * 0.15,
    }
}

/// Gate-fidelity schedule: J0/2π = J01/2π = 1, Δ/2π = (20, 10, 6) kHz,
/// ω′/2π = 0.505 kHz.
pub fn gate_schedule() -> OffsetSchedule {
    OffsetSchedule {
        j0: TAU * 1.0,
        j01: TAU * 1.0,
        delta1: TAU * 20.0,
        delta2: TAU * 10.0,
        delta3: TAU * 6.0,
        omega_prime: TAU * 0.505,
    }
}

/// Adiabatic-transfer schedule: J0/2π = 2.1, J01/2π = 2.4, Υ0/2π = 1.9,
/// Υ′0/2π = 2 kHz, φ = π/4, ω′/2π = 0.3 kHz.
pub fn adiabatic_schedule() -> RabiSchedule {
    RabiSchedule {
        j0: TAU * 2.1,
        j01: TAU * 2.4,
        upsilon0: TAU * 1.9,
        upsilon0_prime: TAU * 2.0,
        omega_prime: TAU * 0.3,
        phi: FRAC_PI_4,
    }
}

/// Entangling-sweep base schedule: J0 = 2.3, J01 = 2.1, Υ0 = 1.8,
/// Υ′0 = 1.7 kHz, φ = π/4.
pub fn entangle_base(omega_prime_khz: f64) -> RabiSchedule {
    RabiSchedule {
        j0: TAU * 2.3,
        j01: TAU * 2.1,
        upsilon0: TAU * 1.8,
        upsilon0_prime: TAU * 1.7,
        omega_prime: TAU * omega_prime_khz,
        phi: FRAC_PI_4,
    }
}
