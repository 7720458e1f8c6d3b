//! Time modulations of couplings, detunings and Rabi frequencies, the
//! adiabatic phase integrals along the tracked eigenbranches, and the
//! detuning tuner that pushes all four phases onto 2π multiples.
//!
//! Both schedule families run over t ∈ [0, t_max] with t_max = π/(2ω′):
//! couplings ramp up as sin²(ω′t) while detunings / extra Rabi amplitudes
//! ramp down as cos²(ω′t).

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::hamiltonians::{
    build_circulant, build_offset, build_rotating, CirculantParams, OffsetParams, RotatingParams,
};
use crate::numerics::Operator;
use crate::spectra::{track_spectrum, SpectraError};
use crate::StateVector;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("time {t} ms is outside the schedule window [0, {t_max}] ms")]
    TimeOutOfRange { t: f64, t_max: f64 },
    #[error("schedule needs omega' > 0, got {0}")]
    NonPositiveRate(f64),
    #[error("adiabatic phase integration needs at least 100 steps, got {0}")]
    TooFewSteps(usize),
    #[error("detuning tuner needs a schedule with nonzero detunings")]
    NoDetunings,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Energy-offset control: J(t) = J0 sin²(ω′t), J1(t) = J01 sin²(ω′t),
/// Δ_j(t) = Δ_j cos²(ω′t). The circulant phase is fixed at φ = π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetSchedule {
    pub j0: f64,
    pub j01: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub omega_prime: f64,
}

impl OffsetSchedule {
    pub fn t_max(&self) -> f64 {
        FRAC_PI_2 / self.omega_prime
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        if self.omega_prime <= 0.0 {
            return Err(ScheduleError::NonPositiveRate(self.omega_prime));
        }
        Ok(())
    }

    /// Detuning amplitudes scaled by a common factor, ratios preserved.
    pub fn with_detuning_scale(&self, scale: f64) -> OffsetSchedule {
        OffsetSchedule {
            delta1: self.delta1 * scale,
            delta2: self.delta2 * scale,
            delta3: self.delta3 * scale,
            ..*self
        }
    }

    /// H(t) = H_cir(J(t), J1(t), φ=π/2) + H_0(Δ(t)), valid for any t.
    pub fn hamiltonian(&self, t: f64) -> Operator {
        let s2 = (self.omega_prime * t).sin().powi(2);
        let c2 = (self.omega_prime * t).cos().powi(2);
        let cir = build_circulant(&CirculantParams::variant1(
            self.j0 * s2,
            self.j01 * s2,
            FRAC_PI_2,
        ));
        let off = build_offset(&OffsetParams::new(
            self.delta1 * c2,
            self.delta2 * c2,
            self.delta3 * c2,
        ));
        cir.add(&off)
    }
}

/// Rabi-frequency control: J(t) = J0 sin²(ω′t), J1(t) = J01 sin²(ω′t),
/// Ω2(t) = J01 + Υ0 cos²(ω′t), Ω3(t) = J0 + Υ′0 cos²(ω′t). At t_max the
/// drives meet the couplings and the Hamiltonian turns circulant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiSchedule {
    pub j0: f64,
    pub j01: f64,
    pub upsilon0: f64,
    pub upsilon0_prime: f64,
    pub omega_prime: f64,
    pub phi: f64,
}

impl RabiSchedule {
    pub fn t_max(&self) -> f64 {
        FRAC_PI_2 / self.omega_prime
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        if self.omega_prime <= 0.0 {
            return Err(ScheduleError::NonPositiveRate(self.omega_prime));
        }
        Ok(())
    }

    pub fn params_at(&self, t: f64) -> RotatingParams {
        let s2 = (self.omega_prime * t).sin().powi(2);
        let c2 = (self.omega_prime * t).cos().powi(2);
        RotatingParams {
            j: self.j0 * s2,
            j1: self.j01 * s2,
            omega2: self.j01 + self.upsilon0 * c2,
            omega3: self.j0 + self.upsilon0_prime * c2,
            phi: self.phi,
        }
    }

    pub fn hamiltonian(&self, t: f64) -> Operator {
        build_rotating(&self.params_at(t))
    }
}

fn check_window(t: f64, t_max: f64) -> Result<(), ScheduleError> {
    let slack = 1e-12 * t_max.max(1.0);
    if t < -slack || t > t_max + slack {
        return Err(ScheduleError::TimeOutOfRange { t, t_max });
    }
    Ok(())
}

/// Schedule values (J, J1, Δ1, Δ2, Δ3) at time t ∈ [0, t_max].
pub fn offset_at(s: &OffsetSchedule, t: f64) -> Result<(f64, f64, f64, f64, f64), ScheduleError> {
    s.validate()?;
    check_window(t, s.t_max())?;
    let s2 = (s.omega_prime * t).sin().powi(2);
    let c2 = (s.omega_prime * t).cos().powi(2);
    Ok((
        s.j0 * s2,
        s.j01 * s2,
        s.delta1 * c2,
        s.delta2 * c2,
        s.delta3 * c2,
    ))
}

/// Schedule values (J, J1, Ω2, Ω3) at time t ∈ [0, t_max].
pub fn rabi_at(s: &RabiSchedule, t: f64) -> Result<(f64, f64, f64, f64), ScheduleError> {
    s.validate()?;
    check_window(t, s.t_max())?;
    let p = s.params_at(t);
    Ok((p.j, p.j1, p.omega2, p.omega3))
}

/// Adiabatic phases of either control scheme.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSet {
    /// α1..α4: integrals of the four branches that start on
    /// |↓↓↓⟩, |↓↓↑⟩, |↓↑↓⟩, |↓↑↑⟩ at t = 0.
    Offset { alpha: [f64; 4] },
    /// β0..β7: integrals of the eight branches matched to the rotating
    /// product states at t = 0.
    Rabi { beta: [f64; 8] },
}

#[derive(Debug, Clone)]
pub struct PhaseReport {
    pub phases: PhaseSet,
    /// True when branch tracking hit a near-degeneracy somewhere on the grid.
    pub degeneracy_warned: bool,
}

fn trapezoid(times: &[f64], values: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for k in 1..times.len() {
        acc += 0.5 * (values(k - 1) + values(k)) * (times[k] - times[k - 1]);
    }
    acc
}

/// Composite-trapezoid integral of the tracked numeric eigenbranches over
/// [0, t_max]. The closed-form spectra are not used here.
pub fn adiabatic_phases_offset(
    s: &OffsetSchedule,
    steps: usize,
) -> Result<PhaseReport, ScheduleError> {
    s.validate()?;
    if steps < 100 {
        return Err(ScheduleError::TooFewSteps(steps));
    }
    let t_max = s.t_max();
    let grid: Vec<f64> = (0..=steps)
        .map(|k| t_max * k as f64 / steps as f64)
        .collect();
    let branches = track_spectrum(|t| s.hamiltonian(t), &grid)?;

    // At t = 0 the Hamiltonian is the bare offset, so the eigenvectors are
    // basis states; α_k integrates the branch starting on basis index k.
    let targets: Vec<StateVector> = (0..4).map(StateVector::basis).collect();
    let matched = branches.match_initial_states(&targets);
    let mut alpha = [0.0f64; 4];
    for (k, a) in alpha.iter_mut().enumerate() {
        *a = trapezoid(&branches.times, |idx| branches.value(matched[k], idx));
    }
    Ok(PhaseReport {
        phases: PhaseSet::Offset { alpha },
        degeneracy_warned: !branches.degeneracy_warnings.is_empty(),
    })
}

/// β_i integrates the branch matched by overlap to the i-th rotating product
/// state at t = 0.
pub fn adiabatic_phases_rabi(s: &RabiSchedule, steps: usize) -> Result<PhaseReport, ScheduleError> {
    s.validate()?;
    if steps < 100 {
        return Err(ScheduleError::TooFewSteps(steps));
    }
    let t_max = s.t_max();
    let grid: Vec<f64> = (0..=steps)
        .map(|k| t_max * k as f64 / steps as f64)
        .collect();
    let branches = track_spectrum(|t| s.hamiltonian(t), &grid)?;

    let targets: Vec<StateVector> = (0..8)
        .map(|i| crate::spectra::rotating_spin_state(i, s.phi))
        .collect();
    let matched = branches.match_initial_states(&targets);
    let mut beta = [0.0f64; 8];
    for (i, b_out) in beta.iter_mut().enumerate() {
        *b_out = trapezoid(&branches.times, |idx| branches.value(matched[i], idx));
    }
    Ok(PhaseReport {
        phases: PhaseSet::Rabi { beta },
        degeneracy_warned: !branches.degeneracy_warnings.is_empty(),
    })
}

/// Outcome of the detuning tuner.
#[derive(Debug, Clone)]
pub struct TuneReport {
    /// Common factor applied to (Δ1, Δ2, Δ3).
    pub scale: f64,
    /// Phases α1..α4 of the returned schedule.
    pub alpha: [f64; 4],
    /// Distance of each phase from its nearest 2π multiple, rad.
    pub residuals: [f64; 4],
    /// The integer multiples the phases landed on.
    pub multiples: [i64; 4],
    /// All four residuals within tolerance.
    pub converged: bool,
}

const TUNE_STEPS: usize = 1200;
const TUNE_BRACKET: (f64, f64) = (0.5, 2.0);

fn phase_residuals(alpha: &[f64; 4]) -> ([f64; 4], [i64; 4]) {
    let mut res = [0.0f64; 4];
    let mut mult = [0i64; 4];
    for k in 0..4 {
        let m = (alpha[k] / (2.0 * PI)).round();
        mult[k] = m as i64;
        res[k] = (alpha[k] - 2.0 * PI * m).abs();
    }
    (res, mult)
}

/// Scale all three detuning amplitudes by a common factor (ratios preserved)
/// so every adiabatic phase α1..α4 sits within `tolerance` of a 2π multiple.
///
/// One scalar knob cannot always satisfy four conditions; when the search
/// bracket [0.5, 2.0] contains no factor that does, the best scale found is
/// returned with `converged = false`.
pub fn tune_detunings(
    s: &OffsetSchedule,
    tolerance: f64,
) -> Result<(OffsetSchedule, TuneReport), ScheduleError> {
    s.validate()?;
    if s.delta1 == 0.0 && s.delta2 == 0.0 && s.delta3 == 0.0 {
        return Err(ScheduleError::NoDetunings);
    }

    let alphas_at = |scale: f64| -> Result<[f64; 4], ScheduleError> {
        let scaled = s.with_detuning_scale(scale);
        match adiabatic_phases_offset(&scaled, TUNE_STEPS)?.phases {
            PhaseSet::Offset { alpha } => Ok(alpha),
            PhaseSet::Rabi { .. } => unreachable!(),
        }
    };
    let worst_at = |scale: f64| -> Result<f64, ScheduleError> {
        let (res, _) = phase_residuals(&alphas_at(scale)?);
        Ok(res.iter().fold(0.0f64, |a, &b| a.max(b)))
    };

    // Fixed point first: a schedule already on the condition returns scale 1.
    let mut best_scale = 1.0;
    let mut best_worst = worst_at(1.0)?;

    if best_worst > tolerance {
        let (lo, hi) = TUNE_BRACKET;
        let coarse = 151;
        for k in 0..coarse {
            let c = lo + (hi - lo) * k as f64 / (coarse - 1) as f64;
            let w = worst_at(c)?;
            if w < best_worst {
                best_worst = w;
                best_scale = c;
            }
        }
        // Local refinement around the best coarse point.
        let mut half_width = (hi - lo) / (coarse - 1) as f64;
        for _ in 0..4 {
            let lo_r = (best_scale - half_width).max(lo);
            let hi_r = (best_scale + half_width).min(hi);
            for k in 0..=20 {
                let c = lo_r + (hi_r - lo_r) * k as f64 / 20.0;
                let w = worst_at(c)?;
                if w < best_worst {
                    best_worst = w;
                    best_scale = c;
                }
            }
            half_width /= 10.0;
        }
    }

    let tuned = s.with_detuning_scale(best_scale);
    let alpha = alphas_at(best_scale)?;
    let (residuals, multiples) = phase_residuals(&alpha);
    let report = TuneReport {
        scale: best_scale,
        alpha,
        residuals,
        multiples,
        converged: residuals.iter().all(|&r| r <= tolerance),
    };
    Ok((tuned, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::assert_close;

    const TAU: f64 = 2.0 * PI;

    fn fig5_schedule() -> RabiSchedule {
        RabiSchedule {
            j0: TAU * 2.1,
            j01: TAU * 2.4,
            upsilon0: TAU * 1.9,
            upsilon0_prime: TAU * 2.0,
            omega_prime: TAU * 0.3,
            phi: PI / 4.0,
        }
    }

    #[test]
    fn t_max_matches_quoted_gate_time() {
        // ω'/2π = 0.3 kHz must land within 0.5% of 0.835 ms.
        let s = fig5_schedule();
        let t_max = s.t_max();
        assert!((t_max - 0.835).abs() / 0.835 < 0.005, "t_max = {t_max}");
    }

    #[test]
    fn offset_boundaries() {
        let s = OffsetSchedule {
            j0: 1.0,
            j01: 2.0,
            delta1: 4.0,
            delta2: 2.0,
            delta3: 1.0,
            omega_prime: 0.4,
        };
        let t_max = s.t_max();
        let (j, j1, d1, d2, d3) = offset_at(&s, 0.0).unwrap();
        assert_eq!((j, j1), (0.0, 0.0));
        assert_eq!((d1, d2, d3), (4.0, 2.0, 1.0));

        let (j, j1, d1, d2, d3) = offset_at(&s, t_max).unwrap();
        assert_close(j, 1.0, 1e-12);
        assert_close(j1, 2.0, 1e-12);
        assert!(d1.abs() < 1e-12 && d2.abs() < 1e-12 && d3.abs() < 1e-12);

        let (j, j1, d1, _, _) = offset_at(&s, t_max / 2.0).unwrap();
        assert_close(j, 0.5, 1e-12);
        assert_close(j1, 1.0, 1e-12);
        assert_close(d1, 2.0, 1e-12);

        assert!(offset_at(&s, -0.1).is_err());
        assert!(offset_at(&s, t_max + 0.1).is_err());
    }

    #[test]
    fn rabi_boundaries() {
        let s = RabiSchedule {
            j0: 1.0,
            j01: 2.0,
            upsilon0: 0.5,
            upsilon0_prime: 0.25,
            omega_prime: 0.4,
            phi: PI / 4.0,
        };
        let t_max = s.t_max();
        let (j, j1, o2, o3) = rabi_at(&s, 0.0).unwrap();
        assert_eq!((j, j1), (0.0, 0.0));
        assert_close(o2, 2.5, 1e-12);
        assert_close(o3, 1.25, 1e-12);

        // Final point is the circulant point: Ω2 = J1, Ω3 = J.
        let (j, j1, o2, o3) = rabi_at(&s, t_max).unwrap();
        assert_close(j, 1.0, 1e-12);
        assert_close(j1, 2.0, 1e-12);
        assert_close(o2, 2.0, 1e-12);
        assert_close(o3, 1.0, 1e-12);

        let (j, j1, o2, o3) = rabi_at(&s, t_max / 2.0).unwrap();
        assert_close(j, 0.5, 1e-12);
        assert_close(j1, 1.0, 1e-12);
        assert_close(o2, 2.25, 1e-12);
        assert_close(o3, 1.125, 1e-12);
    }

    #[test]
    fn zero_amplitude_phases_vanish() {
        let s = OffsetSchedule {
            j0: 0.0,
            j01: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            delta3: 0.0,
            omega_prime: 1.0,
        };
        match adiabatic_phases_offset(&s, 200).unwrap().phases {
            PhaseSet::Offset { alpha } => {
                for a in alpha {
                    assert!(a.abs() < 1e-12);
                }
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn offset_only_phases_analytic() {
        // J0 = J01 = 0: α_k = (±Δ1±Δ2±Δ3)·t_max/2 exactly.
        let s = OffsetSchedule {
            j0: 0.0,
            j01: 0.0,
            delta1: 4.0,
            delta2: 2.0,
            delta3: 1.0,
            omega_prime: 0.7,
        };
        let t_half = s.t_max() / 2.0;
        match adiabatic_phases_offset(&s, 2000).unwrap().phases {
            PhaseSet::Offset { alpha } => {
                assert_close(alpha[0], 7.0 * t_half, 1e-6);
                assert_close(alpha[1], 5.0 * t_half, 1e-6);
                assert_close(alpha[2], 3.0 * t_half, 1e-6);
                assert_close(alpha[3], 1.0 * t_half, 1e-6);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn tuner_fixed_point_offset_only() {
        // Offset-only: α_k = (±Δ1±Δ2±Δ3)·t_max/2 exactly. Δ = (8,4,2)·x has
        // sign sums (14,10,6,2)·x, so x·t_max/2 = π makes every phase an even
        // multiple of π, already satisfying the condition at scale 1.
        let omega_prime = 0.5f64;
        let t_max = FRAC_PI_2 / omega_prime;
        let x = 2.0 * PI / t_max; // x·t_max/2 = π
        let s = OffsetSchedule {
            j0: 0.0,
            j01: 0.0,
            delta1: 8.0 * x,
            delta2: 4.0 * x,
            delta3: 2.0 * x,
            omega_prime,
        };
        let (tuned, report) = tune_detunings(&s, 1e-3).unwrap();
        assert!(report.converged);
        assert_close(report.scale, 1.0, 1e-9);
        assert_eq!(tuned, s);
        assert_eq!(report.multiples, [7, 5, 3, 1]);
        for r in report.residuals {
            assert!(r < 1e-3);
        }
    }

    #[test]
    fn phase_integration_needs_enough_steps() {
        let s = fig5_schedule();
        assert!(matches!(
            adiabatic_phases_rabi(&s, 50),
            Err(ScheduleError::TooFewSteps(50))
        ));
    }

    #[test]
    fn rabi_phases_sum_to_zero() {
        // The rotating Hamiltonian is traceless, so the eight branch
        // integrals cancel exactly.
        let s = fig5_schedule();
        match adiabatic_phases_rabi(&s, 1500).unwrap().phases {
            PhaseSet::Rabi { beta } => {
                let sum: f64 = beta.iter().sum();
                let scale: f64 = beta.iter().map(|b| b.abs()).sum();
                assert!(sum.abs() < 1e-9 * scale.max(1.0), "Σβ = {sum:.3e}");
                assert!(
                    beta.iter().any(|b| b.abs() > 1.0),
                    "phases should be O(1) or larger"
                );
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn tuner_rejects_zero_detunings() {
        let s = OffsetSchedule {
            j0: 1.0,
            j01: 1.0,
            delta1: 0.0,
            delta2: 0.0,
            delta3: 0.0,
            omega_prime: 1.0,
        };
        assert!(matches!(
            tune_detunings(&s, 1e-3),
            Err(ScheduleError::NoDetunings)
        ));
    }
}
