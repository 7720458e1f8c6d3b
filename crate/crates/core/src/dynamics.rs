//! The QFT gate matrix, full time-evolution scenarios and the three fidelity
//! definitions: gate fidelity under the offset schedule, adiabatic-transfer
//! fidelity under the Rabi schedule (optionally with the counter-driving
//! correction), and the entangled-state creation fidelity.
//!
//! Fidelities are normalized so the ideal outcome is exactly 1: the trace
//! overlaps carry 1/64 and the four-mode superposition overlap carries 1/4.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::hamiltonians::build_counter_driving;
use crate::numerics::{
    hermitian_eigensystem, propagate_sampled, substeps_for, NumericsError, Operator, StateVector,
    DIM,
};
use crate::schedules::{OffsetSchedule, RabiSchedule, ScheduleError};
use crate::spectra::{
    fourier_modes, kappa_rate, rotating_spin_state, track_spectrum, SpectraError, SpectrumBranches,
};

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("not a density matrix: {0}")]
    InvalidDensity(String),
    #[error("need at least 2 output samples, got {0}")]
    TooFewSamples(usize),
}

/// Time-stamped fidelity samples, dimensionless in [0, 1] up to numerical
/// slack.
#[derive(Debug, Clone)]
pub struct FidelitySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl FidelitySeries {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("non-empty series")
    }

    /// Value at the sample closest to time t.
    pub fn at_nearest(&self, t: f64) -> f64 {
        let (mut best_k, mut best_d) = (0usize, f64::INFINITY);
        for (k, &tk) in self.times.iter().enumerate() {
            let d = (tk - t).abs();
            if d < best_d {
                best_d = d;
                best_k = k;
            }
        }
        self.values[best_k]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }
}

/// The three-qubit QFT gate: column k is Fourier mode ψ_k, except column 1
/// which carries the extra phase e^{-iπ/2} left over from the adiabatic
/// mapping once every dynamical phase is tuned to a 2π multiple.
pub fn qft_gate() -> Operator {
    let modes = fourier_modes();
    let mut g = Operator::zero();
    for (j, psi) in modes.psi.iter().enumerate() {
        let phase = if j == 1 {
            C64::new(0.0, -1.0)
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = *psi;
        for a in col.amps.iter_mut() {
            *a *= phase;
        }
        g.set_column(j, &col);
    }
    g
}

/// |Tr(G†·U)|²/64: 1 exactly when U equals G up to a global phase.
pub fn gate_fidelity(gate: &Operator, u: &Operator) -> f64 {
    let tr = gate.adjoint().mul(u).trace();
    tr.norm_sqr() / 64.0
}

/// One offset-schedule gate run: propagators on the sample grid and the
/// gate-fidelity series.
#[derive(Debug, Clone)]
pub struct OffsetGateRun {
    pub times: Vec<f64>,
    pub propagators: Vec<Operator>,
    pub fidelity: FidelitySeries,
    /// Worst ‖U†U - I‖_max over all emitted samples.
    pub max_unitarity_error: f64,
}

/// Evolve U(t) under H(t) = H_cir(J(t), J1(t), φ=π/2) + H_0(Δ(t)) and sample
/// F_Gate(t) = |Tr(G†·U(t))|²/64 on a uniform grid of `samples` points.
pub fn simulate_offset_gate(
    s: &OffsetSchedule,
    samples: usize,
) -> Result<OffsetGateRun, DynamicsError> {
    s.validate()?;
    if samples < 2 {
        return Err(DynamicsError::TooFewSamples(samples));
    }
    let t_max = s.t_max();
    let h_at = |t: f64| s.hamiltonian(t);
    let substeps = substeps_for(h_at, 0.0, t_max, samples);
    let (times, props) = propagate_sampled(h_at, 0.0, t_max, samples, substeps)?;

    let gate = qft_gate();
    let values: Vec<f64> = props.iter().map(|u| gate_fidelity(&gate, u)).collect();
    let max_unitarity_error = props
        .iter()
        .map(Operator::unitarity_error)
        .fold(0.0, f64::max);
    Ok(OffsetGateRun {
        fidelity: FidelitySeries {
            times: times.clone(),
            values,
        },
        times,
        propagators: props,
        max_unitarity_error,
    })
}

/// Common machinery of the Rabi-schedule scenarios: the sampled propagator,
/// the tracked bare-Hamiltonian branches, the eight initial states matched to
/// the rotating product states, and their running dynamical phases.
#[derive(Debug)]
pub struct RabiEvolution {
    pub times: Vec<f64>,
    pub propagators: Vec<Operator>,
    pub branches: SpectrumBranches,
    /// `branch_of[i]`: tracked branch whose t = 0 eigenvector is the initial
    /// state headed for Fourier mode ψ_i.
    pub branch_of: [usize; DIM],
    /// Initial states (t = 0 eigenvectors), re-phased so the overlap with
    /// their rotating product state is real and nonnegative.
    pub initials: [StateVector; DIM],
    /// `betas[i][k]` = ∫₀^{t_k} λ of `branch_of[i]` dt.
    pub betas: Vec<Vec<f64>>,
    pub max_unitarity_error: f64,
}

impl RabiEvolution {
    /// Evolved state for mode slot i at sample k, dynamical phase removed.
    pub fn stripped_state(&self, i: usize, k: usize) -> StateVector {
        let evolved = self.propagators[k].apply(&self.initials[i]);
        evolved.scaled(C64::from_polar(1.0, self.betas[i][k]))
    }
}

/// Propagate a Rabi schedule, optionally with the counter-driving field
/// H_CD(κ̇(t)) added to the Hamiltonian. Branch tracking and the dynamical
/// phases always come from the bare Hamiltonian.
pub fn evolve_rabi(
    s: &RabiSchedule,
    with_counter_driving: bool,
    samples: usize,
) -> Result<RabiEvolution, DynamicsError> {
    s.validate()?;
    if samples < 2 {
        return Err(DynamicsError::TooFewSamples(samples));
    }
    let t_max = s.t_max();
    let h_at = |t: f64| {
        let h = s.hamiltonian(t);
        if with_counter_driving {
            h.add(&build_counter_driving(kappa_rate(s, t)))
        } else {
            h
        }
    };
    let substeps = substeps_for(h_at, 0.0, t_max, samples);
    let (times, props) = propagate_sampled(h_at, 0.0, t_max, samples, substeps)?;

    let branches = track_spectrum(|t| s.hamiltonian(t), &times)?;
    let targets: Vec<StateVector> = (0..DIM).map(|i| rotating_spin_state(i, s.phi)).collect();
    let matched = branches.match_initial_states(&targets);
    let branch_of: [usize; DIM] = core::array::from_fn(|i| matched[i]);

    let initials: [StateVector; DIM] = core::array::from_fn(|i| {
        let v = *branches.vector(branch_of[i], 0);
        let ov = targets[i].dot(&v);
        if ov.norm() > 0.0 {
            v.scaled(ov.conj() / ov.norm())
        } else {
            v
        }
    });
    let betas: Vec<Vec<f64>> = (0..DIM)
        .map(|i| branches.running_integral(branch_of[i]))
        .collect();
    let max_unitarity_error = props
        .iter()
        .map(Operator::unitarity_error)
        .fold(0.0, f64::max);

    Ok(RabiEvolution {
        times,
        propagators: props,
        branches,
        branch_of,
        initials,
        betas,
        max_unitarity_error,
    })
}

/// One adiabatic-transfer run: the fidelity series plus the per-sample
/// overlap of each evolved state with its instantaneous eigenvector.
#[derive(Debug)]
pub struct AdiabaticRun {
    pub fidelity: FidelitySeries,
    /// `branch_overlaps[k][i]` = |⟨v_i(t_k)|evolved_i(t_k)⟩|.
    pub branch_overlaps: Vec<[f64; DIM]>,
    pub max_unitarity_error: f64,
    pub evolution: RabiEvolution,
}

/// F_ad(t) = |Σ_i ⟨ψ_i|Λ̃_i(t)⟩|²/64 over the eight initial states, where
/// Λ̃_i is the evolved state with the dynamical phase e^{-iβ_i(t)} removed.
pub fn simulate_adiabatic(
    s: &RabiSchedule,
    with_counter_driving: bool,
    samples: usize,
) -> Result<AdiabaticRun, DynamicsError> {
    let ev = evolve_rabi(s, with_counter_driving, samples)?;
    let modes = fourier_modes();
    let n = ev.times.len();

    let mut values = Vec::with_capacity(n);
    let mut branch_overlaps = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        let mut overlaps = [0.0f64; DIM];
        for (i, overlap) in overlaps.iter_mut().enumerate() {
            let stripped = ev.stripped_state(i, k);
            acc += modes.psi[i].dot(&stripped);
            *overlap = ev.branches.vector(ev.branch_of[i], k).dot(&stripped).norm();
        }
        values.push(acc.norm_sqr() / 64.0);
        branch_overlaps.push(overlaps);
    }

    Ok(AdiabaticRun {
        fidelity: FidelitySeries {
            times: ev.times.clone(),
            values,
        },
        branch_overlaps,
        max_unitarity_error: ev.max_unitarity_error,
        evolution: ev,
    })
}

/// Which basis a prepared four-component superposition lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuperpositionBasis {
    /// (1/2)·Σ_k e^{iφ_k}|k⟩ over the first four computational states.
    Computational,
    /// (1/2)·Σ_k e^{iφ_k}·|rotating product k⟩ with the given circulant phase.
    Rotating { phi: f64 },
}

/// The four-term superposition that the gate turns into an entangled state.
pub fn prepare_superposition(phases: &[f64; 4], basis: SuperpositionBasis) -> StateVector {
    let mut v = StateVector::zero();
    for (k, &phase) in phases.iter().enumerate() {
        let component = match basis {
            SuperpositionBasis::Computational => StateVector::basis(k),
            SuperpositionBasis::Rotating { phi } => rotating_spin_state(k, phi),
        };
        v = v.add(&component.scaled(C64::from_polar(0.5, phase)));
    }
    v
}

/// The target of the entangling run, (1/2)(ψ0 + ψ1 + ψ2 + ψ3).
pub fn entangled_target() -> StateVector {
    let modes = fourier_modes();
    let mut v = StateVector::zero();
    for psi in modes.psi.iter().take(4) {
        v = v.add(&psi.scaled(C64::new(0.5, 0.0)));
    }
    v
}

/// F(t) = |(1/2)·Σ_{i=0..3} ⟨ψ_target|Λ̃_i(t)⟩|² with the dynamical phases
/// removed as in the adiabatic fidelity; 1 exactly when all four evolved
/// states land on their Fourier modes.
pub fn entangle_fidelity(
    s: &RabiSchedule,
    samples: usize,
) -> Result<FidelitySeries, DynamicsError> {
    let ev = evolve_rabi(s, false, samples)?;
    let target = entangled_target();
    let n = ev.times.len();
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..4 {
            acc += target.dot(&ev.stripped_state(i, k));
        }
        values.push((acc * 0.5).norm_sqr());
    }
    Ok(FidelitySeries {
        times: ev.times,
        values,
    })
}

/// 8×8 density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, Copy)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn from_operator(op: Operator) -> Result<Self, DynamicsError> {
        let asym = op.hermiticity_error();
        if asym > 1e-10 {
            return Err(DynamicsError::InvalidDensity(format!(
                "hermiticity error {asym:.3e}"
            )));
        }
        let tr = op.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(DynamicsError::InvalidDensity(format!(
                "trace {tr} is not 1"
            )));
        }
        let eig = hermitian_eigensystem(&op).map_err(DynamicsError::Numerics)?;
        if let Some(bad) = eig.values.iter().find(|&&v| v < -1e-10) {
            return Err(DynamicsError::InvalidDensity(format!(
                "negative eigenvalue {bad:.3e}"
            )));
        }
        Ok(DensityMatrix { op })
    }

    /// |ψ⟩⟨ψ| for a normalized state.
    pub fn pure(v: &StateVector) -> Self {
        let v = v.normalized();
        let mut op = Operator::zero();
        for r in 0..DIM {
            for c in 0..DIM {
                op.entries[r][c] = v.amps[r] * v.amps[c].conj();
            }
        }
        DensityMatrix { op }
    }

    pub fn as_operator(&self) -> &Operator {
        &self.op
    }

    fn sqrt(&self) -> Result<Operator, DynamicsError> {
        let eig = hermitian_eigensystem(&self.op)?;
        let mut out = Operator::zero();
        for k in 0..DIM {
            let root = eig.values[k].max(0.0).sqrt();
            let v = &eig.vectors[k];
            for r in 0..DIM {
                for c in 0..DIM {
                    out.entries[r][c] += C64::new(root, 0.0) * v.amps[r] * v.amps[c].conj();
                }
            }
        }
        Ok(out)
    }
}

/// General mixed-state fidelity (Tr√(√ρ0·ρ·√ρ0))², via Hermitian square
/// roots from the eigensystem. Equals |⟨ψ0|ψ⟩|² on pure states.
pub fn uhlmann_fidelity(rho0: &DensityMatrix, rho: &DensityMatrix) -> Result<f64, DynamicsError> {
    let s0 = rho0.sqrt()?;
    let m = s0.mul(rho.as_operator()).mul(&s0);
    let eig = hermitian_eigensystem(&m)?;
    // Square roots amplify eigensolver noise on the null space, so drop
    // eigenvalues below the relative floor before taking them.
    let lmax = eig.values.iter().fold(0.0f64, |a, &v| a.max(v));
    let floor = 1e-12 * lmax;
    let tr_sqrt: f64 = eig
        .values
        .iter()
        .filter(|&&v| v > floor)
        .map(|&v| v.sqrt())
        .sum();
    Ok(tr_sqrt * tr_sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::fourier_modes;
    use crate::testutil::{assert_close, SplitMix64};
    use std::f64::consts::{FRAC_PI_4, PI};

    const TAU: f64 = 2.0 * PI;
    const NORM: f64 = crate::spectra::MODE_NORM;

    #[test]
    fn gate_first_row_entries() {
        let g = qft_gate();
        assert!((g.entries[0][0] - C64::new(NORM, 0.0)).norm() < 1e-15);
        assert!((g.entries[0][1] - C64::new(0.0, -NORM)).norm() < 1e-15);
    }

    #[test]
    fn gate_is_unitary() {
        let g = qft_gate();
        assert!(g.unitarity_error() < 1e-14);
    }

    #[test]
    fn gate_determinant_modulus_one() {
        // Direct LU evaluation: det(G) = 1 exactly. The -iπ/2 phase on
        // column 1 cancels the +iπ/2 determinant of the bare mode matrix.
        let g = qft_gate();
        let det = g.determinant();
        assert_close(det.norm(), 1.0, 1e-10);
        assert_close(det.arg(), 0.0, 1e-10);
    }

    #[test]
    fn gate_sends_down_down_down_to_mode_zero() {
        let g = qft_gate();
        let out = g.apply(&StateVector::basis(0));
        let psi0 = fourier_modes().psi[0];
        assert!(out.sub(&psi0).norm() < 1e-14);
    }

    #[test]
    fn gate_fidelity_global_phase_invariant() {
        let g = qft_gate();
        let mut rng = SplitMix64::new(0x5eed_0300);
        for _ in 0..10 {
            let theta = rng.uniform(0.0, TAU);
            let u = g.scaled(C64::from_polar(1.0, theta));
            assert_close(gate_fidelity(&g, &u), 1.0, 1e-12);
        }
    }

    #[test]
    fn null_offset_schedule_keeps_identity() {
        let s = OffsetSchedule {
            j0: 0.0,
            j01: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            delta3: 0.0,
            omega_prime: 1.0,
        };
        let run = simulate_offset_gate(&s, 50).unwrap();
        let g = qft_gate();
        let constant = g.adjoint().trace().norm_sqr() / 64.0;
        for (k, u) in run.propagators.iter().enumerate() {
            assert!(u.sub(&Operator::identity()).norm_max() < 1e-12);
            assert_close(run.fidelity.values[k], constant, 1e-12);
        }
    }

    #[test]
    fn prepare_superposition_norms() {
        let v = prepare_superposition(&[0.0; 4], SuperpositionBasis::Computational);
        assert_close(v.norm(), 1.0, 1e-14);
        for k in 0..4 {
            assert!((v.amps[k] - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
        for k in 4..8 {
            assert_eq!(v.amps[k].norm(), 0.0);
        }
        let mut rng = SplitMix64::new(0x5eed_0301);
        for _ in 0..20 {
            let phases = [
                rng.uniform(0.0, TAU),
                rng.uniform(0.0, TAU),
                rng.uniform(0.0, TAU),
                rng.uniform(0.0, TAU),
            ];
            let v = prepare_superposition(&phases, SuperpositionBasis::Computational);
            assert_close(v.norm(), 1.0, 1e-14);
            let w = prepare_superposition(&phases, SuperpositionBasis::Rotating { phi: FRAC_PI_4 });
            assert_close(w.norm(), 1.0, 1e-14);
        }
    }

    #[test]
    fn entangled_target_normalization_checks() {
        // Perfect-adiabatic idealization: targets substituted for the evolved
        // states give exactly 1.
        let target = entangled_target();
        let modes = fourier_modes();
        let mut acc = C64::new(0.0, 0.0);
        for psi in modes.psi.iter().take(4) {
            acc += target.dot(psi);
        }
        assert_close((acc * 0.5).norm_sqr(), 1.0, 1e-12);

        // Orthogonal bundle (ψ4..ψ7) gives exactly 0.
        let mut acc = C64::new(0.0, 0.0);
        for psi in modes.psi.iter().skip(4) {
            acc += target.dot(psi);
        }
        assert!((acc * 0.5).norm_sqr() < 1e-10);
    }

    #[test]
    fn uhlmann_pure_state_cases() {
        let modes = fourier_modes();
        let rho0 = DensityMatrix::pure(&modes.psi[0]);
        assert_close(uhlmann_fidelity(&rho0, &rho0).unwrap(), 1.0, 1e-10);

        let rho1 = DensityMatrix::pure(&modes.psi[3]);
        assert!(uhlmann_fidelity(&rho0, &rho1).unwrap() < 1e-10);
    }

    #[test]
    fn uhlmann_matches_overlap_on_random_pure_pairs() {
        let mut rng = SplitMix64::new(0x5eed_0302);
        for _ in 0..100 {
            let mut a = StateVector::zero();
            let mut b = StateVector::zero();
            for k in 0..DIM {
                a.amps[k] = C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
                b.amps[k] = C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            }
            let a = a.normalized();
            let b = b.normalized();
            let f = uhlmann_fidelity(&DensityMatrix::pure(&a), &DensityMatrix::pure(&b)).unwrap();
            let overlap = a.dot(&b).norm_sqr();
            assert_close(f, overlap, 1e-10);
        }
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        // Trace 2.
        let mut op = Operator::zero();
        op.entries[0][0] = C64::new(2.0, 0.0);
        assert!(DensityMatrix::from_operator(op).is_err());

        // Negative eigenvalue.
        let mut op = Operator::zero();
        op.entries[0][0] = C64::new(1.5, 0.0);
        op.entries[1][1] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::from_operator(op).is_err());

        // Non-Hermitian.
        let mut op = Operator::identity().scaled(C64::new(1.0 / 8.0, 0.0));
        op.entries[0][1] = C64::new(0.3, 0.0);
        assert!(DensityMatrix::from_operator(op).is_err());
    }
}
