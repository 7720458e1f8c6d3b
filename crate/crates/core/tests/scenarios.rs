//! Figure-level scenario runs pinned as regression baselines.
//!
//! The pinned fidelity numbers are the values this model actually produces;
//! see the acceptance suite for how they compare against the quoted reference
//! targets. The structural degeneracy of the circulant family (modes 1/5 and
//! 3/7 always share an eigenvalue) routes the adiabatic transfer onto a
//! different mode permutation than the gate matrix assumes, which is why the
//! trace-overlap fidelities sit far below 1.

mod common;

use num_complex::Complex64 as C64;

use circulant_qft::dynamics::{
    entangle_fidelity, entangled_target, evolve_rabi, prepare_superposition, simulate_adiabatic,
    simulate_offset_gate, SuperpositionBasis,
};
use circulant_qft::numerics::evolve_propagator;
use circulant_qft::schedules::{adiabatic_phases_offset, tune_detunings, PhaseSet};
use circulant_qft::spectra::{adiabaticity_report, track_spectrum};
use common::*;

fn assert_near(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:.9}, pinned {want:.9} (tol {tol:.1e})"
    );
}

#[test]
fn gate_fidelity_run_regression() {
    let run = simulate_offset_gate(&gate_schedule(), 2000).unwrap();
    assert!(run.max_unitarity_error < 1e-9);
    for &v in &run.fidelity.values {
        assert!((0.0..=1.0 + 1e-9).contains(&v));
    }
    assert_near(
        run.fidelity.at_nearest(0.4875),
        0.029709437261,
        5e-4,
        "F_Gate(0.4875 ms)",
    );
    assert_near(run.fidelity.last(), 0.027640350896, 5e-4, "F_Gate(t_max)");
    assert_near(run.fidelity.max(), 0.049835325238, 5e-4, "max F_Gate");
}

#[test]
fn adiabatic_run_regression_with_and_without_cd() {
    let s = adiabatic_schedule();
    let plain = simulate_adiabatic(&s, false, 2000).unwrap();
    let driven = simulate_adiabatic(&s, true, 2000).unwrap();

    assert!(plain.max_unitarity_error < 1e-9);
    assert!(driven.max_unitarity_error < 1e-9);
    for &v in plain.fidelity.values.iter().chain(&driven.fidelity.values) {
        assert!((0.0..=1.0 + 1e-9).contains(&v));
    }

    assert_near(plain.fidelity.values[0], 0.027645976794, 5e-4, "F_ad(0)");
    assert_near(plain.fidelity.last(), 0.038821892579, 5e-4, "F_ad(t_max)");
    assert_near(
        driven.fidelity.last(),
        0.039275897274,
        5e-4,
        "F_ad_CD(t_max)",
    );
    assert!(
        driven.fidelity.last() > plain.fidelity.last(),
        "counter-driving must improve the final fidelity"
    );

    // The counter-driving correction improves the corrected-subspace
    // overlaps on balance but not pointwise: the worst per-sample deficit on
    // branches 0, 1, 4, 5 stays below 1e-3 (measured 3.77e-4).
    let mut worst = 0.0f64;
    for k in 0..plain.branch_overlaps.len() {
        for i in [0usize, 1, 4, 5] {
            worst = worst.max(plain.branch_overlaps[k][i] - driven.branch_overlaps[k][i]);
        }
    }
    assert!(worst < 1e-3, "CD overlap deficit {worst:.3e}");
}

#[test]
fn slower_tuned_gate_regression() {
    // Re-tuned phases at ω′ and ω′/2. Slowing the schedule makes the
    // evolution settle more cleanly onto the mode permutation the dynamics
    // actually realizes, which lowers the trace overlap against the target
    // gate; values pinned as measured.
    let base = gate_schedule();
    let (tuned, report) = tune_detunings(&base, 1e-3).unwrap();
    assert!(!report.converged);
    let f_base = simulate_offset_gate(&tuned, 1000).unwrap().fidelity.last();

    let mut slower = base;
    slower.omega_prime = base.omega_prime / 2.0;
    let (tuned_slow, _) = tune_detunings(&slower, 1e-3).unwrap();
    let f_slow = simulate_offset_gate(&tuned_slow, 1000)
        .unwrap()
        .fidelity
        .last();

    assert_near(f_base, 0.021794, 2e-3, "tuned F_Gate(t_max)");
    assert_near(f_slow, 0.017786, 2e-3, "tuned F_Gate(t_max), ω′/2");
}

#[test]
fn detuning_tuner_regression() {
    let (_, report) = tune_detunings(&gate_schedule(), 1e-3).unwrap();
    assert!(
        !report.converged,
        "one knob cannot satisfy four phase conditions here"
    );
    assert_near(report.scale, 1.9892, 0.02, "tuner scale");
    assert_eq!(report.multiples, [18, 12, 8, 2]);
    let worst = report.residuals.iter().fold(0.0f64, |a, &b| a.max(b));
    assert_near(worst, 0.1281, 0.02, "worst phase residual");
}

// Classic RK4 on dU/dt = -i·H(t)·U: an integrator with no eigensolver in it,
// kept here purely as an independent oracle for the propagation layer.
fn rk4_propagator(
    h_at: impl Fn(f64) -> circulant_qft::Operator,
    t0: f64,
    t1: f64,
    steps: usize,
) -> circulant_qft::Operator {
    let dt = (t1 - t0) / steps as f64;
    let minus_i = C64::new(0.0, -1.0);
    let mut u = circulant_qft::Operator::identity();
    let f = |tt: f64, uu: &circulant_qft::Operator| h_at(tt).mul(uu).scaled(minus_i);
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        let k1 = f(t, &u);
        let k2 = f(t + dt / 2.0, &u.add(&k1.scaled(C64::new(dt / 2.0, 0.0))));
        let k3 = f(t + dt / 2.0, &u.add(&k2.scaled(C64::new(dt / 2.0, 0.0))));
        let k4 = f(t + dt, &u.add(&k3.scaled(C64::new(dt, 0.0))));
        let incr = k1
            .add(&k2.scaled(C64::new(2.0, 0.0)))
            .add(&k3.scaled(C64::new(2.0, 0.0)))
            .add(&k4);
        u = u.add(&incr.scaled(C64::new(dt / 6.0, 0.0)));
    }
    u
}

#[test]
fn midpoint_exponential_agrees_with_rk4() {
    let s = adiabatic_schedule();
    let t_max = s.t_max();
    let h_at = |t: f64| s.hamiltonian(t);
    let u_rk4 = rk4_propagator(h_at, 0.0, t_max, 60_000);
    let u_lib = evolve_propagator(h_at, 0.0, t_max, 20_000).unwrap();
    let diff = u_lib.sub(&u_rk4).norm_max();
    assert!(
        diff < 1e-7,
        "independent integrators disagree by {diff:.3e}"
    );
}

#[test]
fn propagator_step_halving_convergence() {
    // Second-order stepping: halving the step size quarters the defect.
    let s = gate_schedule();
    let t_max = s.t_max();
    let h = |t: f64| s.hamiltonian(t);
    let coarse = evolve_propagator(h, 0.0, t_max, 8000).unwrap();
    let fine = evolve_propagator(h, 0.0, t_max, 16000).unwrap();
    let diff = coarse.sub(&fine).norm_max();
    assert!(diff < 1e-7, "step-halving defect {diff:.3e}");
}

#[test]
fn prepared_superposition_matches_entangle_route() {
    // Preparing (1/2)·Σ e^{+iβ_i(t_f)}|init_i⟩ and evolving once must give
    // the same final fidelity as the per-branch entangling formula.
    let s = entangle_base(0.5);
    let samples = 400;
    let series = entangle_fidelity(&s, samples).unwrap();

    let ev = evolve_rabi(&s, false, samples).unwrap();
    let last = ev.times.len() - 1;
    let phases: [f64; 4] = core::array::from_fn(|i| ev.betas[i][last]);
    // prepare_superposition spans the rotating product states; the initial
    // eigenvectors differ from them slightly, so build the superposition from
    // the matched initials directly and check the product-state route too.
    let mut prepared = circulant_qft::StateVector::zero();
    for i in 0..4 {
        prepared = prepared.add(&ev.initials[i].scaled(C64::from_polar(0.5, phases[i])));
    }
    let target = entangled_target();
    let f_state = target
        .dot(&ev.propagators[last].apply(&prepared))
        .norm_sqr();
    assert!(
        (f_state - series.last()).abs() < 1e-9,
        "state route {f_state:.9} vs series route {:.9}",
        series.last()
    );

    // The product-state preparation is the physical protocol; the initials
    // are not exactly the product states, so it lands elsewhere. Measured
    // value pinned.
    let rotated = prepare_superposition(&phases, SuperpositionBasis::Rotating { phi: s.phi });
    let f_product = target.dot(&ev.propagators[last].apply(&rotated)).norm_sqr();
    assert!(
        (f_product - 0.367778).abs() < 1e-3,
        "product-state route regression: {f_product:.6}"
    );
}

#[test]
fn adiabatic_phase_convergence() {
    // Doubling the integration steps moves each phase by < 1e-6 rad.
    let s = gate_schedule();
    let coarse = match adiabatic_phases_offset(&s, 8000).unwrap().phases {
        PhaseSet::Offset { alpha } => alpha,
        _ => unreachable!(),
    };
    let fine = match adiabatic_phases_offset(&s, 16000).unwrap().phases {
        PhaseSet::Offset { alpha } => alpha,
        _ => unreachable!(),
    };
    for k in 0..4 {
        assert!(
            (coarse[k] - fine[k]).abs() < 1e-6,
            "phase {k} moved by {:.3e}",
            (coarse[k] - fine[k]).abs()
        );
    }
}

#[test]
fn fidelity_ranges_on_random_schedules() {
    // Every fidelity sample stays in [0, 1 + 1e-9] whatever the schedule.
    let mut rng = SplitMix64::new(0x5eed_0500);
    for _ in 0..4 {
        let offset = circulant_qft::schedules::OffsetSchedule {
            j0: TAU * rng.uniform(0.2, 3.0),
            j01: TAU * rng.uniform(0.2, 3.0),
            delta1: TAU * rng.uniform(1.0, 30.0),
            delta2: TAU * rng.uniform(1.0, 30.0),
            delta3: TAU * rng.uniform(1.0, 30.0),
            omega_prime: TAU * rng.uniform(0.2, 1.0),
        };
        let run = simulate_offset_gate(&offset, 200).unwrap();
        assert!(run.max_unitarity_error < 1e-9);
        for &v in &run.fidelity.values {
            assert!((0.0..=1.0 + 1e-9).contains(&v), "F_Gate sample {v}");
        }

        let rabi = circulant_qft::schedules::RabiSchedule {
            j0: TAU * rng.uniform(0.5, 3.0),
            j01: TAU * rng.uniform(0.5, 3.0),
            upsilon0: TAU * rng.uniform(0.0, 2.5),
            upsilon0_prime: TAU * rng.uniform(0.0, 2.5),
            omega_prime: TAU * rng.uniform(0.2, 0.8),
            phi: std::f64::consts::FRAC_PI_4,
        };
        let run = simulate_adiabatic(&rabi, rng.next_f64() < 0.5, 200).unwrap();
        assert!(run.max_unitarity_error < 1e-9);
        for &v in &run.fidelity.values {
            assert!((0.0..=1.0 + 1e-9).contains(&v), "F_ad sample {v}");
        }
    }
}

#[test]
fn adiabaticity_margin_profile() {
    // Gap-to-coupling margins on the eigenfrequency-figure schedule: large
    // through most of the window, collapsing toward the analytically
    // degenerate circulant endpoint.
    let s = spectrum_schedule();
    let t_max = s.t_max();
    let grid: Vec<f64> = (0..2000).map(|k| t_max * k as f64 / 1999.0).collect();
    let branches = track_spectrum(|t| s.hamiltonian(t), &grid).unwrap();
    let report = adiabaticity_report(&branches);

    let min_margin_until = |cutoff: f64| -> f64 {
        let mut m = f64::INFINITY;
        for pair in &report.pairs {
            for (k, &t) in branches.times.iter().enumerate() {
                if t <= cutoff {
                    m = m.min(pair.margins[k]);
                }
            }
        }
        m
    };

    let interior = min_margin_until(0.8 * t_max);
    assert!(interior > 10.0, "interior margin {interior:.2}");
    assert_near(interior, 33.45, 1.0, "min margin for t ≤ 0.8·t_max");

    let half = min_margin_until(0.5 * t_max);
    assert!(half > 1000.0, "margin at half-schedule {half:.1}");

    let full = min_margin_until(t_max);
    assert!(
        full < 1.0,
        "the endpoint approach is not adiabatic: {full:.3}"
    );

    // Grid refinement ×2 changes the interior coupling estimates by < 5%.
    let grid2: Vec<f64> = (0..4000).map(|k| t_max * k as f64 / 3999.0).collect();
    let branches2 = track_spectrum(|t| s.hamiltonian(t), &grid2).unwrap();
    let report2 = adiabaticity_report(&branches2);
    let probe_idx = 1000; // t ≈ t_max/2 on the coarse grid
    let probe_idx2 = 2000;
    for (p, p2) in report.pairs.iter().zip(report2.pairs.iter()) {
        let (c, c2) = (p.couplings[probe_idx], p2.couplings[probe_idx2]);
        if c > 1e-6 {
            assert!(
                ((c - c2) / c).abs() < 0.05,
                "coupling estimate moved by more than 5% under refinement"
            );
        }
    }
}
