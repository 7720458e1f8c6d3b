//! Named parameter bundles for the figure-reproduction scenarios, in the
//! quoted value/2π kHz units (stored internally as rad/ms).

use std::f64::consts::FRAC_PI_4;

use circulant_qft::schedules::{OffsetSchedule, RabiSchedule};

use crate::scenario::{Scenario, ScenarioKind, ScenarioParams, SweepSpec, SweepVariable, TAU};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub scenario: Scenario,
}

fn offset_khz(j0: f64, j01: f64, d1: f64, d2: f64, d3: f64, omega_prime: f64) -> OffsetSchedule {
    OffsetSchedule {
        j0: TAU * j0,
        j01: TAU * j01,
        delta1: TAU * d1,
        delta2: TAU * d2,
        delta3: TAU * d3,
        omega_prime: TAU * omega_prime,
    }
}

fn rabi_khz(j0: f64, j01: f64, ups0: f64, ups0p: f64, omega_prime: f64) -> RabiSchedule {
    RabiSchedule {
        j0: TAU * j0,
        j01: TAU * j01,
        upsilon0: TAU * ups0,
        upsilon0_prime: TAU * ups0p,
        omega_prime: TAU * omega_prime,
        phi: FRAC_PI_4,
    }
}

fn entangle_base(omega_prime: f64) -> RabiSchedule {
    // Shared base parameters of the entangling-sweep family.
    rabi_khz(2.3, 2.1, 1.8, 1.7, omega_prime)
}

/// All presets in deterministic listing order.
pub fn presets() -> Vec<Preset> {
    vec![
        Preset {
            name: "fig3",
            summary: "eigenfrequency branches: J0/2pi = 1, J01/2pi = 2, Delta/2pi = (120, 60, 30) kHz, phi = pi/2, omega'/2pi = 0.15 kHz",
            scenario: Scenario {
                kind: ScenarioKind::Spectrum,
                params: ScenarioParams::Offset(offset_khz(1.0, 2.0, 120.0, 60.0, 30.0, 0.15)),
                samples: 2000,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig4",
            summary: "gate fidelity: J0/2pi = J01/2pi = 1, Delta/2pi = (20, 10, 6) kHz, phi = pi/2, omega'/2pi = 0.505 kHz",
            scenario: Scenario {
                kind: ScenarioKind::GateFidelity,
                params: ScenarioParams::Offset(offset_khz(1.0, 1.0, 20.0, 10.0, 6.0, 0.505)),
                samples: 2000,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig5",
            summary: "adiabatic-transfer fidelity: J0/2pi = 2.1, J01/2pi = 2.4, Y0/2pi = 1.9, Y0'/2pi = 2 kHz, phi = pi/4, omega'/2pi = 0.3 kHz",
            scenario: Scenario {
                kind: ScenarioKind::AdiabaticFidelity,
                params: ScenarioParams::Rabi(rabi_khz(2.1, 2.4, 1.9, 2.0, 0.3)),
                samples: 2000,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig6a",
            summary: "entangling fidelity vs omega' at gate time 0.31 ms: Y0 = 1.8, Y0' = 1.7, J01 = 2.1, J0 = 2.3 kHz",
            scenario: Scenario {
                kind: ScenarioKind::EntangleSweep,
                params: ScenarioParams::Sweep(SweepSpec {
                    base: entangle_base(0.5),
                    variable: SweepVariable::OmegaPrime,
                    start_khz: 0.1,
                    stop_khz: 1.6,
                    points: 76,
                    gate_time_ms: 0.31,
                }),
                samples: 400,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig6b",
            summary: "entangling fidelity vs J01 at omega'/2pi = 0.5 kHz, gate time 0.31 ms",
            scenario: Scenario {
                kind: ScenarioKind::EntangleSweep,
                params: ScenarioParams::Sweep(SweepSpec {
                    base: entangle_base(0.5),
                    variable: SweepVariable::J01,
                    start_khz: 0.1,
                    stop_khz: 5.0,
                    points: 99,
                    gate_time_ms: 0.31,
                }),
                samples: 400,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig6c",
            summary: "entangling fidelity vs J0 at omega'/2pi = 0.605 kHz, gate time 0.31 ms",
            scenario: Scenario {
                kind: ScenarioKind::EntangleSweep,
                params: ScenarioParams::Sweep(SweepSpec {
                    base: entangle_base(0.605),
                    variable: SweepVariable::J0,
                    start_khz: 0.1,
                    stop_khz: 5.0,
                    points: 99,
                    gate_time_ms: 0.31,
                }),
                samples: 400,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig7-blue",
            summary: "counter-driving rate: J01 = 1.5, J0 = 1 kHz (Y0/2pi = 0.5, Y0'/2pi = 2 kHz, omega'/2pi = 0.3 kHz)",
            scenario: Scenario {
                kind: ScenarioKind::CounterDriving,
                params: ScenarioParams::Rabi(rabi_khz(1.0, 1.5, 0.5, 2.0, 0.3)),
                samples: 2000,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig7-cyan",
            summary: "counter-driving rate: J01 = 1.9, J0 = 1.3 kHz (same drive amplitudes)",
            scenario: Scenario {
                kind: ScenarioKind::CounterDriving,
                params: ScenarioParams::Rabi(rabi_khz(1.3, 1.9, 0.5, 2.0, 0.3)),
                samples: 2000,
                with_counter_driving: false,
            },
        },
        Preset {
            name: "fig7-red",
            summary: "counter-driving rate: J01 = 2, J0 = 1.7 kHz (same drive amplitudes)",
            scenario: Scenario {
                kind: ScenarioKind::CounterDriving,
                params: ScenarioParams::Rabi(rabi_khz(1.7, 2.0, 0.5, 2.0, 0.3)),
                samples: 2000,
                with_counter_driving: false,
            },
        },
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name == name)
}

pub fn available_names() -> Vec<&'static str> {
    presets().iter().map(|p| p.name).collect()
}

/// Human-readable dump of every preset with derived quantities.
pub fn describe_all() -> String {
    let mut out = String::new();
    for p in presets() {
        out.push_str(&format!(
            "{:<10} {:<20} {}\n",
            p.name,
            p.scenario.kind.name(),
            p.summary
        ));
        match &p.scenario.params {
            ScenarioParams::Offset(s) => {
                out.push_str(&format!(
                    "{:>31} t_max = {:.4} ms (computed)\n",
                    "",
                    s.t_max()
                ));
            }
            ScenarioParams::Rabi(s) => {
                out.push_str(&format!(
                    "{:>31} t_max = {:.4} ms (computed)\n",
                    "",
                    s.t_max()
                ));
            }
            ScenarioParams::Sweep(sw) => {
                out.push_str(&format!(
                    "{:>31} sweep {} over [{}, {}] kHz in {} points\n",
                    "",
                    sw.variable.name(),
                    sw.start_khz,
                    sw.stop_khz,
                    sw.points
                ));
            }
            ScenarioParams::Ion(_) => {}
        }
    }
    out
}
