//! Scenario definitions and execution: each scenario kind maps onto one
//! library entry point and one CSV layout.

use circulant_qft::dynamics::{entangle_fidelity, simulate_adiabatic, simulate_offset_gate};
use circulant_qft::ioncoup::{circulant_point_search, DriveParams, ModeSet};
use circulant_qft::schedules::{OffsetSchedule, RabiSchedule};
use circulant_qft::spectra::{kappa_rate, track_spectrum};

use crate::csvout::CsvDocument;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Spectrum,
    GateFidelity,
    AdiabaticFidelity,
    EntangleSweep,
    CounterDriving,
    IonCouplings,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Spectrum => "spectrum",
            ScenarioKind::GateFidelity => "gate-fidelity",
            ScenarioKind::AdiabaticFidelity => "adiabatic-fidelity",
            ScenarioKind::EntangleSweep => "entangle-sweep",
            ScenarioKind::CounterDriving => "counter-driving",
            ScenarioKind::IonCouplings => "ion-couplings",
        }
    }

    pub fn parse(s: &str) -> Option<ScenarioKind> {
        Some(match s {
            "spectrum" => ScenarioKind::Spectrum,
            "gate-fidelity" => ScenarioKind::GateFidelity,
            "adiabatic-fidelity" => ScenarioKind::AdiabaticFidelity,
            "entangle-sweep" => ScenarioKind::EntangleSweep,
            "counter-driving" => ScenarioKind::CounterDriving,
            "ion-couplings" => ScenarioKind::IonCouplings,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    OmegaPrime,
    J01,
    J0,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::OmegaPrime => "omega-prime",
            SweepVariable::J01 => "j01",
            SweepVariable::J0 => "j0",
        }
    }

    pub fn column(&self) -> &'static str {
        match self {
            SweepVariable::OmegaPrime => "omega_prime_khz",
            SweepVariable::J01 => "j01_khz",
            SweepVariable::J0 => "j0_khz",
        }
    }

    pub fn parse(s: &str) -> Option<SweepVariable> {
        Some(match s {
            "omega-prime" => SweepVariable::OmegaPrime,
            "j01" => SweepVariable::J01,
            "j0" => SweepVariable::J0,
            _ => return None,
        })
    }
}

/// One-parameter sweep of the entangling fidelity at a fixed gate time.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: RabiSchedule,
    pub variable: SweepVariable,
    /// Sweep range in kHz (of the value/2π convention).
    pub start_khz: f64,
    pub stop_khz: f64,
    pub points: usize,
    /// Fidelity is read at min(gate_time, t_max).
    pub gate_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IonSpec {
    pub modes: ModeSet,
    pub drive: DriveParams,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioParams {
    Offset(OffsetSchedule),
    Rabi(RabiSchedule),
    Sweep(SweepSpec),
    Ion(IonSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub params: ScenarioParams,
    pub samples: usize,
    pub with_counter_driving: bool,
}

pub const TAU: f64 = std::f64::consts::TAU;

fn check_amplitudes(named: &[(&str, f64)]) -> Result<(), CliError> {
    for (name, v) in named {
        if !v.is_finite() {
            return Err(CliError::Precondition(format!(
                "{name} must be finite, got {v}"
            )));
        }
        if *v < 0.0 {
            return Err(CliError::Precondition(format!(
                "{name} must be nonnegative (phases carry the signs), got {v}"
            )));
        }
    }
    Ok(())
}

fn check_offset(s: &OffsetSchedule) -> Result<(), CliError> {
    s.validate()?;
    check_amplitudes(&[
        ("j0", s.j0),
        ("j01", s.j01),
        ("delta1", s.delta1),
        ("delta2", s.delta2),
        ("delta3", s.delta3),
    ])
}

fn check_rabi(s: &RabiSchedule) -> Result<(), CliError> {
    s.validate()?;
    if !s.phi.is_finite() {
        return Err(CliError::Precondition(format!(
            "phi must be finite, got {}",
            s.phi
        )));
    }
    check_amplitudes(&[
        ("j0", s.j0),
        ("j01", s.j01),
        ("upsilon0", s.upsilon0),
        ("upsilon0_prime", s.upsilon0_prime),
    ])
}

impl Scenario {
    /// Check the parameter block matches the kind and the module
    /// preconditions hold, before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples < 2 {
            return Err(CliError::Precondition(format!(
                "samples must be at least 2, got {}",
                self.samples
            )));
        }
        match (&self.kind, &self.params) {
            (ScenarioKind::Spectrum | ScenarioKind::GateFidelity, ScenarioParams::Offset(s)) => {
                check_offset(s)
            }
            (
                ScenarioKind::AdiabaticFidelity | ScenarioKind::CounterDriving,
                ScenarioParams::Rabi(s),
            ) => check_rabi(s),
            (ScenarioKind::EntangleSweep, ScenarioParams::Sweep(sw)) => {
                check_rabi(&sw.base)?;
                if sw.points < 2 || sw.stop_khz <= sw.start_khz || sw.start_khz <= 0.0 {
                    return Err(CliError::Precondition(format!(
                        "sweep needs 0 < start < stop and at least 2 points, got [{}, {}] x {}",
                        sw.start_khz, sw.stop_khz, sw.points
                    )));
                }
                if sw.gate_time_ms <= 0.0 {
                    return Err(CliError::Precondition(format!(
                        "gate time must be positive, got {}",
                        sw.gate_time_ms
                    )));
                }
                Ok(())
            }
            (ScenarioKind::IonCouplings, ScenarioParams::Ion(spec)) => {
                let n = spec.modes.omega_n.len();
                for row in &spec.modes.eta {
                    if row.len() != n {
                        return Err(CliError::Precondition(format!(
                            "eta rows must match the {n} mode frequencies"
                        )));
                    }
                }
                Ok(())
            }
            (kind, _) => Err(CliError::Config(format!(
                "parameter block does not fit scenario kind {}",
                kind.name()
            ))),
        }
    }

    /// Execute and produce the CSV body for this scenario.
    pub fn run(&self) -> Result<CsvDocument, CliError> {
        self.validate()?;
        match (&self.kind, &self.params) {
            (ScenarioKind::Spectrum, ScenarioParams::Offset(s)) => run_spectrum(s, self.samples),
            (ScenarioKind::GateFidelity, ScenarioParams::Offset(s)) => {
                run_gate_fidelity(s, self.samples)
            }
            (ScenarioKind::AdiabaticFidelity, ScenarioParams::Rabi(s)) => {
                run_adiabatic(s, self.with_counter_driving, self.samples)
            }
            (ScenarioKind::CounterDriving, ScenarioParams::Rabi(s)) => {
                run_counter_driving(s, self.samples)
            }
            (ScenarioKind::EntangleSweep, ScenarioParams::Sweep(sw)) => {
                run_entangle_sweep(sw, self.samples)
            }
            (ScenarioKind::IonCouplings, ScenarioParams::Ion(spec)) => run_ion(spec),
            _ => unreachable!("validated above"),
        }
    }
}

fn run_spectrum(s: &OffsetSchedule, samples: usize) -> Result<CsvDocument, CliError> {
    let t_max = s.t_max();
    let grid: Vec<f64> = (0..samples)
        .map(|k| t_max * k as f64 / (samples - 1) as f64)
        .collect();
    let branches = track_spectrum(|t| s.hamiltonian(t), &grid)?;
    let mut doc = CsvDocument::new(vec![
        "time_ms".into(),
        "branch0".into(),
        "branch1".into(),
        "branch2".into(),
        "branch3".into(),
        "branch4".into(),
        "branch5".into(),
        "branch6".into(),
        "branch7".into(),
    ]);
    for (idx, &t) in branches.times.iter().enumerate() {
        let mut row = vec![t];
        for b in 0..8 {
            row.push(branches.value(b, idx));
        }
        doc.push_row(&row);
    }
    Ok(doc)
}

fn run_gate_fidelity(s: &OffsetSchedule, samples: usize) -> Result<CsvDocument, CliError> {
    let run = simulate_offset_gate(s, samples)?;
    let mut doc = CsvDocument::new(vec!["time_ms".into(), "f_gate".into()]);
    for (t, f) in run.fidelity.times.iter().zip(run.fidelity.values.iter()) {
        doc.push_row(&[*t, *f]);
    }
    Ok(doc)
}

fn run_adiabatic(s: &RabiSchedule, with_cd: bool, samples: usize) -> Result<CsvDocument, CliError> {
    let run = simulate_adiabatic(s, with_cd, samples)?;
    let mut doc = CsvDocument::new(vec!["time_ms".into(), "f_ad".into()]);
    for (t, f) in run.fidelity.times.iter().zip(run.fidelity.values.iter()) {
        doc.push_row(&[*t, *f]);
    }
    Ok(doc)
}

fn run_counter_driving(s: &RabiSchedule, samples: usize) -> Result<CsvDocument, CliError> {
    let t_max = s.t_max();
    let mut doc = CsvDocument::new(vec!["time_ms".into(), "kappa_rate_rad_per_ms".into()]);
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        doc.push_row(&[t, kappa_rate(s, t)]);
    }
    Ok(doc)
}

fn run_entangle_sweep(sw: &SweepSpec, samples: usize) -> Result<CsvDocument, CliError> {
    let mut doc = CsvDocument::new(vec![sw.variable.column().into(), "fidelity".into()]);
    for k in 0..sw.points {
        let value_khz =
            sw.start_khz + (sw.stop_khz - sw.start_khz) * k as f64 / (sw.points - 1) as f64;
        let mut schedule = sw.base;
        match sw.variable {
            SweepVariable::OmegaPrime => schedule.omega_prime = TAU * value_khz,
            SweepVariable::J01 => schedule.j01 = TAU * value_khz,
            SweepVariable::J0 => schedule.j0 = TAU * value_khz,
        }
        let t_eval = sw.gate_time_ms.min(schedule.t_max());
        let series = entangle_fidelity(&schedule, samples)?;
        doc.push_row(&[value_khz, series.at_nearest(t_eval)]);
    }
    Ok(doc)
}

fn run_ion(spec: &IonSpec) -> Result<CsvDocument, CliError> {
    let point = circulant_point_search(&spec.modes, &spec.drive)?;
    let mut doc = CsvDocument::new(vec![
        "j1_rad_per_ms".into(),
        "j2_rad_per_ms".into(),
        "j3_rad_per_ms".into(),
        "j_rad_per_ms".into(),
        "scale".into(),
        "residual_rad_per_ms".into(),
    ]);
    let (j1, j2, j3, jt) = point.couplings;
    doc.push_row(&[j1, j2, j3, jt, point.scale, point.residual]);
    Ok(doc)
}
