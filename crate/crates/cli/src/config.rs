//! Flat key=value scenario files with `[section]` headers, one scenario per
//! file. Serialization uses exact shortest-round-trip float formatting, so a
//! dumped scenario parses back bit-identically.
//!
//! Frequencies accept either `<name>_rad_per_ms` (stored form) or
//! `<name>_khz` (the quoted value/2π form, multiplied by 2π on read).

use std::collections::BTreeMap;

use circulant_qft::ioncoup::{DriveParams, ModeSet};
use circulant_qft::schedules::{OffsetSchedule, RabiSchedule};

use crate::error::CliError;
use crate::scenario::{
    IonSpec, Scenario, ScenarioKind, ScenarioParams, SweepSpec, SweepVariable, TAU,
};

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn parse_sections(text: &str) -> Result<Sections, CliError> {
    let mut sections: Sections = BTreeMap::new();
    let mut current = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| {
                CliError::Config(format!("line {}: unterminated section", lineno + 1))
            })?;
            current = name.trim().to_string();
            sections.entry(current.clone()).or_default();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected key = value", lineno + 1))
        })?;
        if current.is_empty() {
            return Err(CliError::Config(format!(
                "line {}: key outside any [section]",
                lineno + 1
            )));
        }
        sections
            .get_mut(&current)
            .unwrap()
            .insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(sections)
}

struct Section<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl<'a> Section<'a> {
    fn get(&self, key: &str) -> Result<&'a str, CliError> {
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::Config(format!("[{}] is missing key {key}", self.name)))
    }

    fn f64(&self, key: &str) -> Result<f64, CliError> {
        self.get(key)?
            .parse()
            .map_err(|_| CliError::Config(format!("[{}] {key} is not a number", self.name)))
    }

    /// Angular frequency in rad/ms, from either the stored or the /2π form.
    fn freq(&self, name: &str) -> Result<f64, CliError> {
        if self.map.contains_key(&format!("{name}_rad_per_ms")) {
            self.f64(&format!("{name}_rad_per_ms"))
        } else if self.map.contains_key(&format!("{name}_khz")) {
            Ok(TAU * self.f64(&format!("{name}_khz"))?)
        } else {
            Err(CliError::Config(format!(
                "[{}] needs {name}_rad_per_ms or {name}_khz",
                self.name
            )))
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let raw = self.get(key)?;
        if raw.trim().is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|tok| {
                tok.trim().parse().map_err(|_| {
                    CliError::Config(format!("[{}] {key}: bad number {tok}", self.name))
                })
            })
            .collect()
    }
}

fn section<'a>(sections: &'a Sections, name: &'a str) -> Result<Section<'a>, CliError> {
    sections
        .get(name)
        .map(|map| Section { name, map })
        .ok_or_else(|| CliError::Config(format!("missing [{name}] section")))
}

fn parse_offset(sections: &Sections) -> Result<OffsetSchedule, CliError> {
    let s = section(sections, "offset")?;
    Ok(OffsetSchedule {
        j0: s.freq("j0")?,
        j01: s.freq("j01")?,
        delta1: s.freq("delta1")?,
        delta2: s.freq("delta2")?,
        delta3: s.freq("delta3")?,
        omega_prime: s.freq("omega_prime")?,
    })
}

fn parse_rabi(sections: &Sections) -> Result<RabiSchedule, CliError> {
    let s = section(sections, "rabi")?;
    Ok(RabiSchedule {
        j0: s.freq("j0")?,
        j01: s.freq("j01")?,
        upsilon0: s.freq("upsilon0")?,
        upsilon0_prime: s.freq("upsilon0_prime")?,
        omega_prime: s.freq("omega_prime")?,
        phi: s.f64("phi_rad")?,
    })
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let sections = parse_sections(text)?;
    let sc = section(&sections, "scenario")?;
    let kind_name = sc.get("kind")?;
    let kind = ScenarioKind::parse(kind_name)
        .ok_or_else(|| CliError::Config(format!("unknown scenario kind {kind_name}")))?;
    let samples: usize = sc
        .get("samples")?
        .parse()
        .map_err(|_| CliError::Config("samples is not an integer".into()))?;
    let with_counter_driving = match sc.map.get("with_counter_driving").map(String::as_str) {
        None => false,
        Some("true") => true,
        Some("false") => false,
        Some(other) => {
            return Err(CliError::Config(format!(
                "with_counter_driving must be true or false, got {other}"
            )))
        }
    };

    let params = match kind {
        ScenarioKind::Spectrum | ScenarioKind::GateFidelity => {
            ScenarioParams::Offset(parse_offset(&sections)?)
        }
        ScenarioKind::AdiabaticFidelity | ScenarioKind::CounterDriving => {
            ScenarioParams::Rabi(parse_rabi(&sections)?)
        }
        ScenarioKind::EntangleSweep => {
            let sw = section(&sections, "sweep")?;
            let variable = SweepVariable::parse(sw.get("variable")?).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown sweep variable {}",
                    sw.get("variable").unwrap()
                ))
            })?;
            ScenarioParams::Sweep(SweepSpec {
                base: parse_rabi(&sections)?,
                variable,
                start_khz: sw.f64("start_khz")?,
                stop_khz: sw.f64("stop_khz")?,
                points: sw
                    .get("points")?
                    .parse()
                    .map_err(|_| CliError::Config("sweep points is not an integer".into()))?,
                gate_time_ms: sw.f64("gate_time_ms")?,
            })
        }
        ScenarioKind::IonCouplings => {
            let m = section(&sections, "modes")?;
            let omega_n = m.list("omega_n_rad_per_ms")?;
            let eta = [m.list("eta1")?, m.list("eta2")?, m.list("eta3")?];
            let b = [
                if m.map.contains_key("b1") {
                    m.list("b1")?
                } else {
                    eta[0].clone()
                },
                if m.map.contains_key("b2") {
                    m.list("b2")?
                } else {
                    eta[1].clone()
                },
                if m.map.contains_key("b3") {
                    m.list("b3")?
                } else {
                    eta[2].clone()
                },
            ];
            let d = section(&sections, "drive")?;
            ScenarioParams::Ion(IonSpec {
                modes: ModeSet { omega_n, b, eta },
                drive: DriveParams {
                    nu: d.freq("nu")?,
                    omega_x: d.freq("omega_x")?,
                    omega_z: d.freq("omega_z")?,
                    omega_alpha: d.freq("omega_alpha")?,
                },
            })
        }
    };

    Ok(Scenario {
        kind,
        params,
        samples,
        with_counter_driving,
    })
}

fn push_kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    out.push_str(&format!("{key} = {value}\n"));
}

fn list_str(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn serialize_rabi(out: &mut String, s: &RabiSchedule) {
    out.push_str("\n[rabi]\n");
    push_kv(out, "j0_rad_per_ms", s.j0);
    push_kv(out, "j01_rad_per_ms", s.j01);
    push_kv(out, "upsilon0_rad_per_ms", s.upsilon0);
    push_kv(out, "upsilon0_prime_rad_per_ms", s.upsilon0_prime);
    push_kv(out, "omega_prime_rad_per_ms", s.omega_prime);
    push_kv(out, "phi_rad", s.phi);
}

pub fn serialize_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    out.push_str("[scenario]\n");
    push_kv(&mut out, "kind", s.kind.name());
    push_kv(&mut out, "samples", s.samples);
    push_kv(&mut out, "with_counter_driving", s.with_counter_driving);
    match &s.params {
        ScenarioParams::Offset(o) => {
            out.push_str("\n[offset]\n");
            push_kv(&mut out, "j0_rad_per_ms", o.j0);
            push_kv(&mut out, "j01_rad_per_ms", o.j01);
            push_kv(&mut out, "delta1_rad_per_ms", o.delta1);
            push_kv(&mut out, "delta2_rad_per_ms", o.delta2);
            push_kv(&mut out, "delta3_rad_per_ms", o.delta3);
            push_kv(&mut out, "omega_prime_rad_per_ms", o.omega_prime);
        }
        ScenarioParams::Rabi(r) => serialize_rabi(&mut out, r),
        ScenarioParams::Sweep(sw) => {
            out.push_str("\n[sweep]\n");
            push_kv(&mut out, "variable", sw.variable.name());
            push_kv(&mut out, "start_khz", sw.start_khz);
            push_kv(&mut out, "stop_khz", sw.stop_khz);
            push_kv(&mut out, "points", sw.points);
            push_kv(&mut out, "gate_time_ms", sw.gate_time_ms);
            serialize_rabi(&mut out, &sw.base);
        }
        ScenarioParams::Ion(spec) => {
            out.push_str("\n[modes]\n");
            push_kv(
                &mut out,
                "omega_n_rad_per_ms",
                list_str(&spec.modes.omega_n),
            );
            push_kv(&mut out, "eta1", list_str(&spec.modes.eta[0]));
            push_kv(&mut out, "eta2", list_str(&spec.modes.eta[1]));
            push_kv(&mut out, "eta3", list_str(&spec.modes.eta[2]));
            push_kv(&mut out, "b1", list_str(&spec.modes.b[0]));
            push_kv(&mut out, "b2", list_str(&spec.modes.b[1]));
            push_kv(&mut out, "b3", list_str(&spec.modes.b[2]));
            out.push_str("\n[drive]\n");
            push_kv(&mut out, "nu_rad_per_ms", spec.drive.nu);
            push_kv(&mut out, "omega_x_rad_per_ms", spec.drive.omega_x);
            push_kv(&mut out, "omega_z_rad_per_ms", spec.drive.omega_z);
            push_kv(&mut out, "omega_alpha_rad_per_ms", spec.drive.omega_alpha);
        }
    }
    out
}
