//! `sim` — scenario runner for the three-qubit circulant QFT model.
//!
//! Each subcommand reproduces one machine-readable series (eigenfrequency
//! branches, fidelities, counter-driving rate, ion couplings) as CSV, from a
//! named preset or a config file.

mod config;
mod csvout;
mod error;
mod presets;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::scenario::{Scenario, ScenarioKind};

#[derive(Parser)]
#[command(
    name = "sim",
    about = "Three-qubit circulant QFT gate simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenfrequency branches of the offset-controlled Hamiltonian
    Spectrum(RunArgs),
    /// Gate fidelity |Tr(G†U(t))|²/64 under the offset schedule
    GateFidelity(RunArgs),
    /// Adiabatic-transfer fidelity under the Rabi schedule
    AdiabaticFidelity(RunArgs),
    /// Entangling fidelity swept over one schedule parameter
    EntangleSweep(RunArgs),
    /// Counter-driving rate κ̇(t) along a Rabi schedule
    CounterDriving(RunArgs),
    /// Effective ion couplings and the circulant-point residual
    IonCouplings(RunArgs),
    /// Print every named preset with its parameters
    ListPresets,
    /// Write a preset out as an editable config file
    DumpConfig(DumpArgs),
}

#[derive(Args)]
struct DumpArgs {
    /// Preset to serialize
    #[arg(long)]
    preset: String,
    /// Output path (default: `<preset>.cfg`)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Named parameter bundle (see list-presets)
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Scenario config file (key = value sections)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output sample count override
    #[arg(long)]
    samples: Option<usize>,
    /// Output CSV path (default: `<preset-or-kind>.csv`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add the counter-driving field to the adiabatic-fidelity evolution
    #[arg(long)]
    with_cd: bool,
    /// Recorded in the output metadata; sweeps here are deterministic
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn load_scenario(kind: ScenarioKind, args: &RunArgs) -> Result<(Scenario, String), CliError> {
    let (mut scenario, source) = if let Some(name) = &args.preset {
        let preset = presets::find(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset {name}; available: {}",
                presets::available_names().join(", ")
            ))
        })?;
        (preset.scenario, format!("preset={name}"))
    } else if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        (
            config::parse_scenario(&text)?,
            format!("config={}", path.display()),
        )
    } else {
        return Err(CliError::Config(
            "either --preset or --config is required".into(),
        ));
    };

    if scenario.kind != kind {
        return Err(CliError::Config(format!(
            "scenario is of kind {}, but the {} subcommand was invoked",
            scenario.kind.name(),
            kind.name()
        )));
    }
    if let Some(samples) = args.samples {
        scenario.samples = samples;
    }
    if args.with_cd {
        if kind != ScenarioKind::AdiabaticFidelity {
            return Err(CliError::Config(
                "--with-cd applies only to adiabatic-fidelity".into(),
            ));
        }
        scenario.with_counter_driving = true;
    }
    Ok((scenario, source))
}

fn dump_config(args: &DumpArgs) -> Result<(), CliError> {
    let preset = presets::find(&args.preset).ok_or_else(|| {
        CliError::Config(format!(
            "unknown preset {}; available: {}",
            args.preset,
            presets::available_names().join(", ")
        ))
    })?;
    let text = config::serialize_scenario(&preset.scenario);
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.cfg", args.preset)));
    std::fs::write(&out, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out.display())))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn run(kind: ScenarioKind, args: &RunArgs) -> Result<(), CliError> {
    let (scenario, source) = load_scenario(kind, args)?;
    let mut doc = scenario.run()?;

    let mut front = crate::csvout::CsvDocument::new(doc.header.clone());
    front.push_metadata("scenario", scenario.kind.name().to_string());
    front.push_metadata("source", source);
    front.push_metadata("samples", scenario.samples.to_string());
    front.push_metadata("seed", args.seed.to_string());
    if scenario.with_counter_driving {
        front.push_metadata("with_counter_driving", "true".to_string());
    }
    front.metadata.append(&mut doc.metadata);
    doc.metadata = front.metadata;

    let out = args.out.clone().unwrap_or_else(|| {
        let stem = args
            .preset
            .clone()
            .unwrap_or_else(|| kind.name().to_string());
        PathBuf::from(format!("{stem}.csv"))
    });
    doc.write_atomic(&out)?;
    println!("wrote {} rows to {}", doc.rows.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(args) => run(ScenarioKind::Spectrum, args),
        Command::GateFidelity(args) => run(ScenarioKind::GateFidelity, args),
        Command::AdiabaticFidelity(args) => run(ScenarioKind::AdiabaticFidelity, args),
        Command::EntangleSweep(args) => run(ScenarioKind::EntangleSweep, args),
        Command::CounterDriving(args) => run(ScenarioKind::CounterDriving, args),
        Command::IonCouplings(args) => run(ScenarioKind::IonCouplings, args),
        Command::ListPresets => {
            print!("{}", presets::describe_all());
            Ok(())
        }
        Command::DumpConfig(args) => dump_config(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
