use clap::{Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

use qstab_harness::config::{ConfigFile, RunConfig};
use qstab_harness::output::{emit, sidecar};
use qstab_harness::quantity::UnitConvention;
use qstab_harness::{report, run, HarnessError, Result};

#[derive(Parser)]
#[command(name = "qstab", version, about = "Steady states, sweeps and checks for sideband qubit stabilization")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; the reference setup is used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path (a JSON sidecar is written next to it).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = default_workers())]
    workers: usize,

    /// Resonator Fock levels, overriding the config.
    #[arg(long, global = true)]
    fock: Option<usize>,

    /// Reserved; no stochastic paths at present.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Read Hz/kHz/MHz/GHz as plain rates instead of ω/2π.
    #[arg(long, global = true)]
    mhz_as_rate: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Steady state at a single point.
    Steady,
    /// Grid sweep over one or two whitelisted parameters.
    Sweep,
    /// Full trajectory from the opposite pole next to the three-level model.
    TimeDomain,
    /// Fidelity against temperature with the perturbative prediction.
    ThermalSweep,
    /// Drive plan and two-source tone synthesis.
    Plan,
    /// Dressed parameters from raw circuit energies.
    DeriveCircuit,
    /// Lab-frame against rotating-frame evolution.
    ValidateRwa,
    /// Characteristic roots and damping regime.
    Damping,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut c = RunConfig::resolve(&file, UnitConvention { mhz_as_rate: cli.mhz_as_rate })?;
    if let Some(n) = cli.fock {
        c.solver.fock_levels = n;
        c.solver.validate()?;
    }
    if cli.out.is_some() {
        c.output = cli.out.clone();
    }
    Ok(c)
}

fn execute(cli: &Cli) -> Result<()> {
    let c = load(cli)?;
    let out = c.output.as_deref();
    let side = |name: &str, extra| sidecar(name, c.to_json(), cli.seed, extra);
    match cli.command {
        Command::Steady => {
            let r = run::run_steady(&c)?;
            emit(out, &r.header, &r.rows, side("steady", json!({ "convergence": r.convergence })))?;
        }
        Command::Sweep => {
            let r = run::run_sweep(&c, cli.workers)?;
            emit(out, &r.header, &r.rows, side("sweep", json!({ "convergence": r.convergence })))?;
        }
        Command::TimeDomain => {
            let r = run::run_time_domain(&c)?;
            let extra = json!({
                "settle_time": { "value": r.settle_time, "unit": "s" },
                "settle_time_three_level": { "value": r.settle_time_three_level, "unit": "s" },
                "damping_class": r.damping_class,
                "time_domain": c.time_domain,
            });
            emit(out, &run::TimeDomainResult::header(), &r.rows(), side("time-domain", extra))?;
        }
        Command::ThermalSweep => {
            let r = run::run_thermal(&c, cli.workers)?;
            let extra = json!({ "fidelity0": r.fidelity0, "rho22_0": r.rho22_0, "max_gap": r.max_gap });
            emit(out, &run::ThermalResult::header(), &r.rows(), side("thermal-sweep", extra))?;
        }
        Command::ValidateRwa => {
            let r = run::validate_rwa(&c)?;
            let extra = json!({
                "max_deviation": r.max_deviation,
                "fidelity_lab": r.fidelity_lab,
                "fidelity_rotating": r.fidelity_rotating,
                "fidelity_gap": r.fidelity_gap,
                "lab_step": { "value": r.lab_step, "unit": "s" },
                "rwa": c.rwa,
            });
            emit(out, &run::RwaReport::header(), &r.rows(), side("validate-rwa", extra))?;
            eprintln!(
                "max |sigma_n| deviation {:.3e}, fidelity gap {:.3e}",
                r.max_deviation, r.fidelity_gap
            );
        }
        Command::Plan => print!("{}", report::plan_text(&c)?),
        Command::Damping => print!("{}", report::damping_text(&c)?),
        Command::DeriveCircuit => {
            let v = report::derive_circuit(&c)?;
            let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            match out {
                Some(path) => std::fs::write(path, text).map_err(|source| HarnessError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
