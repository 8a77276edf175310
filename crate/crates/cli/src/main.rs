use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use conformable_wkb::validate::Scope;

mod commands;
mod config;
mod inner;
mod table;

use config::{CommandConfig, RunConfig, Tolerances, Units, WavePotential};
use table::Format;

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// WKB spectra, wavefunctions and tunneling for the conformable Schrödinger equation.
#[derive(Debug, Parser)]
#[command(name = "cwkb", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,

    /// Run a configuration previously written by --dump-config.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct Common {
    /// Conformable order α in (0, 1].
    #[arg(long, global = true, default_value_t = 1.0)]
    alpha: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the table here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Unit system (default: natural, nuclear for decay).
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,

    /// ℏ_α^α in natural units.
    #[arg(long, global = true)]
    hbar: Option<f64>,

    /// m^α in natural units.
    #[arg(long, global = true)]
    mass: Option<f64>,

    /// Print the resolved configuration as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Infinite-well levels: closed form, hard-wall WKB solver and Numerov oracle.
    Well {
        /// Well width L.
        #[arg(long = "length", visible_alias = "L", default_value_t = 1.0)]
        length: f64,
        /// Highest quantum number (levels 1..=n-max).
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Two-column CSV (x, v) giving a slowly varying floor inside the well.
        #[arg(long, value_name = "PATH")]
        inner_potential: Option<PathBuf>,
    },
    /// Damped-oscillator levels: closed form, connection-rule solver and oracle.
    Oscillator {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Damping λ.
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Highest quantum number (levels 0..=n-max).
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Gamow factor and transmission through a Coulomb barrier.
    Decay {
        /// Charge number of the daughter nucleus.
        #[arg(long)]
        z: f64,
        /// Kinetic energy E (MeV in nuclear units).
        #[arg(long)]
        energy: f64,
        /// Inner radius r1 (fm in nuclear units).
        #[arg(long)]
        r1: f64,
    },
    /// Sampled WKB wavefunction (x, ψ, |ψ|², region).
    Wavefunction {
        #[arg(long, value_enum, default_value_t = WavePotential::Well)]
        potential: WavePotential,
        #[arg(long = "length", visible_alias = "L", default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Quantum number; the energy is solved for.
        #[arg(long)]
        n: Option<usize>,
        /// Energy E^α to use directly.
        #[arg(long)]
        energy: Option<f64>,
        #[arg(long)]
        x_min: Option<f64>,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Run the invariant and acceptance suite.
    Validate {
        #[arg(value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_closed_form: f64,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ScopeArg {
    All,
    Core,
    Wkb,
    Oracle,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::All => Scope::All,
            ScopeArg::Core => Scope::Core,
            ScopeArg::Wkb => Scope::Wkb,
            ScopeArg::Oracle => Scope::Oracle,
        }
    }
}

fn resolve(cli: Cli) -> Result<(RunConfig, bool)> {
    let dump = cli.common.dump_config;
    if let Some(path) = &cli.config {
        return Ok((RunConfig::load(path)?, dump));
    }
    let command = cli.command.context(
        "a subcommand (well, oscillator, decay, wavefunction, validate) or --config is required",
    )?;
    let default_units = match command {
        Command::Decay { .. } => Units::Nuclear,
        _ => Units::Natural,
    };
    let command = match command {
        Command::Well {
            length,
            n_max,
            inner_potential,
        } => CommandConfig::Well {
            length,
            n_max,
            inner_potential,
        },
        Command::Oscillator {
            omega,
            lambda,
            n_max,
        } => CommandConfig::Oscillator {
            omega,
            lambda,
            n_max,
        },
        Command::Decay { z, energy, r1 } => CommandConfig::Decay { z, energy, r1 },
        Command::Wavefunction {
            potential,
            length,
            omega,
            lambda,
            n,
            energy,
            x_min,
            x_max,
            points,
        } => CommandConfig::Wavefunction {
            potential,
            length,
            omega,
            lambda,
            n,
            energy,
            x_min,
            x_max,
            points,
        },
        Command::Validate {
            scope,
            perturb_closed_form,
        } => CommandConfig::Validate {
            scope: scope.into(),
            closed_form_perturbation: perturb_closed_form,
        },
    };
    let mut tolerances = Tolerances::default();
    if let Some(t) = cli.common.tol {
        tolerances.quadrature_rel = t;
    }
    let cfg = RunConfig {
        alpha: cli.common.alpha,
        units: cli.common.units.unwrap_or(default_units),
        hbar: cli.common.hbar,
        mass: cli.common.mass,
        format: cli.common.format,
        out: cli.common.out,
        tolerances,
        command,
    };
    Ok((cfg, dump))
}

fn emit(cfg: &RunConfig, outcome: &commands::Outcome) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            outcome.table.write(cfg.format, &mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            outcome.table.write(cfg.format, &mut lock)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(cli).and_then(|(cfg, dump)| cfg.validate().map(|_| (cfg, dump))) {
        Ok((cfg, true)) => {
            println!("{}", cfg.to_json());
            return ExitCode::SUCCESS;
        }
        Ok((cfg, false)) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let outcome = match commands::run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    if let Err(e) = emit(&cfg, &outcome) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_CONFIG);
    }
    if outcome.failed {
        eprintln!("validation failed");
        return ExitCode::from(EXIT_VALIDATION);
    }
    ExitCode::SUCCESS
}
