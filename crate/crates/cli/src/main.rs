//! `nscool`: nuclear-spin sideband-cooling simulator.

mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use nscool::lasercalc::Multiplicity;

use commands::{Ctx, DipoleSource, Failure, TransitionInput};
use config::RunConfig;

#[derive(Parser)]
#[command(name = "nscool", version, about = "Simulate nuclear-spin-preserving sideband cooling of 87Sr")]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<String>,
    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out", value_name = "DIR")]
    out: PathBuf,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one cooling simulation.
    Simulate,
    /// Find the omega_pd that balances the dressed pair.
    Balance,
    /// Dressed-state spectrum and overlaps.
    Dressed,
    /// Regenerate a published table or figure.
    Reproduce {
        /// fig3, table1, sensitivity, impurity, appendixA, levels or isotopes.
        target: String,
    },
    /// Field, intensity and power needed for a Rabi frequency.
    Lasercalc(LaserArgs),
    /// Hyperfine F-level energies.
    Levels,
    /// List the config keys with their defaults.
    Keys,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mult {
    #[value(name = "9")]
    Nine,
    #[value(name = "1")]
    One,
}

#[derive(Args)]
#[command(group(ArgGroup::new("dipole_src").required(true).args(["dipole", "linewidth"])))]
#[command(group(ArgGroup::new("line").args(["wavelength_nm", "frequency_hz"])))]
struct LaserArgs {
    /// Rabi frequency, MHz.
    #[arg(long)]
    rabi: f64,
    /// Reduced dipole moment, e a0.
    #[arg(long)]
    dipole: Option<f64>,
    /// Linewidth, 1/s.
    #[arg(long, requires = "line")]
    linewidth: Option<f64>,
    #[arg(long)]
    wavelength_nm: Option<f64>,
    #[arg(long)]
    frequency_hz: Option<f64>,
    #[arg(long, value_enum, default_value = "1")]
    multiplicity: Mult,
    /// Beam radius at the atom, um.
    #[arg(long, default_value_t = 20.0)]
    spot_um: f64,
}

impl LaserArgs {
    fn source(&self) -> DipoleSource {
        match (self.dipole, self.linewidth) {
            (Some(d), _) => DipoleSource::Direct(d),
            (None, Some(gamma)) => DipoleSource::Linewidth {
                gamma,
                transition: match (self.wavelength_nm, self.frequency_hz) {
                    (Some(l), _) => TransitionInput::WavelengthNm(l),
                    (None, Some(f)) => TransitionInput::FrequencyHz(f),
                    (None, None) => unreachable!("clap requires a transition"),
                },
                multiplicity: match self.multiplicity {
                    Mult::Nine => Multiplicity::Nine,
                    Mult::One => Multiplicity::One,
                },
            },
            (None, None) => unreachable!("clap requires a dipole source"),
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.set).map_err(|e| Failure::Config(e.to_string()))?;
    let ctx = Ctx { cfg: &cfg, out: &cli.out, svg: cli.svg, jobs: cli.jobs };
    match &cli.command {
        Command::Simulate => commands::simulate(&ctx),
        Command::Balance => commands::balance(&ctx),
        Command::Dressed => commands::dressed(&ctx),
        Command::Reproduce { target } => commands::reproduce(&ctx, target),
        Command::Lasercalc(a) => commands::lasercalc(&ctx, a.rabi, a.source(), a.spot_um),
        Command::Levels => commands::levels(&ctx),
        Command::Keys => {
            print!("{}", cfg.canonical_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
