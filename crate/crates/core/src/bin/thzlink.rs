use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use thzlink::cli::{self, CliError};
use thzlink::config::{ConfigError, ScenarioConfig};
use thzlink::spectroscopy::{self, LineCatalog};

#[derive(Parser)]
#[command(name = "thzlink", version, about = "Terahertz link planning tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// HITRAN .par catalog, overrides catalog.path.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override any scenario value, e.g. --set link.tx_power_dbm=10.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Window threshold in dB/km, overrides windows.threshold_db_per_km.
    #[arg(long, global = true, value_name = "DB_PER_KM")]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Loss components over frequency.
    Spectrum,
    /// Net data rate over distance.
    RateDistance,
    /// Sub-array rate over element count and opening angle.
    Subarray,
    /// Transmission windows and usable width at distance.
    Windows,
    /// Summarise a line catalog.
    ParseCatalog {
        /// HITRAN molecule number to keep.
        #[arg(long)]
        molecule: Option<u8>,
        /// Frequency band in GHz, as LO,HI.
        #[arg(long, value_name = "LO,HI", value_parser = parse_band)]
        band: Option<(f64, f64)>,
        /// Print one row per line.
        #[arg(long)]
        table: bool,
    },
}

fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn load_config(common: &Common) -> Result<ScenarioConfig, CliError> {
    let mut overrides = common.overrides.clone();
    if let Some(t) = common.threshold {
        overrides.push(format!("windows.threshold_db_per_km={t}"));
    }
    let mut config = match &common.config {
        Some(path) => ScenarioConfig::from_path(path, &overrides)?,
        None => ScenarioConfig::from_toml_str("", &overrides)?,
    };
    if let Some(path) = &common.catalog {
        // command-line paths are relative to the working directory
        let absolute = std::env::current_dir()
            .map(|d| d.join(path))
            .unwrap_or_else(|_| path.clone());
        config.catalog.path = Some(absolute);
    }
    if let Some(out) = &common.out {
        config.output.path = Some(out.clone());
    }
    Ok(config)
}

fn load_catalog(config: &ScenarioConfig) -> Result<LineCatalog, CliError> {
    if let Some(path) = config.catalog_path() {
        if !path.is_file() {
            return Err(ConfigError::MissingCatalog(path).into());
        }
    }
    Ok(config.load_catalog()?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = load_config(&cli.common)?;
    let output = match cli.command {
        Command::ParseCatalog {
            molecule,
            band,
            table,
        } => {
            if let Some(m) = molecule {
                config.catalog.molecule = m;
            }
            if let Some((lo, hi)) = band {
                config.catalog.band_ghz = [lo, hi];
            }
            let [lo, hi] = config.catalog.band_ghz;
            if !(lo >= 0.0 && lo < hi) {
                return Err(spectroscopy::SpectroscopyError::EmptyBand { lo, hi }.into());
            }
            cli::cmd_parse_catalog(&load_catalog(&config)?, table)
        }
        command => {
            config.validate()?;
            let catalog = load_catalog(&config)?;
            match command {
                Command::Spectrum => cli::cmd_spectrum(&config, &catalog)?,
                Command::RateDistance => cli::cmd_rate_distance(&config, &catalog)?,
                Command::Subarray => cli::cmd_subarray(&config, &catalog)?,
                Command::Windows => cli::cmd_windows(&config, &catalog)?,
                Command::ParseCatalog { .. } => unreachable!(),
            }
        }
    };
    match &config.output.path {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thzlink: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
