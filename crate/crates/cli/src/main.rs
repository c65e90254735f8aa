//! Command line driver for simulation, Fry extraction, isotropy testing and
//! the study harness.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use frytest::error::{Error, Result};
use frytest::fry::fry_points;
use frytest::geom::Window;
use frytest::io;
use frytest::mctest::isotropy_test;
use frytest::sampling::RngStream;

use frytest_cli::battery::{battery_to_csv, run_battery, BatteryConfig};
use frytest_cli::config::{model_from_config, test_from_config, window_from_config, Config};
use frytest_cli::exit_code;
use frytest_cli::study::{run_power_study, StudyConfig};

#[derive(Parser)]
#[command(
    name = "frytest",
    version,
    about = "Nonparametric isotropy tests for planar point patterns via random rotations of Fry points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one point pattern from a model config and write pattern CSV.
    Simulate {
        /// Config file with model.* keys (and optional window.side, seed).
        #[arg(long)]
        config: PathBuf,
        /// Master seed; overrides the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract Fry points from a pattern CSV and write them as dx,dy,group.
    Fry {
        /// Pattern CSV (window from its sidecar comment or --window).
        pattern: PathBuf,
        /// Drop Fry vectors with norm above this bound.
        #[arg(long)]
        r_max: Option<f64>,
        /// Window as 'x_min x_max y_min y_max' when the file has no sidecar.
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one isotropy test on a pattern CSV and write a result row.
    Test {
        pattern: PathBuf,
        /// Config file with test.* keys (test.r_max is required here).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a power study over a model grid and write the power table CSV.
    Power {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a repeated-test battery on a real data pattern CSV.
    Battery {
        pattern: PathBuf,
        /// Optional config with battery.* keys; defaults reproduce the
        /// amacrine analysis settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, seed, out } => {
            let cfg = Config::from_file(&config)?;
            let seed = resolve_seed(seed, &cfg)?;
            let model = model_from_config(&cfg)?;
            let window = window_from_config(&cfg, model.n_target)?;
            let pattern = model.simulate(&window, &mut RngStream::new(seed, 0))?;
            write_output(out.as_deref(), &io::pattern_to_csv(&pattern))
        }
        Command::Fry {
            pattern,
            r_max,
            window,
            out,
        } => {
            let fallback = window.map(|w| parse_window(&w)).transpose()?;
            let pattern = io::read_pattern(&pattern, fallback)?;
            let fry = fry_points(&pattern, r_max)?;
            write_output(out.as_deref(), &io::fry_to_csv(&fry))
        }
        Command::Test {
            pattern,
            config,
            seed,
            window,
            out,
            threads,
        } => {
            configure_threads(threads)?;
            let cfg = Config::from_file(&config)?;
            let seed = resolve_seed(seed, &cfg)?;
            let fallback = window.map(|w| parse_window(&w)).transpose()?;
            let pattern = io::read_pattern(&pattern, fallback)?;
            let test = test_from_config(&cfg, seed, None, None)?;
            let result = isotropy_test(&pattern, &test)?;
            write_output(out.as_deref(), &io::test_result_to_csv(&result, &test))
        }
        Command::Power {
            config,
            seed,
            out,
            threads,
        } => {
            configure_threads(threads)?;
            let cfg = Config::from_file(&config)?;
            let seed = resolve_seed(seed, &cfg)?;
            let study = StudyConfig::from_config(&cfg, seed)?;
            let table = run_power_study(&study)?;
            write_output(out.as_deref(), &table.to_csv())
        }
        Command::Battery {
            pattern,
            config,
            seed,
            window,
            out,
            threads,
        } => {
            configure_threads(threads)?;
            let cfg = match config {
                Some(path) => Config::from_file(&path)?,
                None => Config::parse("")?,
            };
            let seed = resolve_seed(seed, &cfg)?;
            let fallback = window.map(|w| parse_window(&w)).transpose()?;
            let pattern = io::read_pattern(&pattern, fallback)?;
            let battery = BatteryConfig::from_config(&cfg, seed)?;
            let rows = run_battery(&pattern, &battery)?;
            write_output(out.as_deref(), &battery_to_csv(&rows))
        }
    }
}

fn resolve_seed(flag: Option<u64>, cfg: &Config) -> Result<u64> {
    match flag {
        Some(s) => Ok(s),
        None => cfg.u64_or("seed", 0),
    }
}

fn parse_window(spec: &str) -> Result<Window> {
    let nums: Vec<f64> = spec
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Config(format!("--window: bad number '{s}'")))
        })
        .collect::<Result<_>>()?;
    if nums.len() != 4 {
        return Err(Error::Config(format!(
            "--window needs 4 numbers (x_min x_max y_min y_max), got {}",
            nums.len()
        )));
    }
    Window::new(nums[0], nums[1], nums[2], nums[3])
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(format!("--threads: {e}")))?;
    }
    Ok(())
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
