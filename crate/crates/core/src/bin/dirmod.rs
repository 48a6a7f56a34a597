use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dirmod::simulator::{
    brute_force_timing, parse_config, parse_values, preset, sweep, ula_scenario, write_reports, write_timing_csv,
    write_ula_csv, PointReport, Preset, SweepSpec,
};
use dirmod::{Error, Result};

#[derive(Parser)]
#[command(name = "dirmod", version, about = "Directional-modulation precoder simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output CSV (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override every scenario's base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario in a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a config's scenarios over a parameter sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Parameter name, e.g. Nt, Ne, Nu, gamma_db.
        #[arg(long)]
        param: String,
        /// `a..b`, `a..b:step` or `v1,v2,...`.
        #[arg(long)]
        values: String,
    },
    /// Run a built-in experiment: fig4, fig5, fig9, fig11, fig14, fig15.
    Preset { name: String },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run_file(path: &PathBuf, seed: Option<u64>, over: Option<SweepSpec>) -> Result<Vec<PointReport>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (name, mut cfg) in parse_config(&text)? {
        if let Some(s) = seed {
            cfg.base_seed = s;
        }
        if let Some(sw) = &over {
            cfg.sweep = Some(sw.clone());
        }
        rows.extend(sweep(&cfg, &name)?);
    }
    Ok(rows)
}

fn main_inner(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Run { config } => {
            let rows = run_file(&config, cli.seed, None)?;
            write_reports(&rows, output(&cli.out)?)
        }
        Command::Sweep { config, param, values } => {
            let spec = SweepSpec {
                param,
                values: parse_values(&values)?,
            };
            let rows = run_file(&config, cli.seed, Some(spec))?;
            write_reports(&rows, output(&cli.out)?)
        }
        Command::Preset { name } => match preset(&name, cli.seed.unwrap_or(1))? {
            Preset::Scenarios(list) => {
                let mut rows = Vec::new();
                for (label, cfg) in list {
                    log::info!("running {label}");
                    rows.extend(sweep(&cfg, &label)?);
                }
                write_reports(&rows, output(&cli.out)?)
            }
            Preset::Ula(cfg) => write_ula_csv(&ula_scenario(&cfg)?, output(&cli.out)?),
            Preset::Timing(cfg) => write_timing_csv(&brute_force_timing(&cfg)?, output(&cli.out)?),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
