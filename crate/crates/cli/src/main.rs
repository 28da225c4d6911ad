use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phasemix_cli::config::{parse_override, parse_pairs};
use phasemix_cli::output::fmt_value;
use phasemix_cli::sweep::{expand_grid, parse_axis};
use phasemix_cli::{run, run_sweep, CliError, Mode, Result, RunConfig};

#[derive(Parser)]
#[command(
    name = "phasemix",
    version,
    about = "Two-qubit entanglement in a thermal cavity field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one time series.
    Run {
        /// `key = value` config file; defaults are used when omitted.
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Override a config key, e.g. `--set gamma=0.5`.
        #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Cross-check the closed form, quadrature and oracle paths.
    Validate {
        #[arg(short, long)]
        config: Option<PathBuf>,
        #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run a grid of configurations, or a list of config files.
    Sweep {
        /// Base config for `--grid`.
        #[arg(short, long)]
        config: Option<PathBuf>,
        #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Grid axis `key=v1,v2,...`; repeat for a product grid.
        #[arg(short, long, value_name = "KEY=V1,V2")]
        grid: Vec<String>,
        /// Complete config files, run as given.
        #[arg(long = "file", value_name = "PATH")]
        files: Vec<PathBuf>,
        #[arg(short, long, default_value = "sweep")]
        out_dir: PathBuf,
        /// Worker threads; 0 uses all cores.
        #[arg(short, long, default_value_t = 0)]
        workers: usize,
    },
}

fn base_pairs(config: Option<&PathBuf>, overrides: &[String]) -> Result<Vec<(String, String)>> {
    let mut pairs = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Input {
                path: p.clone(),
                source,
            })?;
            parse_pairs(&text)?
        }
        None => Vec::new(),
    };
    for o in overrides {
        pairs.push(parse_override(o)?);
    }
    Ok(pairs)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = RunConfig::from_pairs(&base_pairs(config.as_ref(), &overrides)?)?;
            let s = run(&cfg)?;
            println!(
                "{}: {} rows, max xi {} at t = {}",
                cfg.output_path.display(),
                s.rows,
                fmt_value(s.max_xi),
                fmt_value(s.argmax_t)
            );
        }
        Command::Validate { config, overrides } => {
            let mut pairs = base_pairs(config.as_ref(), &overrides)?;
            pairs.push(("mode".into(), Mode::Validate.to_string()));
            let cfg = RunConfig::from_pairs(&pairs)?;
            let s = run(&cfg)?;
            let v = s.validation.expect("validate mode reports discrepancies");
            println!("truncation            {}", s.truncation);
            println!("quadrature nodes      {}", s.nodes);
            println!("closed vs oracle      {}", fmt_value(v.closed_vs_oracle));
            println!(
                "closed vs quadrature  {}",
                fmt_value(v.closed_vs_quadrature)
            );
            println!(
                "quadrature vs oracle  {}",
                fmt_value(v.quadrature_vs_oracle)
            );
            println!("unitarity defect      {}", fmt_value(v.unitarity));
        }
        Command::Sweep {
            config,
            overrides,
            grid,
            files,
            out_dir,
            workers,
        } => {
            let mut configs = Vec::new();
            if !grid.is_empty() {
                let base = base_pairs(config.as_ref(), &overrides)?;
                let axes = grid
                    .iter()
                    .map(|g| parse_axis(g))
                    .collect::<Result<Vec<_>>>()?;
                configs = expand_grid(&base, &axes, &out_dir)?;
            }
            for (i, f) in files.iter().enumerate() {
                // Outputs always land in the sweep directory.
                let out = out_dir
                    .join(format!("file_{i:04}.csv"))
                    .display()
                    .to_string();
                configs.push(RunConfig::load(f, &[("output_path".into(), out)])?);
            }
            if !configs.is_empty() {
                std::fs::create_dir_all(&out_dir).map_err(|source| CliError::Output {
                    path: out_dir.clone(),
                    source,
                })?;
            }
            let report = run_sweep(&configs, &out_dir.join("manifest.csv"), workers)?;
            for e in &report.entries {
                if let Err(err) = &e.outcome {
                    eprintln!("run {} failed: {err}", e.index);
                }
            }
            println!(
                "{} runs, manifest at {}",
                report.entries.len(),
                report.manifest.display()
            );
            report.into_result()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
