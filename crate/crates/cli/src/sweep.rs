//! Parameter sweeps: many configs, one manifest.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{RunConfig, KEYS};
use crate::error::{CliError, Result};
use crate::output::{fmt_value, write_atomic};
use crate::run::{run, RunSummary};

#[derive(Debug)]
pub struct SweepEntry {
    pub index: usize,
    pub output_path: PathBuf,
    pub outcome: std::result::Result<RunSummary, CliError>,
}

#[derive(Debug)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    pub manifest: PathBuf,
}

impl SweepReport {
    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome.is_err()).count()
    }

    /// `Err(SweepPartial)` when any run failed.
    pub fn into_result(self) -> Result<Self> {
        match self.failed() {
            0 => Ok(self),
            failed => Err(CliError::SweepPartial {
                failed,
                total: self.entries.len(),
            }),
        }
    }
}

/// Parses `key=v1,v2,...` into a grid axis.
pub fn parse_axis(raw: &str) -> Result<(String, Vec<String>)> {
    let (k, vs) = raw
        .split_once('=')
        .ok_or_else(|| CliError::config(raw, "grid axis must look like `key=v1,v2,...`"))?;
    let key = k.trim().to_string();
    if !KEYS.contains(&key.as_str()) || key == "output_path" {
        return Err(CliError::config(key, "not a sweepable key"));
    }
    let values: Vec<String> = vs
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(str::to_string)
        .collect();
    if values.is_empty() {
        return Err(CliError::config(key, "grid axis has no values"));
    }
    Ok((key, values))
}

/// Cartesian product of `axes` over `base`, last axis varying fastest.
/// Run `i` writes to `out_dir/run_XXXX.csv`.
pub fn expand_grid(
    base: &[(String, String)],
    axes: &[(String, Vec<String>)],
    out_dir: &Path,
) -> Result<Vec<RunConfig>> {
    let mut combos: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (key, values) in axes {
        if values.is_empty() {
            return Err(CliError::config(key.clone(), "grid axis has no values"));
        }
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((key.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    combos
        .into_iter()
        .enumerate()
        .map(|(i, combo)| {
            let mut pairs = base.to_vec();
            pairs.extend(combo);
            pairs.push((
                "output_path".into(),
                out_dir
                    .join(format!("run_{i:04}.csv"))
                    .display()
                    .to_string(),
            ));
            RunConfig::from_pairs(&pairs)
        })
        .collect()
}

/// Runs every config on a pool of `workers` threads (0 = rayon default),
/// then writes `manifest`. A failing run is recorded and does not stop the
/// others.
pub fn run_sweep(configs: &[RunConfig], manifest: &Path, workers: usize) -> Result<SweepReport> {
    if configs.is_empty() {
        return Err(CliError::config("sweep", "no configurations to run"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::config("workers", e.to_string()))?;
    let entries: Vec<SweepEntry> = pool.install(|| {
        configs
            .par_iter()
            .enumerate()
            .map(|(index, cfg)| SweepEntry {
                index,
                output_path: cfg.output_path.clone(),
                outcome: run(cfg),
            })
            .collect()
    });

    let mut text = String::from("index,output_path,status,max_xi,argmax_t,message\n");
    for e in &entries {
        let line = match &e.outcome {
            Ok(s) => format!(
                "{},{},ok,{},{},\n",
                e.index,
                e.output_path.display(),
                fmt_value(s.max_xi),
                fmt_value(s.argmax_t)
            ),
            Err(err) => format!(
                "{},{},failed,,,\"{}\"\n",
                e.index,
                e.output_path.display(),
                err.to_string().replace('"', "\"\"")
            ),
        };
        text.push_str(&line);
    }
    write_atomic(manifest, text.as_bytes())?;
    Ok(SweepReport {
        entries,
        manifest: manifest.to_path_buf(),
    })
}
