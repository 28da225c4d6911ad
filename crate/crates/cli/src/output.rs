//! CSV and JSON writers. Every file is written to a temporary sibling and
//! renamed into place, so a failed run never leaves a truncated output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use phasemix_core::JointDensity;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Config echo followed by `# @ key = value` run metadata.
pub fn preamble(cfg: &RunConfig, meta: &[(&str, String)]) -> String {
    let mut s = format!("# phasemix {}\n", env!("CARGO_PKG_VERSION"));
    for (k, v) in cfg.to_pairs() {
        let _ = writeln!(s, "# {k} = {v}");
    }
    for (k, v) in meta {
        let _ = writeln!(s, "# @ {k} = {v}");
    }
    s
}

pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| fmt_value(x)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

/// Writes `contents` to `path` atomically. The parent directory must exist.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let out_err = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(out_err)?;
    tmp.write_all(contents).map_err(out_err)?;
    tmp.as_file().sync_all().map_err(out_err)?;
    tmp.persist(path).map_err(|e| out_err(e.error))?;
    Ok(())
}

/// Sibling path for the joint-density dump of a run.
pub fn joint_dump_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_os_string();
    s.push(".joint.json");
    PathBuf::from(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDump {
    pub t: f64,
    pub partner_dim: usize,
    pub fock_dim: usize,
    pub dim: usize,
    pub layout: String,
    /// Row-major `[re, im]` pairs.
    pub data: Vec<Vec<[f64; 2]>>,
}

impl JointDump {
    pub fn new(rho: &JointDensity, t: f64) -> Self {
        let data = rho
            .matrix()
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self {
            t,
            partner_dim: rho.partner_dim(),
            fock_dim: rho.fock_dim(),
            dim: rho.dim(),
            layout: "index = qubit * fock_dim + photons; qubit order ee, eg, ge, gg".to_string(),
            data,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let [re, im] = self.data[i][j];
        Complex64::new(re, im)
    }
}
