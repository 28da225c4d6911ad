//! Driver layer over `phasemix-core`: configuration, time-series runs,
//! sweeps and deterministic CSV/JSON output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;

pub use config::{Couplings, Mode, QuadratureNodes, RunConfig};
pub use error::{CliError, Result};
pub use run::{run, RunSummary, Validation};
pub use sweep::{run_sweep, SweepReport};
