//! Sweep runner and acceptance harness for the X-duplex relay models.
//!
//! A sweep config names a metric, a set of modes and an SNR × η grid. Each
//! grid point is evaluated twice, by the closed-form expression and by
//! Monte-Carlo, and written as one CSV per (metric, η) together with a JSON
//! manifest of the run.

pub mod acceptance;
pub mod config;
mod error;
pub mod format;
pub mod sweep;

pub use error::CliError;

use config::SweepSpec;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// `git describe`-style version of this build.
pub const VERSION: &str = env!("XDLAB_VERSION");

/// Command-line values that replace fields of the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub tol_scale: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, spec: &mut SweepSpec) -> Result<(), CliError> {
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(s) = self.tol_scale {
            spec.tol_scale = s;
        }
        spec.validate_overrides()
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub version: &'static str,
    pub config: &'a SweepSpec,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_s: f64,
    pub files: Vec<String>,
}

/// Paths written by [`run`].
#[derive(Debug)]
pub struct RunOutput {
    pub csv: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Loads `config_path`, evaluates the sweep and writes CSVs plus
/// `manifest.json` into `out_dir`.
pub fn run(config_path: &Path, overrides: &Overrides, out_dir: &Path) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let mut spec = config::load_sweep(config_path)?;
    overrides.apply(&mut spec)?;
    let files = sweep::run_sweep(&spec)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir.display(), e))?;
    let mut csv = Vec::new();
    for (name, bytes) in &files {
        let path = out_dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(path.display(), e))?;
        csv.push(path);
    }
    let manifest = Manifest {
        version: VERSION,
        config: &spec,
        seed: spec.seed,
        threads: rayon::current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
        files: files.iter().map(|(n, _)| n.clone()).collect(),
    };
    let path = out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(path.display(), e))?;
    Ok(RunOutput { csv, manifest: path })
}
