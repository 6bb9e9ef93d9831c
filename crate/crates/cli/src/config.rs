//! Sweep and validation configuration files.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::path::Path;
use xdlab_core::analytic::{Modulation, SeriesConfig};
use xdlab_core::mcsim::SimMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Outage,
    Ser,
    Sumrate,
    Diversity,
    Cdf,
    PaOutage,
}

impl MetricKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricKind::Outage => "outage",
            MetricKind::Ser => "ser",
            MetricKind::Sumrate => "sumrate",
            MetricKind::Diversity => "diversity",
            MetricKind::Cdf => "cdf",
            MetricKind::PaOutage => "pa_outage",
        }
    }

    fn allows(&self, mode: Mode) -> bool {
        match self {
            MetricKind::PaOutage => mode.is_pa(),
            _ => !mode.is_pa(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "HD")]
    Hd,
    #[serde(rename = "XD")]
    Xd,
    #[serde(rename = "FD_PA")]
    FdPa,
    #[serde(rename = "XD_PA")]
    XdPa,
}

impl Mode {
    pub fn sim(&self) -> SimMode {
        match self {
            Mode::Fd => SimMode::Fd,
            Mode::Hd => SimMode::Hd,
            Mode::Xd => SimMode::Xd,
            Mode::FdPa => SimMode::FdPa,
            Mode::XdPa => SimMode::XdPa,
        }
    }

    pub fn as_str(&self) -> &'static str {
        self.sim().as_str()
    }

    pub fn is_pa(&self) -> bool {
        matches!(self, Mode::FdPa | Mode::XdPa)
    }
}

fn default_r0() -> f64 {
    2.0
}

fn default_modulation() -> Modulation {
    Modulation::BPSK
}

fn unit() -> f64 {
    1.0
}

/// One experiment: a metric evaluated over an SNR × η grid for several modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub metric: MetricKind,
    pub modes: Vec<Mode>,
    /// `10 log10(P_t)`, strictly ascending.
    pub snr_db: Vec<f64>,
    pub eta: Vec<f64>,
    /// Target rate in bits/s/Hz.
    #[serde(default = "default_r0")]
    pub r0: f64,
    #[serde(default = "default_modulation")]
    pub modulation: Modulation,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub series: SeriesConfig,
    #[serde(default = "unit")]
    pub lambda1: f64,
    #[serde(default = "unit")]
    pub lambda2: f64,
    /// CDF abscissa for the `cdf` metric; `2^r0 − 1` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Multiplier on every tolerance behind `within_tolerance`.
    #[serde(default = "unit")]
    pub tol_scale: f64,
}

/// Parameters of the acceptance suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationSpec {
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "unit")]
    pub tol_scale: f64,
}

// A semantic problem tied to the key it was found under.
struct Issue {
    key: &'static str,
    msg: String,
}

fn issue(key: &'static str, msg: impl Into<String>) -> Issue {
    Issue { key, msg: msg.into() }
}

fn positive(key: &'static str, v: f64) -> Result<(), Issue> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(issue(key, format!("must be positive and finite, got {v}")))
    }
}

impl SweepSpec {
    fn check(&self) -> Result<(), Issue> {
        if self.modes.is_empty() {
            return Err(issue("modes", "must not be empty"));
        }
        if let Some(m) = self.modes.iter().find(|m| !self.metric.allows(**m)) {
            return Err(issue(
                "modes",
                format!(
                    "mode {} is not available for metric {}",
                    m.as_str(),
                    self.metric.as_str()
                ),
            ));
        }
        if self.snr_db.is_empty() {
            return Err(issue("snr_db", "must not be empty"));
        }
        if self.snr_db.iter().any(|v| !v.is_finite()) {
            return Err(issue("snr_db", "values must be finite"));
        }
        if self.snr_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(issue("snr_db", "must be strictly ascending"));
        }
        if self.metric == MetricKind::Diversity && self.snr_db.len() < 2 {
            return Err(issue("snr_db", "diversity needs at least two SNR points"));
        }
        if self.eta.is_empty() {
            return Err(issue("eta", "must not be empty"));
        }
        for (i, &e) in self.eta.iter().enumerate() {
            positive("eta", e)?;
            if self.eta[..i].contains(&e) {
                return Err(issue("eta", format!("value {e} appears twice")));
            }
        }
        positive("r0", self.r0)?;
        positive("modulation", self.modulation.a1)?;
        positive("modulation", self.modulation.a2)?;
        if self.trials == 0 {
            return Err(issue("trials", "must be at least 1"));
        }
        let s = &self.series;
        if s.n1 == 0 || s.n2 == 0 || s.n3 == 0 {
            return Err(issue("series", "truncation counts must be at least 1"));
        }
        positive("lambda1", self.lambda1)?;
        positive("lambda2", self.lambda2)?;
        if let Some(x) = self.x {
            positive("x", x)?;
        }
        positive("tol_scale", self.tol_scale)?;
        Ok(())
    }

    /// Re-checks the spec after command-line overrides.
    pub fn validate_overrides(&self) -> Result<(), CliError> {
        self.check()
            .map_err(|i| CliError::Config(format!("--{}: {}", i.key.replace('_', "-"), i.msg)))
    }
}

impl ValidationSpec {
    fn check(&self) -> Result<(), Issue> {
        if self.trials == 0 {
            return Err(issue("trials", "must be at least 1"));
        }
        positive("tol_scale", self.tol_scale)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn json_error(path: &Path, e: serde_json::Error) -> CliError {
    let msg = e.to_string();
    let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m);
    CliError::Config(format!("{}:{}:{}: {msg}", path.display(), e.line(), e.column()))
}

// Anchors a semantic issue at the first occurrence of its key.
fn anchored(path: &Path, text: &str, i: Issue) -> CliError {
    let (line, col) = match text.find(&format!("\"{}\"", i.key)) {
        Some(at) => {
            let before = &text[..at];
            let line = before.matches('\n').count() + 1;
            let col = at - before.rfind('\n').map_or(0, |n| n + 1) + 1;
            (line, col)
        }
        None => (1, 1),
    };
    CliError::Config(format!("{}:{line}:{col}: {}: {}", path.display(), i.key, i.msg))
}

#[derive(Deserialize)]
struct ManifestConfig {
    config: SweepSpec,
}

/// Reads a sweep config. A run manifest is accepted too and yields the
/// configuration it recorded.
pub fn load_sweep(path: &Path) -> Result<SweepSpec, CliError> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| json_error(path, e))?;
    let spec = if value.get("config").is_some() {
        serde_json::from_str::<ManifestConfig>(&text).map(|m| m.config)
    } else {
        serde_json::from_str::<SweepSpec>(&text)
    }
    .map_err(|e| json_error(path, e))?;
    spec.check().map_err(|i| anchored(path, &text, i))?;
    Ok(spec)
}

pub fn load_validation(path: &Path) -> Result<ValidationSpec, CliError> {
    let text = read(path)?;
    let spec: ValidationSpec = serde_json::from_str(&text).map_err(|e| json_error(path, e))?;
    spec.check().map_err(|i| anchored(path, &text, i))?;
    Ok(spec)
}

#[cfg(test)]
mod test {
    use super::*;

    fn parse(text: &str) -> Result<SweepSpec, CliError> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, text).unwrap();
        load_sweep(&p)
    }

    #[test]
    fn defaults_fill_in() {
        let s =
            parse(r#"{"metric": "outage", "modes": ["FD"], "snr_db": [10], "eta": [0.2], "trials": 10, "seed": 1}"#)
                .unwrap();
        assert_eq!(s.r0, 2.0);
        assert_eq!(s.modulation, Modulation::BPSK);
        assert_eq!(s.series, SeriesConfig::default());
        assert_eq!(s.tol_scale, 1.0);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("{\n  \"metric\": \"outage\",\n  \"modes\": [],\n  \"snr_db\": [1], \"eta\": [0.2], \"trials\": 1, \"seed\": 1\n}")
            .unwrap_err();
        assert!(e.to_string().ends_with("c.json:3:3: modes: must not be empty"), "{e}");
        let e = parse("{\n  \"metric\": \"outage\",\n  \"modes\": [\"FD\"],,\n}").unwrap_err();
        assert!(e.to_string().contains("c.json:3:19:"), "{e}");
        let e = parse(r#"{"metric": "bogus"}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e =
            parse(r#"{"metric": "pa_outage", "modes": ["XD"], "snr_db": [1], "eta": [0.2], "trials": 1, "seed": 1}"#)
                .unwrap_err();
        assert!(e.to_string().contains("not available"), "{e}");
        let e = parse(r#"{"metric": "cdf", "modes": ["XD"], "snr_db": [2, 1], "eta": [0.2], "trials": 1, "seed": 1}"#)
            .unwrap_err();
        assert!(e.to_string().contains("ascending"), "{e}");
    }
}
