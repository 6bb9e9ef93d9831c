//! Analytic and Monte-Carlo evaluation of a sweep.

use crate::config::{MetricKind, Mode, SweepSpec};
use crate::error::CliError;
use crate::format::fmt_num;
use serde::Serialize;
use std::f64::consts::LN_10;
use xdlab_core::analytic::outage::threshold;
use xdlab_core::analytic::{
    ccdf_fd, ccdf_hd_equiv, cdf_xd, diversity_closed, fd_pa_taylor, outage, pa_outage_bounds, ser, sumrate,
    DiversityMode, OutageMode, PaMethod, SerMode, SumRateMode, Validity,
};
use xdlab_core::channel::SystemParams;
use xdlab_core::db_to_linear;
use xdlab_core::mcsim::{empirical_cdf, estimate, Estimate, Metric, Quantity, SimConfig};

/// One row of an output curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub eta: f64,
    pub mode: String,
    pub metric: String,
    pub analytic_value: f64,
    pub analytic_validity: String,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub abs_gap: f64,
    pub within_tolerance: bool,
}

#[derive(Serialize)]
struct Row<'a> {
    snr_db: String,
    eta: String,
    mode: &'a str,
    metric: &'a str,
    analytic_value: String,
    analytic_validity: &'a str,
    mc_mean: String,
    mc_stderr: String,
    abs_gap: String,
    within_tolerance: bool,
}

/// CSV bytes with a header row, fixed column order and `\n` line endings.
pub fn to_csv(points: &[CurvePoint]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for p in points {
        w.serialize(Row {
            snr_db: fmt_num(p.snr_db),
            eta: fmt_num(p.eta),
            mode: &p.mode,
            metric: &p.metric,
            analytic_value: fmt_num(p.analytic_value),
            analytic_validity: &p.analytic_validity,
            mc_mean: fmt_num(p.mc_mean),
            mc_stderr: fmt_num(p.mc_stderr),
            abs_gap: fmt_num(p.abs_gap),
            within_tolerance: p.within_tolerance,
        })
        .expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

/// Output file name for one (metric, η) curve family.
pub fn csv_name(metric: MetricKind, eta: f64) -> String {
    format!("{}_eta{}.csv", metric.as_str(), eta)
}

fn params(spec: &SweepSpec, mode: Mode, pt: f64, eta: f64) -> xdlab_core::Result<SystemParams> {
    if mode.is_pa() {
        SystemParams::power_allocated(spec.lambda1, spec.lambda2, eta * spec.lambda1, pt)
    } else {
        SystemParams::from_eta(spec.lambda1, spec.lambda2, eta, pt, pt)
    }
}

struct Analytic {
    value: f64,
    validity: Validity,
}

impl From<xdlab_core::analytic::AsymptoticValue> for Analytic {
    fn from(v: xdlab_core::analytic::AsymptoticValue) -> Self {
        Analytic {
            value: v.value,
            validity: v.validity,
        }
    }
}

fn analytic(spec: &SweepSpec, mode: Mode, pt: f64, p: &SystemParams) -> xdlab_core::Result<Analytic> {
    let t = threshold(spec.r0);
    Ok(match spec.metric {
        MetricKind::Outage => {
            let m = match mode {
                Mode::Fd => OutageMode::Fd,
                Mode::Hd => OutageMode::Hd,
                _ => OutageMode::Xd,
            };
            outage(m, spec.r0, p)?.into()
        }
        MetricKind::Ser => {
            let m = match mode {
                Mode::Fd => SerMode::Fd,
                Mode::Hd => SerMode::Hd,
                _ => SerMode::Xd,
            };
            ser(m, spec.modulation, p)?.into()
        }
        MetricKind::Sumrate => {
            let m = match mode {
                Mode::Fd => SumRateMode::Fd,
                Mode::Hd => SumRateMode::Hd,
                _ => SumRateMode::Xd,
            };
            sumrate(m, p, &spec.series)?.into()
        }
        MetricKind::Diversity => {
            let m = match mode {
                Mode::Fd => DiversityMode::Fd,
                Mode::Hd => DiversityMode::Hd,
                _ => DiversityMode::Xd,
            };
            Analytic {
                value: diversity_closed(m, t, pt, p)?,
                validity: Validity::AsymptoticHighSnr,
            }
        }
        MetricKind::Cdf => {
            let x = spec.x.unwrap_or(t);
            match mode {
                Mode::Fd => {
                    let c = ccdf_fd(x, p)?;
                    Analytic {
                        value: 1.0 - c.value,
                        validity: c.validity,
                    }
                }
                Mode::Hd => Analytic {
                    value: 1.0 - ccdf_hd_equiv(x, p)?,
                    validity: Validity::Exact,
                },
                _ => cdf_xd(x, p)?.into(),
            }
        }
        MetricKind::PaOutage => unreachable!("bounds are handled by pa_points"),
    })
}

// Half-width of the agreement band for one point, before `tol_scale`.
fn tolerance(metric: MetricKind, value: f64, stderr: f64) -> f64 {
    match metric {
        MetricKind::Outage | MetricKind::Cdf => 0.01 + 3.0 * stderr,
        MetricKind::Ser | MetricKind::Sumrate => 0.05 * value.abs() + 3.0 * stderr,
        MetricKind::Diversity => 0.1 + 3.0 * stderr,
        MetricKind::PaOutage => 3.0 * stderr,
    }
}

// Negative log-log slope of the Monte-Carlo outage around grid point `i`.
fn mc_slope(est: &[Estimate], snr: &[f64], i: usize) -> (f64, f64) {
    let n = est.len();
    let (a, b) = match i {
        0 => (0, 1),
        _ if i == n - 1 => (n - 2, n - 1),
        _ => (i - 1, i + 1),
    };
    let dl = (snr[b] - snr[a]) / 10.0 * LN_10;
    let (pa, pb) = (est[a].mean, est[b].mean);
    let slope = -(pb.ln() - pa.ln()) / dl;
    let se = ((est[a].stderr / pa).powi(2) + (est[b].stderr / pb).powi(2)).sqrt() / dl;
    (slope, se)
}

fn context(spec: &SweepSpec, mode: Mode, snr_db: f64, eta: f64) -> String {
    format!("{} {} at {snr_db} dB, eta = {eta}", spec.metric.as_str(), mode.as_str())
}

fn mc(spec: &SweepSpec, mode: Mode, p: SystemParams) -> xdlab_core::Result<Estimate> {
    let config = SimConfig::new(p, spec.trials, spec.seed)?;
    let t = threshold(spec.r0);
    match spec.metric {
        MetricKind::Outage | MetricKind::Diversity | MetricKind::PaOutage => {
            estimate(Metric::Outage { r0: spec.r0 }, mode.sim(), &config)
        }
        MetricKind::Ser => estimate(Metric::Ser(spec.modulation), mode.sim(), &config),
        MetricKind::Sumrate => estimate(Metric::SumRate, mode.sim(), &config),
        MetricKind::Cdf => {
            let q = match mode {
                Mode::Fd => Quantity::GammaF,
                Mode::Hd => Quantity::GammaHdEquiv,
                _ => Quantity::GammaMax,
            };
            let f = empirical_cdf(q, &[spec.x.unwrap_or(t)], &config)?[0].1;
            let n = spec.trials as f64;
            let se = (f * (1.0 - f) / n).sqrt();
            Ok(Estimate {
                mean: f,
                stderr: se,
                ci95_low: f - 1.96 * se,
                ci95_high: f + 1.96 * se,
                trials: spec.trials,
            })
        }
    }
}

fn curve(spec: &SweepSpec, mode: Mode, eta: f64) -> Result<Vec<CurvePoint>, CliError> {
    let mut est = Vec::with_capacity(spec.snr_db.len());
    for &db in &spec.snr_db {
        let p = params(spec, mode, db_to_linear(db), eta).map_err(CliError::numeric(context(spec, mode, db, eta)))?;
        est.push(mc(spec, mode, p).map_err(CliError::numeric(context(spec, mode, db, eta)))?);
    }
    let mut out = Vec::new();
    for (i, &db) in spec.snr_db.iter().enumerate() {
        let pt = db_to_linear(db);
        let ctx = || context(spec, mode, db, eta);
        let p = params(spec, mode, pt, eta).map_err(CliError::numeric(ctx()))?;
        let point = |metric: &str, a: f64, validity: Validity, mean: f64, se: f64, within: bool| CurvePoint {
            snr_db: db,
            eta,
            mode: mode.as_str().to_string(),
            metric: metric.to_string(),
            analytic_value: a,
            analytic_validity: validity.as_str().to_string(),
            mc_mean: mean,
            mc_stderr: se,
            abs_gap: (a - mean).abs(),
            within_tolerance: within,
        };
        if spec.metric == MetricKind::PaOutage {
            let x = threshold(spec.r0);
            let (b, validity) = match mode {
                Mode::XdPa => (pa_outage_bounds(x, pt, &p, PaMethod::ClosedForm), Validity::Exact),
                _ => (fd_pa_taylor(x, pt, &p), Validity::AsymptoticHighSnr),
            };
            let b = b.map_err(CliError::numeric(ctx()))?;
            let (m, se) = (est[i].mean, est[i].stderr);
            let band = spec.tol_scale * tolerance(spec.metric, b.upper, se);
            out.push(point("pa_outage_upper", b.upper, validity, m, se, m <= b.upper + band));
            out.push(point("pa_outage_lower", b.lower, validity, m, se, m >= b.lower - band));
            continue;
        }
        let a = analytic(spec, mode, pt, &p).map_err(CliError::numeric(ctx()))?;
        let (mean, se) = match spec.metric {
            MetricKind::Diversity => mc_slope(&est, &spec.snr_db, i),
            _ => (est[i].mean, est[i].stderr),
        };
        let band = spec.tol_scale * tolerance(spec.metric, a.value, se);
        let within = (a.value - mean).abs() <= band;
        out.push(point(spec.metric.as_str(), a.value, a.validity, mean, se, within));
    }
    Ok(out)
}

/// Evaluates the sweep and returns `(file name, CSV bytes)` per η, in
/// config order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let mut files = Vec::new();
    for &eta in &spec.eta {
        let mut points = Vec::new();
        for &mode in &spec.modes {
            points.extend(curve(spec, mode, eta)?);
        }
        files.push((csv_name(spec.metric, eta), to_csv(&points)));
    }
    Ok(files)
}
