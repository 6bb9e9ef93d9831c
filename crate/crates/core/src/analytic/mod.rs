//! Closed-form and asymptotic performance expressions.
//!
//! Probabilities come back as [`AsymptoticValue`]s: the high-SNR expansions
//! can leave `[0, 1]` at low SNR, so results are clamped and the excursion
//! is reported.

pub mod cdf;
pub mod outage;
pub mod pa;
pub mod reference;
pub mod ser;
pub mod sumrate;

pub use cdf::{ccdf_fd, ccdf_hd_equiv, cdf_xd, cdf_xd_with, joint_ccdf, KernelBias};
pub use outage::{diversity_closed, diversity_finite, intersection_power, outage, DiversityMode, OutageMode};
pub use pa::{fd_pa_taylor, g_helper, pa_outage_bounds, PaBounds, PaMethod};
pub use ser::{ser, ser_semi_analytic, Modulation, SerMode};
pub use sumrate::{sumrate, sumrate_numeric, w_i1, w_i2, SumRateMode};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    Exact,
    AsymptoticHighSnr,
    SeriesTruncated,
    /// Evaluated by numerical integration.
    Numeric,
}

impl Validity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Validity::Exact => "exact",
            Validity::AsymptoticHighSnr => "asymptotic-high-snr",
            Validity::SeriesTruncated => "series-truncated",
            Validity::Numeric => "numeric",
        }
    }
}

/// A formula value with its validity class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: f64,
    /// Formula output before clamping.
    pub raw: f64,
    pub validity: Validity,
    /// Set when `raw` left the tolerance band around the admissible range.
    pub clamped: bool,
}

/// Slack around `[lo, hi]` tolerated before an excursion is flagged.
pub const CLAMP_BAND: f64 = 0.05;

impl AsymptoticValue {
    pub(crate) fn probability(raw: f64, validity: Validity) -> Self {
        Self::bounded(raw, 0.0, 1.0, validity)
    }

    pub(crate) fn bounded(raw: f64, lo: f64, hi: f64, validity: Validity) -> Self {
        let band = CLAMP_BAND * (hi - lo);
        AsymptoticValue {
            value: raw.clamp(lo, hi),
            raw,
            validity,
            clamped: raw < lo - band || raw > hi + band,
        }
    }

    pub(crate) fn unbounded(raw: f64, validity: Validity) -> Self {
        AsymptoticValue {
            value: raw,
            raw,
            validity,
            clamped: false,
        }
    }
}

/// Truncation counts for the sum-rate series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesConfig {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    /// Replace a series that fails its convergence check by direct quadrature.
    pub quadrature_fallback: bool,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            n1: 3,
            n2: 6,
            n3: 6,
            quadrature_fallback: true,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 || self.n2 == 0 || self.n3 == 0 {
            return Err(Error::precondition("SeriesConfig", "term counts must be at least 1"));
        }
        Ok(())
    }
}

pub(crate) fn check_threshold(op: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op,
            arg: x,
            detail: "threshold must be non-negative and finite",
        })
    }
}

/// Runs a quadrature over a fallible integrand, surfacing the first error.
pub(crate) fn integrate_fallible<T>(
    integrator: impl FnOnce(&dyn Fn(f64) -> f64) -> Result<T>,
    g: impl Fn(f64) -> Result<f64>,
) -> Result<T> {
    let err = std::cell::RefCell::new(None);
    let h = |x: f64| match g(x) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let r = integrator(&h);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    r
}
