//! Outage probability, diversity order and the FD/HD crossing point.

use super::{cdf, AsymptoticValue, Validity};
use crate::channel::SystemParams;
use crate::{linear_to_db, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutageMode {
    /// High-SNR full-duplex outage `1 - e^{-Cx}/(1+ηx)`.
    #[serde(rename = "FD")]
    Fd,
    /// Half-duplex outage with the exact Bessel form.
    #[serde(rename = "HD")]
    Hd,
    /// Half-duplex outage `1 - e^{-C(x²+2x)}`.
    #[serde(rename = "HD_approx")]
    HdApprox,
    #[serde(rename = "XD")]
    Xd,
    /// Infinite-SNR full-duplex limit `ηx/(1+ηx)`.
    #[serde(rename = "FD_floor")]
    FdFloor,
    #[serde(rename = "XD_highsnr")]
    XdHighSnr,
}

/// SINR threshold `2^{R0} - 1` for target rate `r0` in bits/s/Hz.
pub fn threshold(r0: f64) -> f64 {
    r0.exp2() - 1.0
}

/// Outage probability at target rate `r0`.
pub fn outage(mode: OutageMode, r0: f64, params: &SystemParams) -> Result<AsymptoticValue> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::Domain {
            op: "outage",
            arg: r0,
            detail: "target rate must be positive",
        });
    }
    let x = threshold(r0);
    let eta = params.eta();
    let c = params.c();
    let g = 1.0 + eta * x;
    let v = match mode {
        OutageMode::Fd => AsymptoticValue::probability((eta * x - (-c * x).exp_m1()) / g, Validity::AsymptoticHighSnr),
        OutageMode::Hd => AsymptoticValue::probability(1.0 - cdf::ccdf_hd_equiv(x, params)?, Validity::Exact),
        OutageMode::HdApprox => {
            AsymptoticValue::probability(-(-c * (x * x + 2.0 * x)).exp_m1(), Validity::AsymptoticHighSnr)
        }
        OutageMode::Xd => cdf::cdf_xd(x, params)?,
        OutageMode::FdFloor => AsymptoticValue::probability(eta * x / g, Validity::AsymptoticHighSnr),
        OutageMode::XdHighSnr => {
            let beta4 = c * (x * x + 2.0 * x) + (x + 1.0) / (eta * params.lambda1 * params.ps);
            AsymptoticValue::probability(
                (-eta * x * (-beta4).exp_m1() - (-c * x).exp_m1()) / g,
                Validity::AsymptoticHighSnr,
            )
        }
    };
    Ok(v)
}

/// Relative step (in log space) of the finite-difference slope.
pub const LOG_STEP: f64 = 1e-4;

/// Negative log-log slope of `curve` at `pt` by a central difference.
pub fn diversity_finite<F>(curve: F, pt: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(pt > 0.0) {
        return Err(Error::Domain {
            op: "diversity_finite",
            arg: pt,
            detail: "power must be positive",
        });
    }
    let hi = curve(pt * LOG_STEP.exp())?;
    let lo = curve(pt * (-LOG_STEP).exp())?;
    for v in [hi, lo] {
        if !(v > 0.0) {
            return Err(Error::Domain {
                op: "diversity_finite",
                arg: v,
                detail: "outage must be positive",
            });
        }
    }
    Ok(-(hi.ln() - lo.ln()) / (2.0 * LOG_STEP))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiversityMode {
    #[serde(rename = "XD")]
    Xd,
    #[serde(rename = "XD_approx")]
    XdApprox,
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "FD_approx")]
    FdApprox,
    #[serde(rename = "HD")]
    Hd,
    #[serde(rename = "HD_approx")]
    HdApprox,
}

/// Closed-form finite-SNR diversity order at SINR threshold `x` with `P_S = P_R = pt`.
///
/// Only `λ1`, `λ2` and `η` are taken from `params`.
pub fn diversity_closed(mode: DiversityMode, x: f64, pt: f64, params: &SystemParams) -> Result<f64> {
    if !(pt > 0.0) {
        return Err(Error::Domain {
            op: "diversity_closed",
            arg: pt,
            detail: "power must be positive",
        });
    }
    super::check_threshold("diversity_closed", x)?;
    let (l1, l2) = (params.lambda1, params.lambda2);
    let eta = params.eta();
    let c1 = 1.0 / l1 + 1.0 / l2;
    let c = c1 / pt;
    let y = x * x + 2.0 * x;
    let g = 1.0 + eta * x;
    let extra = (x + 1.0) / (eta * l1);
    let beta4 = c * y + extra / pt;
    let d = match mode {
        DiversityMode::Xd => {
            let num = x / g * c1 * (-c * x).exp() + eta * x / g * (c1 * y + extra) * (-beta4).exp();
            let den = (-eta * x * (-beta4).exp_m1() - (-c * x).exp_m1()) / g;
            num / (pt * den)
        }
        DiversityMode::XdApprox => {
            let n = c1 * x + eta * x * c1 * y + eta * x * extra;
            let corr = (c1 * x).powi(2) + eta * x * (c1 * y + extra).powi(2);
            (n - corr / pt) / n
        }
        DiversityMode::Fd => {
            let num = c1 * x / g * (-c * x).exp();
            let den = (eta * x - (-c * x).exp_m1()) / g;
            num / (pt * den)
        }
        DiversityMode::FdApprox => (1.0 - x * c1 / pt) / (1.0 + pt * eta * l1 * l2 / (l1 + l2)),
        DiversityMode::Hd => c1 * y * (-c * y).exp() / (pt * -(-c * y).exp_m1()),
        DiversityMode::HdApprox => 1.0 - c1 * y / pt,
    };
    Ok(d)
}

/// Transmit power at which full- and half-duplex outage curves cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub linear: f64,
    pub db: f64,
}

/// `P_t* = (1/λ1 + 1/λ2)(x² + x)/ln(1 + ηx)`.
pub fn intersection_power(x: f64, params: &SystemParams) -> Result<Intersection> {
    let eta = params.eta();
    if !(eta * x > 0.0) {
        return Err(Error::Domain {
            op: "intersection_power",
            arg: eta * x,
            detail: "η·x must be positive; the crossing recedes to infinity",
        });
    }
    let linear = (1.0 / params.lambda1 + 1.0 / params.lambda2) * (x * x + x) / (eta * x).ln_1p();
    Ok(Intersection {
        linear,
        db: linear_to_db(linear),
    })
}
