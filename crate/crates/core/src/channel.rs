//! Per-sample SINR physics for a two-hop amplify-and-forward relay.
//!
//! Noise power is normalized to one, so transmit powers are linear SNRs.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Statistical configuration of the link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mean of the source-relay SNR γ1.
    pub lambda1: f64,
    /// Mean of the relay-destination SNR γ2.
    pub lambda2: f64,
    /// Mean of the residual self-interference SNR γR.
    pub lambda_r: f64,
    pub ps: f64,
    pub pr: f64,
    /// Total power budget shared by source and relay under power allocation.
    pub total_p: Option<f64>,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op: "SystemParams",
            arg: v,
            detail: name,
        })
    }
}

impl SystemParams {
    pub fn new(lambda1: f64, lambda2: f64, lambda_r: f64, ps: f64, pr: f64) -> Result<Self> {
        positive("lambda1 must be positive", lambda1)?;
        positive("lambda2 must be positive", lambda2)?;
        positive("lambda_r must be positive", lambda_r)?;
        positive("ps must be positive", ps)?;
        positive("pr must be positive", pr)?;
        Ok(SystemParams {
            lambda1,
            lambda2,
            lambda_r,
            ps,
            pr,
            total_p: None,
        })
    }

    /// Builds the parameters from a self-interference level `eta`; `λR = η λ1 P_S / P_R`.
    pub fn from_eta(lambda1: f64, lambda2: f64, eta: f64, ps: f64, pr: f64) -> Result<Self> {
        positive("eta must be positive", eta)?;
        positive("ps must be positive", ps)?;
        positive("pr must be positive", pr)?;
        Self::new(lambda1, lambda2, eta * lambda1 * ps / pr, ps, pr)
    }

    /// Unit-mean channels with `P_S = P_R = pt`.
    pub fn equal_power(pt: f64, eta: f64) -> Result<Self> {
        Self::from_eta(1.0, 1.0, eta, pt, pt)
    }

    /// Power-allocation setup with budget `p`; the nominal split is even so
    /// that `eta() = λR / λ1`.
    pub fn power_allocated(lambda1: f64, lambda2: f64, lambda_r: f64, p: f64) -> Result<Self> {
        positive("total power must be positive", p)?;
        let mut s = Self::new(lambda1, lambda2, lambda_r, 0.5 * p, 0.5 * p)?;
        s.total_p = Some(p);
        Ok(s)
    }

    /// Residual self-interference level `η = λR P_R / (λ1 P_S)`.
    pub fn eta(&self) -> f64 {
        self.lambda_r * self.pr / (self.lambda1 * self.ps)
    }

    /// `C = 1/(λ1 P_S) + 1/(λ2 P_R)`.
    pub fn c(&self) -> f64 {
        1.0 / (self.lambda1 * self.ps) + 1.0 / (self.lambda2 * self.pr)
    }

    /// `λ1 λ2 P_S P_R`.
    pub(crate) fn q(&self) -> f64 {
        self.lambda1 * self.lambda2 * self.ps * self.pr
    }

    pub fn total_power(&self) -> Result<f64> {
        self.total_p
            .ok_or_else(|| Error::precondition("SystemParams", "total power is not set"))
    }
}

/// One joint fading draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingSample {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma_r: f64,
}

impl FadingSample {
    pub fn new(gamma1: f64, gamma2: f64, gamma_r: f64) -> Result<Self> {
        let s = FadingSample {
            gamma1,
            gamma2,
            gamma_r,
        };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        for &v in &[self.gamma1, self.gamma2, self.gamma_r] {
            if !(v >= 0.0) {
                return Err(Error::Domain {
                    op: "FadingSample",
                    arg: v,
                    detail: "channel SNRs must be non-negative",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Duplex {
    #[serde(rename = "FD")]
    Full,
    #[serde(rename = "HD")]
    Half,
}

/// SINRs of every relaying mode on one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSinr {
    pub fd: f64,
    pub hd: f64,
    /// `√(γH+1) - 1`: the full-slot SINR with the same rate as half-duplex.
    pub hd_equiv: f64,
    pub xd: f64,
    pub selected: Duplex,
}

/// Source/relay power splits for both modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaSplit {
    pub ps_fd: f64,
    pub pr_fd: f64,
    pub ps_hd: f64,
    pub pr_hd: f64,
}

/// Full-duplex SINR with explicit powers, no input checks.
#[inline]
pub(crate) fn fd_raw(g1: f64, g2: f64, gr: f64, ps: f64, pr: f64) -> f64 {
    let x1 = ps * g1 / (pr * gr + 1.0);
    let y = pr * g2;
    let v = x1 * y / (x1 + y + 1.0);
    debug_assert!({
        let beta2 = 1.0 / (g1 * ps + gr * pr + 1.0);
        let unsimplified = ps * pr * g1 * g2 * beta2 / (pr * pr * g2 * gr * beta2 + pr * g2 * beta2 + 1.0);
        (unsimplified - v).abs() <= 1e-12 * v.abs().max(f64::MIN_POSITIVE) || v == 0.0
    });
    v
}

#[inline]
pub(crate) fn hd_raw(g1: f64, g2: f64, ps: f64, pr: f64) -> f64 {
    ps * pr * g1 * g2 / (ps * g1 + pr * g2 + 1.0)
}

#[inline]
pub(crate) fn hd_equiv(hd: f64) -> f64 {
    // √(h+1) - 1 without cancellation for small h.
    hd / ((hd + 1.0).sqrt() + 1.0)
}

#[inline]
pub(crate) fn select_raw(fd: f64, hd: f64) -> ModeSinr {
    let he = hd_equiv(hd);
    let (xd, selected) = if fd >= he {
        (fd, Duplex::Full)
    } else {
        (he, Duplex::Half)
    };
    ModeSinr {
        fd,
        hd,
        hd_equiv: he,
        xd,
        selected,
    }
}

/// Full-duplex end-to-end SINR `X1 P_R γ2 / (X1 + P_R γ2 + 1)`, `X1 = P_S γ1/(P_R γR + 1)`.
pub fn sinr_fd(sample: &FadingSample, params: &SystemParams) -> Result<f64> {
    sample.check()?;
    Ok(fd_raw(
        sample.gamma1,
        sample.gamma2,
        sample.gamma_r,
        params.ps,
        params.pr,
    ))
}

/// Half-duplex end-to-end SINR `P_S P_R γ1 γ2 / (P_S γ1 + P_R γ2 + 1)`.
pub fn sinr_hd(sample: &FadingSample, params: &SystemParams) -> Result<f64> {
    sample.check()?;
    Ok(hd_raw(sample.gamma1, sample.gamma2, params.ps, params.pr))
}

/// Per-slot mode selection maximizing the instantaneous rate. Ties go to full duplex.
pub fn select_xd(sample: &FadingSample, params: &SystemParams) -> Result<ModeSinr> {
    Ok(select_raw(sinr_fd(sample, params)?, sinr_hd(sample, params)?))
}

/// Rate in bits/s/Hz of the selected mode.
pub fn rate(sinr: &ModeSinr, mode: Duplex) -> f64 {
    match mode {
        Duplex::Full => sinr.fd.ln_1p() / std::f64::consts::LN_2,
        Duplex::Half => 0.5 * sinr.hd.ln_1p() / std::f64::consts::LN_2,
    }
}

/// Optimal instantaneous power split under the budget `p`.
///
/// The source share grows with the second-hop radicand, not the first: the
/// split maximises the end-to-end SINR only in this orientation.
pub fn pa_split(sample: &FadingSample, p: f64) -> Result<PaSplit> {
    sample.check()?;
    if !(p > 0.0) {
        return Err(Error::Domain {
            op: "pa_split",
            arg: p,
            detail: "total power must be positive",
        });
    }
    let a = (p * sample.gamma1 + 1.0).sqrt();
    let b_hd = (p * sample.gamma2 + 1.0).sqrt();
    let b_fd = ((p * sample.gamma2 + 1.0) * (p * sample.gamma_r + 1.0)).sqrt();
    Ok(PaSplit {
        ps_fd: p * b_fd / (a + b_fd),
        pr_fd: p * a / (a + b_fd),
        ps_hd: p * b_hd / (a + b_hd),
        pr_hd: p * a / (a + b_hd),
    })
}

#[inline]
pub(crate) fn fd_pa_raw(g1: f64, g2: f64, gr: f64, p: f64) -> f64 {
    let root = ((p * g1 + 1.0) * (p * g2 + 1.0) * (p * gr + 1.0)).sqrt();
    p * p * g1 * g2 / (p * (g1 + g2 + gr) + 2.0 + 2.0 * root)
}

#[inline]
pub(crate) fn hd_pa_raw(g1: f64, g2: f64, p: f64) -> f64 {
    let root = ((p * g1 + 1.0) * (p * g2 + 1.0)).sqrt();
    p * p * g1 * g2 / (p * (g1 + g2) + 2.0 + 2.0 * root)
}

/// SINRs under optimal power allocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaSinr {
    pub fd_pa: f64,
    pub hd_pa: f64,
    pub xd_pa: f64,
}

/// Full-duplex, half-duplex and X-duplex SINRs with the optimal split of `p`.
pub fn sinr_pa(sample: &FadingSample, p: f64) -> Result<PaSinr> {
    let split = pa_split(sample, p)?;
    let (g1, g2, gr) = (sample.gamma1, sample.gamma2, sample.gamma_r);
    let fd_pa = fd_pa_raw(g1, g2, gr, p);
    let hd_pa = hd_pa_raw(g1, g2, p);
    debug_assert!({
        let fd = fd_raw(g1, g2, gr, split.ps_fd, split.pr_fd);
        let hd = hd_raw(g1, g2, split.ps_hd, split.pr_hd);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(b.abs()) + 1e-300;
        close(fd, fd_pa) && close(hd, hd_pa)
    });
    Ok(PaSinr {
        fd_pa,
        hd_pa,
        xd_pa: fd_pa.max(hd_equiv(hd_pa)),
    })
}

/// Bounding functions `(𝒞(x,y), 𝒟(x,y))` for the power-allocated X-duplex SINR.
pub fn pa_bound_fns(x: f64, y: f64, p: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0 && y >= 0.0 && p > 0.0) {
        return Err(Error::precondition("pa_bound_fns", "requires x ≥ 0, y ≥ 0, P > 0"));
    }
    Ok(pa_bound_raw(x, y, p))
}

#[inline]
pub(crate) fn pa_c(x: f64, y: f64, p: f64) -> f64 {
    x * x * p * p / (2.0 * x * p + y * p + 2.0 + 2.0 * (x * p + 1.0) * (y * p + 1.0).sqrt())
}

#[inline]
pub(crate) fn pa_bound_raw(x: f64, y: f64, p: f64) -> (f64, f64) {
    let c = pa_c(x, y, p);
    (c, c.max(hd_equiv(pa_c(x, 0.0, p))))
}
