//! Average symbol error rate for linear modulations.

use super::{cdf, integrate_fallible, AsymptoticValue, Validity};
use crate::channel::SystemParams;
use crate::quad;
use crate::specfun::{gamma_upper_scaled, parabolic_cylinder_d_scaled};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Modulation constants in `SER = a1 E[Q(√(2 a2 γ))]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulation {
    pub a1: f64,
    pub a2: f64,
}

impl Modulation {
    pub const BPSK: Modulation = Modulation { a1: 1.0, a2: 1.0 };

    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        let m = Modulation { a1, a2 };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        if self.a1 > 0.0 && self.a2 > 0.0 && self.a1.is_finite() && self.a2.is_finite() {
            Ok(())
        } else {
            Err(Error::precondition("Modulation", "a1 and a2 must be positive"))
        }
    }

    fn prefactor(&self) -> f64 {
        self.a1 * self.a2.sqrt() / (2.0 * PI.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SerMode {
    #[serde(rename = "XD")]
    Xd,
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "HD")]
    Hd,
    /// Infinite-SNR full-duplex limit.
    #[serde(rename = "FD_floor")]
    FdFloor,
}

const GAMMA_3_2: f64 = 0.886_226_925_452_758_013_649_083_741_671; // √π/2
const GAMMA_7_2: f64 = 3.323_350_970_447_842_551_184_064_031_264; // 15√π/8

/// Closed-form high-SNR average SER.
pub fn ser(mode: SerMode, m: Modulation, params: &SystemParams) -> Result<AsymptoticValue> {
    m.check()?;
    let (a2, eta, c) = (m.a2, params.eta(), params.c());
    let pre = m.prefactor();
    let sqrt_pi = PI.sqrt();
    let l1 = (PI / a2).sqrt();
    let l2 = || -> Result<f64> { Ok(sqrt_pi / eta.sqrt() * gamma_upper_scaled(0.5, (a2 + c) / eta)?) };
    let raw = match mode {
        SerMode::Fd => pre * (l1 - l2()?),
        SerMode::Hd => {
            let two_c = 2.0 * c;
            let d = parabolic_cylinder_d_scaled(-0.5, (a2 + two_c) / two_c.sqrt())?;
            pre * (l1 - two_c.powf(-0.25) * sqrt_pi * d)
        }
        SerMode::Xd => {
            let two_c = 2.0 * c;
            let e = 1.0 / (params.lambda1 * params.ps * eta);
            let mu1 = a2 + two_c + e + eta;
            let mu2 = a2 + two_c + e + 5.0 / 3.0 * eta;
            let d1 = parabolic_cylinder_d_scaled(-1.5, mu1 / two_c.sqrt())?;
            let d2 = parabolic_cylinder_d_scaled(-3.5, mu2 / two_c.sqrt())?;
            let damp = (-e).exp();
            let l3 = eta * damp * two_c.powf(-0.75) * GAMMA_3_2 * d1
                + 0.5 * eta.powi(3) * damp * two_c.powf(-1.75) * GAMMA_7_2 * d2;
            pre * (l1 - l2()? - l3)
        }
        SerMode::FdFloor => pre / eta.sqrt() * GAMMA_3_2 * gamma_upper_scaled(-0.5, a2 / eta)?,
    };
    Ok(AsymptoticValue::bounded(raw, 0.0, m.a1, Validity::AsymptoticHighSnr))
}

/// SER by numerical integration of `pre ∫ e^{-a2 γ} γ^{-1/2} F(γ) dγ` over the
/// mode's high-SNR CDF.
pub fn ser_semi_analytic(mode: SerMode, m: Modulation, params: &SystemParams) -> Result<f64> {
    m.check()?;
    let eta = params.eta();
    let cdf_of = |g: f64| -> Result<f64> {
        Ok(match mode {
            SerMode::Xd => cdf::cdf_xd(g, params)?.raw,
            SerMode::Fd => 1.0 - cdf::ccdf_fd(g, params)?.raw,
            SerMode::Hd => 1.0 - cdf::ccdf_hd_equiv(g, params)?,
            SerMode::FdFloor => eta * g / (1.0 + eta * g),
        })
    };
    // γ = s² removes the endpoint singularity.
    let integral = integrate_fallible(
        |f| quad::exp_sinh(f, 0.0, 1e-10),
        |s| {
            let g = s * s;
            Ok(2.0 * (-m.a2 * g).exp() * cdf_of(g)?)
        },
    )?;
    Ok(m.prefactor() * integral)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn rejects_bad_modulation() {
        assert!(Modulation::new(0.0, 1.0).is_err());
        let p = SystemParams::equal_power(100.0, 0.2).unwrap();
        assert!(ser(SerMode::Fd, Modulation { a1: 1.0, a2: -1.0 }, &p).is_err());
    }
}
