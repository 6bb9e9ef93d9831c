//! Outage bounds for X-duplex relaying with optimal power allocation.

use crate::channel::SystemParams;
use crate::oracle;
use crate::specfun::{erfcx, probability_integral};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaMethod {
    ClosedForm,
    /// Leading high-SNR terms.
    Taylor,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaBounds {
    pub upper: f64,
    pub lower: f64,
}

/// `√(πβ) e^{βγ²} [erf(γ√β + u₂/(2√β)) − erf(γ√β + u₁/(2√β))]`.
///
/// Same-sign arguments go through `erfcx` so that `e^{βγ²}` never
/// multiplies a cancelled difference.
pub fn g_helper(u1: f64, u2: f64, beta: f64, gamma_p: f64) -> f64 {
    if u1 == u2 {
        return 0.0;
    }
    let sb = beta.sqrt();
    let s = |u: f64| gamma_p * sb + u / (2.0 * sb);
    let (s1, s2) = (s(u1), s(u2));
    let pre = (PI * beta).sqrt();
    // e^{βγ² − s²}
    let damp = |u: f64| (-gamma_p * u - u * u / (4.0 * beta)).exp();
    if s1 >= 0.0 && s2 >= 0.0 {
        pre * (erfcx(s1) * damp(u1) - erfcx(s2) * damp(u2))
    } else if s1 <= 0.0 && s2 <= 0.0 {
        pre * (erfcx(-s2) * damp(u2) - erfcx(-s1) * damp(u1))
    } else {
        pre * (beta * gamma_p * gamma_p).exp() * (probability_integral(s2) - probability_integral(s1))
    }
}

struct Setup {
    t: f64,
    t2: f64,
    t0: f64,
    beta: f64,
    y: f64,
}

fn setup(x: f64, p: f64, lr: f64) -> Setup {
    let t = p * ((x + 1.0).sqrt() - x.sqrt()) / x.sqrt();
    let y = x * x + 2.0 * x;
    Setup {
        t,
        t2: (2.0 * y + 2.0 * (y * y + y).sqrt()) / p,
        t0: 2.0 / t,
        beta: p * lr / (4.0 * t * t),
        y,
    }
}

/// Upper and lower bounds on the outage probability `Pr(γ_XD-PA < x)` at
/// total power `p`, using the relay interference mean in `params`.
pub fn pa_outage_bounds(x: f64, p: f64, params: &SystemParams, method: PaMethod) -> Result<PaBounds> {
    if !(x > 0.0 && x.is_finite() && p > 0.0 && p.is_finite()) {
        return Err(Error::precondition(
            "pa_outage_bounds",
            format!("requires x > 0, P > 0, got x = {x}, P = {p}"),
        ));
    }
    let (l1, l2, lr) = (params.lambda1, params.lambda2, params.lambda_r);
    let s = setup(x, p, lr);
    let c = 1.0 / l1 + 1.0 / l2;
    let f_upper = |t: f64| -(-c * t).exp_m1();
    let f_lower = |t: f64| (-t / l1).exp_m1() * (-t / l2).exp_m1();
    match method {
        PaMethod::ClosedForm => {
            if s.t0 >= s.t2 {
                return Ok(PaBounds {
                    upper: f_upper(s.t2),
                    lower: f_lower(s.t2),
                });
            }
            let shift = 2.0 * s.t / (p * lr);
            let g = |gp: f64| g_helper(s.t0, s.t2, s.beta, gp);
            let gc = g(c - shift);
            Ok(PaBounds {
                upper: f_upper(s.t0) + c * gc,
                lower: f_lower(s.t0) + g(1.0 / l1 - shift) / l1 + g(1.0 / l2 - shift) / l2 - c * gc,
            })
        }
        PaMethod::Quadrature => {
            let pr = |t: f64| {
                if t <= s.t0 {
                    1.0
                } else {
                    (-(s.t * s.t * t * t - 2.0 * s.t * t) / (p * lr)).exp()
                }
            };
            let dens_l = |t: f64| (-t / l1).exp() / l1 + (-t / l2).exp() / l2 - c * (-c * t).exp();
            let mut pts = vec![0.0];
            if s.t0 < s.t2 {
                pts.push(s.t0);
            }
            pts.push(s.t2);
            const TOL: f64 = 1e-12;
            Ok(PaBounds {
                upper: oracle::integrate_pieces(|t| pr(t) * c * (-c * t).exp(), &pts, TOL)?,
                lower: oracle::integrate_pieces(|t| pr(t) * dens_l(t), &pts, TOL)?,
            })
        }
        PaMethod::Taylor => {
            let (sx, sy) = ((x * x + x).sqrt(), (s.y * s.y + s.y).sqrt());
            let gap = s.y + sy - sx - x;
            let t3 = (sx + x).powi(2) * gap;
            let ratio = ((x + 1.0).sqrt() - x.sqrt()) / x.sqrt();
            Ok(PaBounds {
                upper: 2.0 * (l1 + l2) / (l1 * l2) * gap / p,
                lower: 2.0 * lr / (l1 * l2) * t3 / (p * p) * (3.0 * (l1 + l2) / (l1 * l2) - 8.0 / lr * ratio),
            })
        }
    }
}

/// Leading high-SNR bracket for the full-duplex outage under power allocation.
pub fn fd_pa_taylor(x: f64, p: f64, params: &SystemParams) -> Result<PaBounds> {
    if !(x > 0.0 && p > 0.0) {
        return Err(Error::precondition("fd_pa_taylor", "requires x > 0, P > 0"));
    }
    let (l1, l2, lr) = (params.lambda1, params.lambda2, params.lambda_r);
    let k = (x * x + x).sqrt() + x;
    Ok(PaBounds {
        upper: (l1 + l2) * (lr * PI).sqrt() / (2.0 * l1 * l2) * k / p.sqrt(),
        lower: lr / (l1 * l2) * k * k / p,
    })
}
