//! Exact distribution functions by one-dimensional adaptive quadrature.
//!
//! These skip the high-SNR Bessel approximations, integrating out γ1 and γR
//! in closed form and γ2 numerically. They serve as references for the
//! asymptotic expressions in [`super::cdf`].

use super::check_threshold;
use crate::channel::SystemParams;
use crate::oracle;
use crate::Result;

const TOL: f64 = 1e-11;
// Probabilities below this are returned with absolute accuracy only.
const PROB_FLOOR: f64 = 1e-30;

// Integrates g(u) over u = γ2 - offset ∈ (0, ∞) with break points spread
// over many scales; the integrands vary on a scale set by 1/P.
fn over_gamma2(p: &SystemParams, g: impl Fn(f64) -> f64) -> Result<f64> {
    let s = p.lambda2;
    let pts = [
        0.0,
        1e-9 * s,
        1e-7 * s,
        1e-5 * s,
        1e-3 * s,
        1e-1 * s,
        s,
        10.0 * s,
        f64::INFINITY,
    ];
    oracle::integrate_pieces_abs(g, &pts, TOL, PROB_FLOOR * 1e-3)
}

/// Exact `Pr(γF > x)`.
pub fn ccdf_fd_exact(x: f64, p: &SystemParams) -> Result<f64> {
    check_threshold("ccdf_fd_exact", x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let eta = p.eta();
    let off = x / p.pr;
    let v = over_gamma2(p, |u| {
        let y = p.pr * u; // P_R γ2 - x
        let t = x * (y + x + 1.0) / y;
        let g2 = u + off;
        (-g2 / p.lambda2 - t / (p.lambda1 * p.ps)).exp() / (p.lambda2 * (1.0 + eta * t))
    })?;
    Ok(v)
}

/// Exact `Pr(γH > x² + 2x)` from its defining integral over γ2.
pub fn ccdf_hd_exact(x: f64, p: &SystemParams) -> Result<f64> {
    check_threshold("ccdf_hd_exact", x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let y = x * x + 2.0 * x;
    let off = y / p.pr;
    over_gamma2(p, |u| {
        let d = p.pr * u;
        let g2 = u + off;
        (-(y + (y * y + y) / d) / (p.ps * p.lambda1) - g2 / p.lambda2).exp() / p.lambda2
    })
}

/// Exact `Pr(γF > x, γH > x² + 2x)`.
pub fn joint_ccdf_exact(x: f64, p: &SystemParams) -> Result<f64> {
    check_threshold("joint_ccdf_exact", x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let y = x * x + 2.0 * x;
    let off = y / p.pr;
    let l1ps = p.lambda1 * p.ps;
    over_gamma2(p, |u| {
        let big_y = p.pr * (u + off);
        let t_h = y * (big_y + 1.0) / (big_y - y);
        let s_f = x * (big_y + 1.0) / (big_y - x);
        let g0 = ((t_h / s_f - 1.0) / p.pr).max(0.0);
        let a = s_f / l1ps;
        let rate = a * p.pr + 1.0 / p.lambda_r;
        let low = (-t_h / l1ps).exp() * -(-g0 / p.lambda_r).exp_m1();
        let high = (-a - g0 * rate).exp() / (p.lambda_r * rate);
        (-(u + off) / p.lambda2).exp() / p.lambda2 * (low + high)
    })
}

/// Exact CDF of the X-duplex SINR.
pub fn cdf_xd_exact(x: f64, p: &SystemParams) -> Result<f64> {
    Ok(1.0 - ccdf_fd_exact(x, p)? - ccdf_hd_exact(x, p)? + joint_ccdf_exact(x, p)?)
}
