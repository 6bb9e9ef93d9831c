//! Double-exponential quadrature rules.
//!
//! Tanh-sinh on finite intervals and exp-sinh on half lines. Both tolerate
//! integrable endpoint singularities, which the integral representations in
//! [`crate::specfun`] have at the origin.

use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

const MAX_LEVEL: u32 = 10;
const MIN_LEVEL: u32 = 3;
const T_MAX: f64 = 4.0;

fn accumulate(op: &'static str, term: impl Fn(f64) -> f64, t_lo: f64, t_hi: f64, rel_tol: f64) -> Result<f64> {
    let mut h = 1.0;
    let mut sum = 0.0;
    let eval = |t: f64| -> Result<f64> {
        let v = term(t);
        if v.is_finite() {
            Ok(v)
        } else if t.abs() > 3.0 {
            // Weight underflow region; the abscissa has collapsed onto an endpoint.
            Ok(0.0)
        } else {
            Err(Error::no_convergence(
                op,
                0,
                format!("non-finite integrand at node t = {t}"),
            ))
        }
    };
    let k_lo = (t_lo / h).ceil() as i64;
    let k_hi = (t_hi / h).floor() as i64;
    for k in k_lo..=k_hi {
        sum += eval(k as f64 * h)?;
    }
    let mut prev = sum * h;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let k_lo = (t_lo / h).ceil() as i64;
        let k_hi = (t_hi / h).floor() as i64;
        let mut k = if k_lo % 2 == 0 { k_lo + 1 } else { k_lo };
        while k <= k_hi {
            sum += eval(k as f64 * h)?;
            k += 2;
        }
        let est = sum * h;
        if level >= MIN_LEVEL && (est - prev).abs() <= rel_tol * est.abs() + f64::MIN_POSITIVE {
            return Ok(est);
        }
        prev = est;
    }
    Err(Error::no_convergence(
        op,
        1 << MAX_LEVEL,
        format!("level difference above tolerance {rel_tol:e}"),
    ))
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// The integrand is never evaluated at the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::precondition("tanh_sinh", "finite limits required"));
    }
    if a == b {
        return Ok(0.0);
    }
    let width = b - a;
    let term = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let w = width * FRAC_PI_2 * t.cosh() / (2.0 * ch * ch);
        if w == 0.0 {
            return 0.0;
        }
        // Offsets from the nearer endpoint keep resolution near singularities.
        let x = if u < 0.0 {
            a + width / (1.0 + (-2.0 * u).exp())
        } else {
            b - width / (1.0 + (2.0 * u).exp())
        };
        if x <= a.min(b) || x >= a.max(b) {
            return 0.0;
        }
        w * f(x)
    };
    accumulate("tanh_sinh", term, -T_MAX, T_MAX, rel_tol)
}

/// Integrates `f` over `[a, ∞)`. The integrand must decay at infinity.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> Result<f64> {
    let term = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let e = u.exp();
        let w = FRAC_PI_2 * t.cosh() * e;
        let x = a + e;
        if w == 0.0 || x == a || !x.is_finite() {
            return 0.0;
        }
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            w * v
        }
    };
    accumulate("exp_sinh", term, -4.5, 4.5, rel_tol)
}
