//! Average sum rate.

use super::{cdf, integrate_fallible, AsymptoticValue, SeriesConfig, Validity};
use crate::channel::SystemParams;
use crate::quad;
use crate::specfun::{erfc, exp_integral_e1, exp_integral_e1_scaled, gamma_lower, whittaker_w_scaled};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumRateMode {
    #[serde(rename = "XD")]
    Xd,
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "HD")]
    Hd,
    /// Infinite-SNR full-duplex ceiling `ln η / ((η-1) ln 2)`.
    #[serde(rename = "FD_bound")]
    FdBound,
    /// Infinite-SNR X-duplex rate; unbounded.
    #[serde(rename = "XD_limit")]
    XdLimit,
}

/// Estimated truncation error, relative to the value, above which the sum
/// rate abandons a convergent but inaccurate tail series.
pub const SERIES_TAIL_TOL: f64 = 0.05;

const QUAD_TOL: f64 = 1e-12;
/// Largest estimated error in the w2 term, in nats, before the series is
/// replaced by quadrature.
pub const W2_AMPLIFIED_TOL: f64 = 1e-2;

/// `∫_b^∞ e^{-Cx²}/(x+a) dx` from its series in incomplete-gamma terms,
/// keeping the first `n` terms of the tail sum.
pub fn w_i1(a: f64, b: f64, n: usize, c: f64) -> Result<f64> {
    Ok(w_i1_with_tail(a, b, n, c)?.0)
}

/// [`w_i1`] together with a geometric estimate of the dropped terms.
pub fn w_i1_with_tail(a: f64, b: f64, n: usize, c: f64) -> Result<(f64, f64)> {
    if !(b.abs() > a.abs() && a.abs() > 0.0 && b > 0.0) {
        return Err(Error::precondition(
            "w_i1",
            format!("requires b > |a| > 0, got a = {a}, b = {b}"),
        ));
    }
    if !(c > 0.0) || n == 0 {
        return Err(Error::precondition("w_i1", "requires C > 0 and n ≥ 1"));
    }
    let z = c * b * b;
    let t1 = (PI / c).sqrt() * erfc(c.sqrt() * b) / (2.0 * a);
    let t2 = 0.5 * (-c * a * a).exp() * exp_integral_e1(c * (b * b - a * a))?;
    // k-th term a^{2k-2} C^{k-3/2} z^{1/4-k/2} e^{-z/2} W_{1/4-k/2, 3/4-k/2}(z).
    let term = |k: usize| -> Result<f64> {
        let kf = k as f64;
        let w = whittaker_w_scaled(0.25 - 0.5 * kf, 0.75 - 0.5 * kf, z)?;
        Ok(a.powi(2 * k as i32 - 2) * c.powf(kf - 1.5) * z.powf(0.25 - 0.5 * kf) * (-z).exp() * w)
    };
    let mut sum = 0.0;
    let mut cur = term(1)?;
    for k in 1..=n {
        sum += cur;
        let next = term(k + 1)?;
        let ratio = (next / cur).abs();
        if cur != 0.0 && ratio >= 1.0 {
            return Err(Error::no_convergence(
                "w_i1",
                k,
                format!("term ratio {ratio:.3} ≥ 1 at a = {a}, b = {b}, C = {c}"),
            ));
        }
        if k == n {
            let tail = if cur == 0.0 {
                0.0
            } else {
                (next / (1.0 - ratio) / (2.0 * a)).abs()
            };
            return Ok((t1 + t2 - sum / (2.0 * a), tail));
        }
        cur = next;
    }
    unreachable!("loop returns at k = n")
}

/// Direct quadrature of `∫_b^∞ e^{-Cx²}/(x+a) dx`.
pub fn w_i1_quadrature(a: f64, b: f64, c: f64) -> Result<f64> {
    quad::exp_sinh(|t| (-c * (b + t) * (b + t)).exp() / (b + t + a), 0.0, QUAD_TOL)
}

/// Remainder bound of the `n2`-term exponential Taylor series over the
/// integration range, used as the validity test for [`w_i2`].
pub fn w_i2_remainder(eta: f64, n2: usize, c: f64) -> f64 {
    let u = c * (1.0 + 1.0 / eta).powi(2);
    let mut r = 1.0;
    for k in 1..=n2 + 1 {
        r *= u / k as f64;
    }
    r
}

/// Threshold on [`w_i2_remainder`] defining the validity region.
pub const W_I2_REMAINDER_TOL: f64 = 1e-6;

/// `∫_ρ^{1+1/η} e^{-Cx²}/(x + 1/η - ρ) dx` with `e^{-Cx²}` expanded to `n2` terms.
pub fn w_i2(eta: f64, rho: f64, n2: usize, c: f64) -> Result<f64> {
    if !(rho > 1.0 && rho < 1.0 + 0.5 / eta) {
        return Err(Error::precondition(
            "w_i2",
            format!("requires 1 < ρ < 1 + 1/(2η), got ρ = {rho}, η = {eta}"),
        ));
    }
    if !(c > 0.0 && eta > 0.0) {
        return Err(Error::precondition("w_i2", "requires C > 0 and η > 0"));
    }
    let eps0 = 1.0 + 2.0 / eta - rho;
    let two_c_rho = 2.0 * c * rho;
    let eps1 = two_c_rho / eta;
    let eps2 = two_c_rho * eps0;
    let e1_diff = exp_integral_e1(eps1)? - exp_integral_e1(eps2)?;
    let mut sum = 0.0;
    let mut coef = 1.0; // (-C)^k / (k! η^{2k})
    for k in 0..=n2 {
        if k > 0 {
            coef *= -c / (k as f64 * eta * eta);
        }
        sum += coef * e1_diff;
    }
    let mut fact = 1.0;
    for k in 1..=n2 {
        fact *= k as f64;
        let ck = (-c).powi(k as i32) / fact;
        let mut binom = 1.0;
        for l in 1..=2 * k {
            binom *= (2 * k + 1 - l) as f64 / l as f64;
            let lf = l as f64;
            let g = gamma_lower(lf, eps2)? - gamma_lower(lf, eps1)?;
            sum += ck / (two_c_rho.powi(l as i32) * (-eta).powi((2 * k - l) as i32)) * binom * g;
        }
    }
    Ok((-c * rho * rho + two_c_rho / eta).exp() * sum)
}

/// Direct quadrature of the [`w_i2`] integral.
pub fn w_i2_quadrature(eta: f64, rho: f64, c: f64) -> Result<f64> {
    quad::tanh_sinh(
        |x| (-c * x * x).exp() / (x + 1.0 / eta - rho),
        rho,
        1.0 + 1.0 / eta,
        QUAD_TOL,
    )
}

// e^C E1(C) - e^{C/η} E1(C/η) over 1 - η, with its limit at η = 1.
fn w1(c: f64, eta: f64) -> Result<f64> {
    let f = exp_integral_e1_scaled(c)?;
    if (1.0 - eta).abs() < 1e-6 {
        return Ok(1.0 - c * f);
    }
    Ok((f - exp_integral_e1_scaled(c / eta)?) / (1.0 - eta))
}

/// Average sum rate in bits/s/Hz.
pub fn sumrate(mode: SumRateMode, params: &SystemParams, series: &SeriesConfig) -> Result<AsymptoticValue> {
    series.validate()?;
    let eta = params.eta();
    let c = params.c();
    let v = match mode {
        SumRateMode::Fd => AsymptoticValue::unbounded(w1(c, eta)? / LN_2, Validity::AsymptoticHighSnr),
        SumRateMode::Hd => {
            AsymptoticValue::unbounded(exp_integral_e1_scaled(c)? / (2.0 * LN_2), Validity::AsymptoticHighSnr)
        }
        SumRateMode::FdBound => {
            let r = if (eta - 1.0).abs() < 1e-9 {
                1.0 / LN_2
            } else {
                eta.ln() / ((eta - 1.0) * LN_2)
            };
            AsymptoticValue::unbounded(r, Validity::AsymptoticHighSnr)
        }
        SumRateMode::XdLimit => AsymptoticValue::unbounded(f64::INFINITY, Validity::AsymptoticHighSnr),
        SumRateMode::Xd => return xd_closed(params, series),
    };
    Ok(v)
}

fn tail_checked(a: f64, b: f64, n: usize, c: f64) -> Result<(f64, f64)> {
    let (value, tail) = w_i1_with_tail(a, b, n, c)?;
    if tail > SERIES_TAIL_TOL * value.abs() {
        return Err(Error::no_convergence(
            "w_i1",
            n,
            format!("estimated tail {tail:.3e} on value {value:.6e} at a = {a}, b = {b}, C = {c}"),
        ));
    }
    Ok((value, tail))
}

fn w2_quadrature(c: f64, eta: f64, l1ps: f64) -> Result<f64> {
    quad::exp_sinh(
        |x| eta * x / ((1.0 + x) * (1.0 + eta * x)) * (-c * x * x - 2.0 * c * x - (x + 1.0) / (l1ps * eta)).exp(),
        0.0,
        QUAD_TOL,
    )
}

fn xd_closed(p: &SystemParams, series: &SeriesConfig) -> Result<AsymptoticValue> {
    let eta = p.eta();
    let c = p.c();
    let l1ps = p.lambda1 * p.ps;
    let c2 = 2.0 / p.q().sqrt();
    let mut disc = c * c - c2 * c2;
    if disc < 0.0 {
        if disc > -1e-12 * c * c {
            disc = 0.0;
        } else {
            return Err(Error::precondition("sumrate", format!("C² < C2² (C = {c}, C2 = {c2})")));
        }
    }
    let root = disc.sqrt();
    let z1 = (c + root) / (2.0 * eta);
    let z2 = (c - root) / (2.0 * eta);
    // e^{C/(2η)} W(z1) W(z2) = W̃(z1) W̃(z2) because z1 + z2 = C/η.
    let w3 = 2.0 / (p.lambda2 * p.pr * c2) * whittaker_w_scaled(-1.5, 0.0, z1)? * whittaker_w_scaled(-1.5, 0.0, z2)?;

    let mut validity = Validity::SeriesTruncated;
    let w2 = if (eta - 1.0).abs() < 1e-3 {
        // η/(η-1) is singular at η = 1 while the integral is not.
        validity = Validity::Numeric;
        w2_quadrature(c, eta, l1ps)?
    } else {
        let rho = 1.0 + 1.0 / (2.0 * c * l1ps * eta);
        let mut fallback = |r: Result<(f64, f64)>, q: &dyn Fn() -> Result<f64>| -> Result<(f64, f64)> {
            match r {
                Ok(v) => Ok(v),
                Err(e @ (Error::NoConvergence { .. } | Error::Precondition { .. })) => {
                    if series.quadrature_fallback {
                        validity = Validity::Numeric;
                        Ok((q()?, 0.0))
                    } else {
                        Err(e)
                    }
                }
                Err(e) => Err(e),
            }
        };
        let (i1, t1) = fallback(tail_checked(1.0 - rho, rho, series.n1, c), &|| {
            w_i1_quadrature(1.0 - rho, rho, c)
        })?;
        let a3 = 1.0 / eta - rho;
        let b3 = 1.0 + 1.0 / eta;
        let (i3, t3) = fallback(tail_checked(a3, b3, series.n3, c), &|| w_i1_quadrature(a3, b3, c))?;
        let i2_series = if w_i2_remainder(eta, series.n2, c) > W_I2_REMAINDER_TOL {
            Err(Error::no_convergence(
                "w_i2",
                series.n2,
                format!(
                    "C(1+1/η)² = {:.3e} outside the validity region",
                    c * (1.0 + 1.0 / eta).powi(2)
                ),
            ))
        } else {
            w_i2(eta, rho, series.n2, c).map(|v| (v, 0.0))
        };
        let (i2, _) = fallback(i2_series, &|| w_i2_quadrature(eta, rho, c))?;
        let pre = eta / (eta - 1.0) * (c * rho * rho - 1.0 / (l1ps * eta)).exp();
        // Near η = 1 the prefactor multiplies the truncation error of I1 and I3.
        let amplified = pre.abs() * (t1 + t3 / eta);
        if amplified > W2_AMPLIFIED_TOL {
            if !series.quadrature_fallback {
                return Err(Error::no_convergence(
                    "w2",
                    series.n1.max(series.n3),
                    format!("truncation error {amplified:.3e} after the η/(η-1) prefactor at η = {eta}"),
                ));
            }
            validity = Validity::Numeric;
            w2_quadrature(c, eta, l1ps)?
        } else {
            pre * (i1 - i3 / eta - i2 / eta)
        }
    };
    let value = (w1(c, eta)? + w2 - w3) / LN_2;
    Ok(AsymptoticValue::unbounded(value, validity))
}

/// Sum rate by quadrature of `(1/ln 2) ∫ (1 - F(x))/(1 + x) dx` over the mode's
/// high-SNR CDF. Keeps every term the closed form drops.
pub fn sumrate_numeric(mode: SumRateMode, params: &SystemParams) -> Result<f64> {
    let ccdf = |x: f64| -> Result<f64> {
        Ok(match mode {
            SumRateMode::Xd => 1.0 - cdf::cdf_xd(x, params)?.raw,
            SumRateMode::Fd => cdf::ccdf_fd(x, params)?.raw,
            SumRateMode::Hd => cdf::ccdf_hd_equiv(x, params)?,
            _ => {
                return Err(Error::precondition(
                    "sumrate_numeric",
                    "only XD, FD and HD have a distribution to integrate",
                ))
            }
        })
    };
    let v = integrate_fallible(|f| quad::exp_sinh(f, 0.0, 1e-10), |x| Ok(ccdf(x)? / (1.0 + x)))?;
    Ok(v / LN_2)
}

#[cfg(test)]
mod test {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn preconditions() {
        assert!(matches!(w_i1(1.2, 0.5, 3, 0.2), Err(Error::Precondition { .. })));
        assert!(matches!(w_i1(0.0, 0.5, 3, 0.2), Err(Error::Precondition { .. })));
        assert!(matches!(w_i2(0.2, 0.9, 6, 0.01), Err(Error::Precondition { .. })));
        assert!(matches!(w_i2(0.2, 3.6, 6, 0.01), Err(Error::Precondition { .. })));
    }

    #[test]
    fn w1_limit_is_continuous() {
        let c = 0.02;
        let at = w1(c, 1.0).unwrap();
        let near = w1(c, 1.0 + 1e-4).unwrap();
        assert_relative_eq!(at, near, max_relative = 1e-4);
    }

    #[test]
    fn bound_at_unit_eta() {
        let p = SystemParams::equal_power(100.0, 1.0).unwrap();
        let v = sumrate(SumRateMode::FdBound, &p, &SeriesConfig::default()).unwrap();
        assert_relative_eq!(v.value, 1.0 / LN_2, max_relative = 1e-15);
    }
}
