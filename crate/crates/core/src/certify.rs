//! Self-check of the special functions and sum-rate series against
//! adaptive quadrature of their defining integrals.

use crate::analytic::sumrate::{w_i1, w_i1_quadrature, w_i2, w_i2_quadrature};
use crate::oracle::{integrate, integrate_to_infinity};
use crate::specfun::*;
use crate::Result;
use std::f64::consts::PI;

/// Tolerance requested from the oracle integrator.
pub const ORACLE_TOL: f64 = 1e-12;

/// Arguments swept for each special function.
pub const SPECFUN_GRID: [f64; 12] = [1e-6, 1e-3, 0.05, 0.5, 1.0, 1.9, 2.1, 4.0, 7.5, 15.0, 30.0, 50.0];

/// Orders of `D_p` used by the error-rate expressions.
pub const PCF_ORDERS: [f64; 3] = [-0.5, -1.5, -3.5];

/// Fixture for the tail series `∫_b^∞ e^{-Cx²}/(x+a) dx`: `(a, b, C, n)`.
pub const W_I1_FIXTURE: (f64, f64, f64, usize) = (0.5, 1.2, 0.2, 12);

/// Fixture for the finite-range series: `(η, ρ, C, n)`.
pub const W_I2_FIXTURE: (f64, f64, f64, usize) = (0.2, 1.5, 0.01, 6);

#[derive(Debug, Clone)]
pub struct CheckRow {
    pub function: String,
    pub args: String,
    pub value: f64,
    pub oracle: f64,
}

impl CheckRow {
    pub fn rel_err(&self) -> f64 {
        if self.value == self.oracle {
            0.0
        } else {
            ((self.value - self.oracle) / self.oracle).abs()
        }
    }
}

fn row(function: &str, args: String, value: f64, oracle: f64) -> CheckRow {
    CheckRow {
        function: function.to_string(),
        args,
        value,
        oracle,
    }
}

// 2 sinh²(t/2) = cosh t - 1 without cancellation.
fn cosh_m1(t: f64) -> f64 {
    let s = (0.5 * t).sinh();
    2.0 * s * s
}

/// Every special function on [`SPECFUN_GRID`] against its oracle.
pub fn specfun_rows() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let tol = ORACLE_TOL;
    for &x in &SPECFUN_GRID {
        // Beyond `t_max` the integrands are below e^{-800}.
        let t_max = (1.0 + 800.0 / x).acosh();
        let k0 = integrate(|t| (-x * cosh_m1(t)).exp(), 0.0, t_max, tol)?;
        let k1 = integrate(|t| (-x * cosh_m1(t)).exp() * t.cosh(), 0.0, t_max, tol)?;
        rows.push(row("bessel_k_scaled", format!("0, {x}"), bessel_k(0, x, true)?, k0));
        rows.push(row("bessel_k_scaled", format!("1, {x}"), bessel_k(1, x, true)?, k1));
        if x <= 30.0 {
            rows.push(row(
                "bessel_k",
                format!("1, {x}"),
                bessel_k(1, x, false)?,
                k1 * (-x).exp(),
            ));
        }

        let e1s = integrate_to_infinity(|u| (-u).exp() / (x + u), 0.0, tol)?;
        rows.push(row(
            "exp_integral_e1_scaled",
            format!("{x}"),
            exp_integral_e1_scaled(x)?,
            e1s,
        ));
        rows.push(row(
            "exp_integral_e1",
            format!("{x}"),
            exp_integral_e1(x)?,
            e1s * (-x).exp(),
        ));

        for &a in &[-0.5, 0.5, 1.5, 3.5] {
            let us = integrate_to_infinity(|u| (x + u).powf(a - 1.0) * (-u).exp(), 0.0, tol)?;
            rows.push(row(
                "gamma_upper_scaled",
                format!("{a}, {x}"),
                gamma_upper_scaled(a, x)?,
                us,
            ));
            if a > 0.0 {
                // t = x s^{1/a} removes the endpoint singularity.
                let lower = x.powf(a) / a * integrate(|s| (-x * s.powf(1.0 / a)).exp(), 0.0, 1.0, tol)?;
                rows.push(row("gamma_lower", format!("{a}, {x}"), gamma_lower(a, x)?, lower));
            }
        }

        let erf = 2.0 / PI.sqrt() * integrate(|t| (-t * t).exp(), 0.0, x, tol)?;
        rows.push(row(
            "probability_integral",
            format!("{x}"),
            probability_integral(x),
            erf,
        ));
        let erfcx_o = 2.0 / PI.sqrt() * integrate_to_infinity(|u| (-u * u - 2.0 * x * u).exp(), 0.0, tol)?;
        rows.push(row("erfcx", format!("{x}"), erfcx(x), erfcx_o));

        for &p in &PCF_ORDERS {
            // t = s² turns t^{-p-1} dt into 2 s^{-2p-1} ds.
            let q = integrate_to_infinity(
                |s| 2.0 * s.powf(-2.0 * p - 1.0) * (-0.5 * s.powi(4) - x * s * s).exp(),
                0.0,
                tol,
            )? / gamma(-p)?;
            rows.push(row(
                "parabolic_cylinder_d_scaled",
                format!("{p}, {x}"),
                parabolic_cylinder_d_scaled(p, x)?,
                q,
            ));
        }

        // W_{-3/2,0} enters the sum rate; W_{1/4-k/2,3/4-k/2} the tail series.
        for &(lambda, mu) in &[(-1.5, 0.0), (-0.25, 0.25), (-0.75, -0.25), (-1.25, -0.75)] {
            let a: f64 = mu - lambda + 0.5;
            let b = 1.0 + 2.0 * mu;
            let u = integrate_to_infinity(
                |t| (-x * t + (a - 1.0) * t.ln() + (b - a - 1.0) * t.ln_1p()).exp(),
                0.0,
                tol,
            )? / gamma(a)?;
            rows.push(row(
                "whittaker_w_scaled",
                format!("{lambda}, {mu}, {x}"),
                whittaker_w_scaled(lambda, mu, x)?,
                x.powf(mu + 0.5) * u,
            ));
        }
    }
    Ok(rows)
}

/// The two sum-rate series at their fixture points against quadrature.
pub fn series_rows() -> Result<Vec<CheckRow>> {
    let (a, b, c, n) = W_I1_FIXTURE;
    let (eta, rho, c2, n2) = W_I2_FIXTURE;
    Ok(vec![
        row(
            "w_i1",
            format!("a={a}, b={b}, C={c}, n={n}"),
            w_i1(a, b, n, c)?,
            w_i1_quadrature(a, b, c)?,
        ),
        row(
            "w_i2",
            format!("eta={eta}, rho={rho}, C={c2}, n={n2}"),
            w_i2(eta, rho, n2, c2)?,
            w_i2_quadrature(eta, rho, c2)?,
        ),
    ])
}
