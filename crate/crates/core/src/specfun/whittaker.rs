use super::{gamma, QUAD_TOL};
use crate::{quad, Error, Result};

/// Confluent hypergeometric function of the second kind `U(a, b, z)`.
///
/// Evaluated from `(1/Γ(a)) ∫_0^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`, with
/// Kummer's transformation `U(a,b,z) = z^{1-b} U(a-b+1, 2-b, z)` when
/// only the transformed first parameter is positive.
pub fn hypergeometric_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || z.is_infinite() {
        return Err(Error::Domain {
            op: "hypergeometric_u",
            arg: z,
            detail: "z must be positive and finite",
        });
    }
    if a > 0.0 {
        return u_integral(a, b, z);
    }
    if a == a.round() {
        return Err(Error::Pole {
            op: "hypergeometric_u",
            arg: a,
        });
    }
    let a2 = a - b + 1.0;
    if a2 > 0.0 {
        return Ok(z.powf(1.0 - b) * u_integral(a2, 2.0 - b, z)?);
    }
    Err(Error::UnsupportedOrder {
        op: "hypergeometric_u",
        order: a,
    })
}

fn u_integral(a: f64, b: f64, z: f64) -> Result<f64> {
    let c = b - a - 1.0;
    let integral = quad::exp_sinh(|t| (-z * t + (a - 1.0) * t.ln() + c * t.ln_1p()).exp(), 0.0, QUAD_TOL)?;
    Ok(integral / gamma(a)?)
}

/// Whittaker function `W_{λ,μ}(z)`.
pub fn whittaker_w(lambda: f64, mu: f64, z: f64) -> Result<f64> {
    Ok(whittaker_w_scaled(lambda, mu, z)? * (-0.5 * z).exp())
}

/// `e^{z/2} W_{λ,μ}(z) = z^{μ+1/2} U(μ-λ+1/2, 1+2μ, z)`.
pub fn whittaker_w_scaled(lambda: f64, mu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            op: "whittaker_w",
            arg: z,
            detail: "z must be positive",
        });
    }
    let a = mu - lambda + 0.5;
    if a <= 0.0 && a == a.round() {
        return Err(Error::Pole {
            op: "whittaker_w",
            arg: a,
        });
    }
    Ok(z.powf(mu + 0.5) * hypergeometric_u(a, 1.0 + 2.0 * mu, z)?)
}
