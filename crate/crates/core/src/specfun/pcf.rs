use super::{gamma, QUAD_TOL};
use crate::{quad, Error, Result};

/// Parabolic cylinder function `D_p(z)` for negative order `p`.
pub fn parabolic_cylinder_d(p: f64, z: f64) -> Result<f64> {
    Ok(parabolic_cylinder_d_scaled(p, z)? * (-0.25 * z * z).exp())
}

/// `e^{z²/4} D_p(z) = (1/Γ(-p)) ∫_0^∞ t^{-p-1} e^{-t²/2 - z t} dt`, `p < 0`.
pub fn parabolic_cylinder_d_scaled(p: f64, z: f64) -> Result<f64> {
    if !(p < 0.0) {
        return Err(Error::UnsupportedOrder {
            op: "parabolic_cylinder_d",
            order: p,
        });
    }
    if !z.is_finite() {
        return Err(Error::Domain {
            op: "parabolic_cylinder_d",
            arg: z,
            detail: "z must be finite",
        });
    }
    let s = -p - 1.0;
    let integral = quad::exp_sinh(|t| (s * t.ln() - 0.5 * t * t - z * t).exp(), 0.0, QUAD_TOL)?;
    Ok(integral / gamma(-p)?)
}
