//! Real special functions.
//!
//! Every function has a scaled variant that strips the dominant exponential
//! so that products like `e^{z} Γ(1/2, z)` can be formed without overflow.

mod bessel;
mod erf;
mod expint;
mod gamma;
mod pcf;
mod whittaker;

pub use bessel::{bessel_k, bessel_k01_scaled};
pub use erf::{erfc, erfcx, gaussian_q, probability_integral};
pub use expint::{exp_integral_e1, exp_integral_e1_scaled, exp_integral_e1_with};
pub use gamma::{gamma, gamma_family, gamma_lower, gamma_upper, gamma_upper_scaled, gamma_with, ln_gamma, GammaKind};
pub use pcf::{parabolic_cylinder_d, parabolic_cylinder_d_scaled};
pub use whittaker::{hypergeometric_u, whittaker_w, whittaker_w_scaled};

use crate::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Relative tolerance used by the quadrature-backed functions.
pub(crate) const QUAD_TOL: f64 = 1e-13;

/// Stopping rule for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            rel_tol: f64::EPSILON,
            abs_tol: 0.0,
            max_terms: 64,
        }
    }
}

impl Accuracy {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::precondition("Accuracy::new", "rel_tol must be positive"));
        }
        if !(abs_tol >= 0.0) {
            return Err(Error::precondition("Accuracy::new", "abs_tol must be non-negative"));
        }
        if max_terms == 0 {
            return Err(Error::precondition("Accuracy::new", "max_terms must be at least 1"));
        }
        Ok(Accuracy {
            rel_tol,
            abs_tol,
            max_terms,
        })
    }

    pub(crate) fn converged(&self, term: f64, sum: f64) -> bool {
        term.abs() <= self.rel_tol * sum.abs() + self.abs_tol
    }
}

// Shared cap for continued fractions, which are not governed by `max_terms`.
pub(crate) const CF_MAX_ITER: usize = 10_000;
pub(crate) const FPMIN: f64 = 1e-300;
