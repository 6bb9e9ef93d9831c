//! Performance models for an X-duplex amplify-and-forward relay.
//!
//! The crate is split into four layers:
//!
//! * [`specfun`]: real special functions (Bessel K, exponential integral,
//!   incomplete gamma, parabolic cylinder, Whittaker W).
//! * [`channel`]: per-sample SINR physics for full-duplex, half-duplex,
//!   X-duplex and power-allocated variants.
//! * [`analytic`]: closed-form and asymptotic performance expressions.
//! * [`mcsim`]: a reproducible Monte-Carlo estimator that serves as the
//!   reference for the closed forms.
//!
//! [`quad`] and [`oracle`] hold the numerical integrators used both by the
//! library and by its self-checks.

pub mod analytic;
pub mod certify;
pub mod channel;
mod error;
pub mod mcsim;
pub mod oracle;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};

/// Converts a power in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power to dB.
pub fn linear_to_db(p: f64) -> f64 {
    10.0 * p.log10()
}
