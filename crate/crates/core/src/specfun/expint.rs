use super::{Accuracy, CF_MAX_ITER, EULER_GAMMA, FPMIN};
use crate::{Error, Result};

/// Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    exp_integral_e1_with(x, &Accuracy::default())
}

/// [`exp_integral_e1`] with an explicit series stopping rule.
pub fn exp_integral_e1_with(x: f64, acc: &Accuracy) -> Result<f64> {
    check(x)?;
    if x <= 1.0 {
        series(x, acc)
    } else {
        Ok(continued_fraction(x)? * (-x).exp())
    }
}

/// `e^x E1(x)`, finite for every positive `x`.
pub fn exp_integral_e1_scaled(x: f64) -> Result<f64> {
    check(x)?;
    if x <= 1.0 {
        Ok(series(x, &Accuracy::default())? * x.exp())
    } else {
        continued_fraction(x)
    }
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            op: "exp_integral_e1",
            arg: x,
            detail: "x must be positive",
        })
    }
}

fn series(x: f64, acc: &Accuracy) -> Result<f64> {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 1..=acc.max_terms {
        let kf = k as f64;
        fact *= -x / kf;
        let term = fact / kf;
        sum += term;
        if acc.converged(term, sum) {
            return Ok(-EULER_GAMMA - x.ln() - sum);
        }
    }
    Err(Error::no_convergence(
        "exp_integral_e1",
        acc.max_terms,
        format!("series at x = {x}"),
    ))
}

// Lentz evaluation of the continued fraction for e^x E1(x).
fn continued_fraction(x: f64) -> Result<f64> {
    let mut b = x + 1.0;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=CF_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::no_convergence(
        "exp_integral_e1",
        CF_MAX_ITER,
        format!("continued fraction at x = {x}"),
    ))
}
