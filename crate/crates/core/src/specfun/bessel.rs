use super::{Accuracy, CF_MAX_ITER, EULER_GAMMA};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Modified Bessel function of the second kind, orders 0 and 1.
///
/// With `scaled` set, returns `e^x K_ν(x)`.
pub fn bessel_k(order: u32, x: f64, scaled: bool) -> Result<f64> {
    if order > 1 {
        return Err(Error::UnsupportedOrder {
            op: "bessel_k",
            order: order as f64,
        });
    }
    let (k0, k1) = bessel_k01_scaled(x)?;
    let v = if order == 0 { k0 } else { k1 };
    Ok(if scaled { v } else { v * (-x).exp() })
}

/// Returns `(e^x K_0(x), e^x K_1(x))`.
pub fn bessel_k01_scaled(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain {
            op: "bessel_k",
            arg: x,
            detail: "x must be positive and finite",
        });
    }
    if x <= 2.0 {
        let (k0, k1) = series(x, &Accuracy::default())?;
        let e = x.exp();
        Ok((k0 * e, k1 * e))
    } else {
        steed(x)
    }
}

// Ascending series, unscaled.
fn series(x: f64, acc: &Accuracy) -> Result<(f64, f64)> {
    let t = 0.25 * x * x;
    let lnh = (0.5 * x).ln();

    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut s0 = 0.0;
    let mut harmonic = 0.0;
    let mut done = false;
    for k in 1..=acc.max_terms {
        let kf = k as f64;
        term *= t / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        s0 += harmonic * term;
        if acc.converged(harmonic * term, s0) && acc.converged(term, i0) {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::no_convergence("bessel_k", acc.max_terms, "K0 series"));
    }
    let k0 = -(lnh + EULER_GAMMA) * i0 + s0;

    // t^k / (k! (k+1)!) with weights psi(k+1) + psi(k+2).
    let mut term = 1.0;
    let mut i1 = 1.0;
    let mut h_k = 0.0;
    let mut h_k1 = 1.0;
    let mut s1 = h_k + h_k1 - 2.0 * EULER_GAMMA;
    let mut done = false;
    for k in 1..=acc.max_terms {
        let kf = k as f64;
        term *= t / (kf * (kf + 1.0));
        h_k = h_k1;
        h_k1 += 1.0 / (kf + 1.0);
        let w = h_k + h_k1 - 2.0 * EULER_GAMMA;
        i1 += term;
        s1 += w * term;
        if acc.converged(w * term, s1) && acc.converged(term, i1) {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::no_convergence("bessel_k", acc.max_terms, "K1 series"));
    }
    let k1 = 1.0 / x + lnh * 0.5 * x * i1 - 0.25 * x * s1;
    Ok((k0, k1))
}

// Steed's continued fraction for order zero, already scaled by e^x.
fn steed(x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut done = false;
    for i in 2..=CF_MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::no_convergence(
            "bessel_k",
            CF_MAX_ITER,
            "Steed continued fraction",
        ));
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    Ok((k0, k1))
}
