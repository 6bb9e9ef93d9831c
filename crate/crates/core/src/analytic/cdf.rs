//! Distribution of the end-to-end SINRs.

use super::{check_threshold, AsymptoticValue, Validity};
use crate::channel::SystemParams;
use crate::specfun::bessel_k01_scaled;
use crate::Result;

/// Relative bias applied to every `K1` evaluation.
///
/// Zero in normal use; a non-zero value lets validation runs confirm that
/// the CDF acceptance check is sensitive to kernel errors.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KernelBias {
    pub k1_rel: f64,
}

/// `(β K1(β) e^{-e}, K0(β) e^{-e})`, assembled in scaled form.
fn bessel_pair(beta: f64, e: f64, bias: &KernelBias) -> Result<(f64, f64)> {
    if beta == 0.0 {
        // β K1(β) → 1; the K0 partner always carries a vanishing prefactor here.
        return Ok(((-e).exp(), 0.0));
    }
    let (k0, k1) = bessel_k01_scaled(beta)?;
    let damp = (-(beta + e)).exp();
    Ok((beta * k1 * (1.0 + bias.k1_rel) * damp, k0 * damp))
}

/// Shared subterms of the three probabilities at threshold `x`.
struct Parts {
    fd: f64,
    hd: f64,
    joint: f64,
    eq23: f64,
}

fn parts(x: f64, p: &SystemParams, bias: &KernelBias) -> Result<Parts> {
    if x == 0.0 {
        return Ok(Parts {
            fd: 1.0,
            hd: 1.0,
            joint: 1.0,
            eq23: 0.0,
        });
    }
    let eta = p.eta();
    let c = p.c();
    let q = p.q();
    let y = x * x + 2.0 * x;
    let beta1 = 2.0 * ((x + x * x) / q).sqrt();
    let beta2 = 2.0 * ((y * y + y) / q).sqrt();
    let beta3 = 2.0 * ((y * y + y + (x + 1.0) * y / eta) / q).sqrt();
    let beta4 = c * y + (x + 1.0) / (eta * p.lambda1 * p.ps);

    let (k1b1, k0b1) = bessel_pair(beta1, c * x, bias)?;
    let (k1b2, _) = bessel_pair(beta2, c * y, bias)?;
    let (k1b3, k0b3) = bessel_pair(beta3, beta4, bias)?;

    let g = 1.0 + eta * x;
    let k0_pref = 2.0 * eta * (x * x + x) / (p.lambda2 * p.pr * g * g);

    let fd = k1b1 / g - k0_pref * k0b1;
    let hd = k1b2;
    let i1 = k1b3 / g - k0_pref * k0b3;
    let i2 = hd - k1b3;
    let eq23 = 1.0 - (k1b1 + eta * x * k1b3) / g + k0_pref * (k0b1 - k0b3);
    Ok(Parts {
        fd,
        hd,
        joint: i1 + i2,
        eq23,
    })
}

/// High-SNR complementary CDF of the full-duplex SINR, `Pr(γF > x)`.
pub fn ccdf_fd(x: f64, params: &SystemParams) -> Result<AsymptoticValue> {
    check_threshold("ccdf_fd", x)?;
    let v = parts(x, params, &KernelBias::default())?;
    Ok(AsymptoticValue::probability(v.fd, Validity::AsymptoticHighSnr))
}

/// Complementary CDF of the rate-equivalent half-duplex SINR. Exact.
pub fn ccdf_hd_equiv(x: f64, params: &SystemParams) -> Result<f64> {
    check_threshold("ccdf_hd_equiv", x)?;
    Ok(parts(x, params, &KernelBias::default())?.hd)
}

/// High-SNR joint probability `Pr(γF > x, γH > x² + 2x)`.
pub fn joint_ccdf(x: f64, params: &SystemParams) -> Result<AsymptoticValue> {
    check_threshold("joint_ccdf", x)?;
    let v = parts(x, params, &KernelBias::default())?;
    Ok(AsymptoticValue::probability(v.joint, Validity::AsymptoticHighSnr))
}

/// High-SNR CDF of the X-duplex SINR `γmax = max(γF, √(γH+1) - 1)`.
pub fn cdf_xd(x: f64, params: &SystemParams) -> Result<AsymptoticValue> {
    cdf_xd_with(x, params, &KernelBias::default())
}

/// [`cdf_xd`] with a kernel bias (see [`KernelBias`]).
pub fn cdf_xd_with(x: f64, params: &SystemParams, bias: &KernelBias) -> Result<AsymptoticValue> {
    check_threshold("cdf_xd", x)?;
    let v = parts(x, params, bias)?;
    Ok(AsymptoticValue::probability(v.eq23, Validity::AsymptoticHighSnr))
}

/// Inclusion-exclusion form `1 - ccdf_fd - ccdf_hd + joint`, unclamped.
pub fn cdf_xd_inclusion_exclusion(x: f64, params: &SystemParams) -> Result<f64> {
    check_threshold("cdf_xd", x)?;
    let v = parts(x, params, &KernelBias::default())?;
    Ok(1.0 - v.fd - v.hd + v.joint)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn zero_threshold() {
        let p = SystemParams::equal_power(10.0, 0.2).unwrap();
        assert_eq!(ccdf_fd(0.0, &p).unwrap().value, 1.0);
        assert_eq!(ccdf_hd_equiv(0.0, &p).unwrap(), 1.0);
        assert_eq!(joint_ccdf(0.0, &p).unwrap().value, 1.0);
        assert_eq!(cdf_xd(0.0, &p).unwrap().value, 0.0);
        assert!(cdf_xd(-1.0, &p).is_err());
    }

    #[test]
    fn tiny_threshold_is_continuous() {
        let p = SystemParams::equal_power(100.0, 0.2).unwrap();
        let v = ccdf_fd(1e-12, &p).unwrap().raw;
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }
}
