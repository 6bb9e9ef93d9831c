//! Adaptive Gauss-Kronrod (7/15) integration.
//!
//! Used as an independent reference for the closed forms and the
//! double-exponential rules in [`crate::quad`]. Intervals are bisected in
//! order of largest error estimate until the global estimate meets the
//! requested relative tolerance.

use crate::{Error, Result};
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 5000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        kron += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * h;
    if !value.is_finite() {
        return Err(Error::no_convergence(
            "gauss_kronrod",
            0,
            format!("non-finite integrand on [{a}, {b}]"),
        ));
    }
    let roundoff = 50.0 * f64::EPSILON * abs * h.abs();
    let err = ((kron - gauss) * h).abs().max(roundoff);
    Ok(Segment { a, b, value, err })
}

/// Integrates `f` over the finite interval `[a, b]` to relative tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_abs(f, a, b, tol, f64::MIN_POSITIVE)
}

/// As [`integrate`], but also stops once the error estimate is below `abs_tol`.
pub fn integrate_abs<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let first = gk15(&f, a, b)?;
    let mut total = first.value;
    let mut err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while err > tol * total.abs() && err > abs_tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::no_convergence(
                "gauss_kronrod",
                heap.len(),
                format!("estimated error {err:e} on value {total:e}"),
            ));
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            return Err(Error::no_convergence(
                "gauss_kronrod",
                heap.len(),
                format!("interval collapsed near {mid}"),
            ));
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Integrates `f` over `[a, ∞)` through the map `x = a + t/(1-t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<f64> {
    integrate_to_infinity_abs(f, a, tol, f64::MIN_POSITIVE)
}

fn integrate_to_infinity_abs<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64, abs_tol: f64) -> Result<f64> {
    integrate_abs(
        |t: f64| {
            let s = 1.0 - t;
            let v = f(a + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        tol,
        abs_tol,
    )
}

/// Integrates over consecutive pieces `[p0, p1], [p1, p2], ...`.
///
/// A final `f64::INFINITY` break point integrates the last piece to infinity.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> Result<f64> {
    integrate_pieces_abs(f, points, tol, f64::MIN_POSITIVE)
}

/// As [`integrate_pieces`] with an absolute error floor per piece.
pub fn integrate_pieces_abs<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64, abs_tol: f64) -> Result<f64> {
    let mut sum = 0.0;
    for w in points.windows(2) {
        sum += if w[1].is_infinite() {
            integrate_to_infinity_abs(&f, w[0], tol, abs_tol)?
        } else {
            integrate_abs(&f, w[0], w[1], tol, abs_tol)?
        };
    }
    Ok(sum)
}
