use std::f64::consts::PI;

/// Error function `Φ(x) = (2/√π) ∫_0^x e^{-t²} dt`.
pub fn probability_integral(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Gaussian tail probability `Q(x)`.
pub fn gaussian_q(x: f64) -> f64 {
    if x >= 0.0 {
        0.5 * erfc(x / std::f64::consts::SQRT_2)
    } else {
        1.0 - gaussian_q(-x)
    }
}

/// Scaled complementary error function `e^{x²} erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 5.0 {
        return (x * x).exp() * erfc(x);
    }
    // Laplace continued fraction, evaluated bottom-up.
    let mut f = x;
    for k in (1..=60).rev() {
        f = x + 0.5 * k as f64 / f;
    }
    1.0 / (PI.sqrt() * f)
}
