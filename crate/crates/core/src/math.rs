//! Thin wrappers over `libm` so results are identical with or without `std`.

pub use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn log10(x: f64) -> f64 {
    libm::log10(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `cot x`.
#[inline]
pub fn cot(x: f64) -> f64 {
    cos(x) / sin(x)
}

/// `1 - cos x` without cancellation near zero.
#[inline]
pub fn one_minus_cos(x: f64) -> f64 {
    2.0 * half_one_minus_cos(x)
}

/// `(1 - cos x)/2 = sin²(x/2)`, never above 1.
pub fn half_one_minus_cos(x: f64) -> f64 {
    let s = sin(0.5 * x);
    s * s
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}
