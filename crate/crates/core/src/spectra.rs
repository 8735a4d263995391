//! Meter-state spectra and their momentum-space discretization.
//!
//! A profile is specified in wavelength (center `λ₀`, width `σ_λ`) and
//! mapped to momentum to first order: `p₀ = 2π/λ₀`,
//! `σ_p = 2π σ_λ / λ₀²`. The momentum density is then a symmetric shape of
//! standard deviation `σ_p` around `p₀`.

use alloc::vec::Vec;

use crate::math::{abs, ceil, exp, gamma, ln, pow, sqrt, TAU};
use crate::polarization::MwiSettings;
use crate::quadrature::{simpson_weights, weighted_sum};
use crate::{Error, Result};

/// Spectral shape family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Gaussian,
    /// `exp(-½|x/w|^order)`; `order` even and ≥ 2.
    SuperGaussian {
        order: u32,
    },
    /// Flat on a finite support.
    Rectangular,
    /// Zero width. Never discretized.
    Monochromatic,
}

/// How the nominal `width` of a profile is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthConvention {
    /// Standard deviation for bell shapes, full width for rectangular.
    #[default]
    EqualVariance,
    /// Full width at half maximum.
    Fwhm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProfile {
    shape: Shape,
    center_wavelength: f64,
    width: f64,
    convention: WidthConvention,
}

impl SpectralProfile {
    pub fn new(shape: Shape, center_wavelength: f64, width: f64) -> Result<Self> {
        if !(center_wavelength.is_finite() && center_wavelength > 0.0) {
            return Err(Error::Domain {
                what: "center wavelength",
                value: center_wavelength,
            });
        }
        match shape {
            Shape::Monochromatic => {
                return Ok(Self {
                    shape,
                    center_wavelength,
                    width: 0.0,
                    convention: WidthConvention::EqualVariance,
                })
            }
            Shape::SuperGaussian { order } if order < 2 || order % 2 != 0 => {
                return Err(Error::Domain {
                    what: "supergaussian order",
                    value: order as f64,
                })
            }
            _ => {}
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Domain {
                what: "spectral width",
                value: width,
            });
        }
        Ok(Self {
            shape,
            center_wavelength,
            width,
            convention: WidthConvention::EqualVariance,
        })
    }

    pub fn gaussian(center_wavelength: f64, sigma: f64) -> Result<Self> {
        Self::new(Shape::Gaussian, center_wavelength, sigma)
    }

    pub fn supergaussian(center_wavelength: f64, width: f64, order: u32) -> Result<Self> {
        Self::new(Shape::SuperGaussian { order }, center_wavelength, width)
    }

    pub fn rectangular(center_wavelength: f64, full_width: f64) -> Result<Self> {
        Self::new(Shape::Rectangular, center_wavelength, full_width)
    }

    pub fn monochromatic(center_wavelength: f64) -> Result<Self> {
        Self::new(Shape::Monochromatic, center_wavelength, 0.0)
    }

    pub fn with_convention(mut self, convention: WidthConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn center_wavelength(&self) -> f64 {
        self.center_wavelength
    }

    /// Nominal width as supplied, in meters.
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn convention(&self) -> WidthConvention {
        self.convention
    }

    pub fn is_monochromatic(&self) -> bool {
        self.shape == Shape::Monochromatic
    }

    /// `p₀ = 2π/λ₀`.
    pub fn center_momentum(&self) -> f64 {
        TAU / self.center_wavelength
    }

    /// Standard deviation in wavelength implied by the width and convention.
    pub fn sigma_lambda(&self) -> f64 {
        let w = self.width;
        match (self.shape, self.convention) {
            (Shape::Monochromatic, _) => 0.0,
            (Shape::Gaussian, WidthConvention::EqualVariance) => w,
            (Shape::Gaussian, WidthConvention::Fwhm) => w / (2.0 * sqrt(2.0 * ln(2.0))),
            (Shape::SuperGaussian { .. }, WidthConvention::EqualVariance) => w,
            (Shape::SuperGaussian { order }, WidthConvention::Fwhm) => {
                let m = order as f64;
                // FWHM = 2 w (2 ln 2)^{1/m}
                let scale = 0.5 * w / pow(2.0 * ln(2.0), 1.0 / m);
                scale * supergaussian_std_per_scale(order)
            }
            (Shape::Rectangular, _) => w / sqrt(12.0),
        }
    }

    /// Unnormalized momentum density at `p`, peak value 1.
    pub fn shape_at(&self, p: f64) -> f64 {
        let sigma_p = effective_sigma_p(self);
        let x = p - self.center_momentum();
        match self.shape {
            Shape::Monochromatic => {
                if x == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Gaussian => {
                let t = x / sigma_p;
                exp(-0.5 * t * t)
            }
            Shape::SuperGaussian { order } => {
                let scale = sigma_p / supergaussian_std_per_scale(order);
                exp(-0.5 * int_pow(abs(x / scale), order))
            }
            Shape::Rectangular => {
                if abs(x) <= 0.5 * sqrt(12.0) * sigma_p * (1.0 + 1e-12) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Finite support in momentum, for shapes that have one.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.shape {
            Shape::Rectangular => {
                let half = 0.5 * sqrt(12.0) * effective_sigma_p(self);
                let p0 = self.center_momentum();
                Some((p0 - half, p0 + half))
            }
            _ => None,
        }
    }
}

/// Standard deviation of `exp(-½|x|^m)` in units of its scale `w`:
/// `2^{1/m} √(Γ(3/m)/Γ(1/m))`. Equals 1 for `m = 2`.
fn supergaussian_std_per_scale(order: u32) -> f64 {
    let m = order as f64;
    pow(2.0, 1.0 / m) * sqrt(gamma(3.0 / m) / gamma(1.0 / m))
}

fn int_pow(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    WavelengthToMomentum,
    MomentumToWavelength,
}

/// `p = 2π/λ` or `λ = 2π/p`.
pub fn lambda_p_convert(x: f64, direction: Conversion) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        let what = match direction {
            Conversion::WavelengthToMomentum => "wavelength",
            Conversion::MomentumToWavelength => "momentum",
        };
        return Err(Error::Domain { what, value: x });
    }
    Ok(TAU / x)
}

/// `σ_p = 2π σ_λ / λ₀²`, zero for monochromatic sources.
pub fn effective_sigma_p(profile: &SpectralProfile) -> f64 {
    let l0 = profile.center_wavelength;
    TAU * profile.sigma_lambda() / (l0 * l0)
}

/// Grid sizing rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Half-span in units of `σ_p` for shapes without finite support.
    pub span_widths: f64,
    /// Lower bound on the interval count; rounded up to a power of two.
    pub min_intervals: usize,
    /// Samples per modulation period `2π/|Nk + γ|`.
    pub samples_per_period: usize,
    /// Hard cap on the interval count.
    pub max_intervals: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            span_widths: 8.0,
            min_intervals: 1 << 12,
            samples_per_period: 32,
            max_intervals: 1 << 22,
        }
    }
}

impl GridSpec {
    /// Same rules with twice the minimum interval count.
    pub fn refined(&self) -> Self {
        Self {
            min_intervals: self.min_intervals * 2,
            ..*self
        }
    }
}

/// Uniform momentum nodes with Simpson weights and a density sampled on them.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    /// Momenta, rad/m, strictly increasing.
    pub points: Vec<f64>,
    /// `points - center`, computed directly so moments avoid cancellation.
    pub offsets: Vec<f64>,
    pub weights: Vec<f64>,
    pub density: Vec<f64>,
    pub center: f64,
    pub step: f64,
}

impl MomentumGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn intervals(&self) -> usize {
        self.points.len() - 1
    }

    pub fn integral(&self) -> f64 {
        weighted_sum(&self.weights, &self.density)
    }

    /// `∫ (p - center) f(p) dp`.
    pub fn first_moment(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.offsets)
            .zip(&self.density)
            .fold(0.0, |acc, ((w, x), d)| acc + w * x * d)
    }

    /// Density-weighted mean minus `center`.
    pub fn mean_offset(&self) -> f64 {
        self.first_moment() / self.integral()
    }

    pub fn mean(&self) -> f64 {
        self.center + self.mean_offset()
    }

    pub fn variance(&self) -> f64 {
        let norm = self.integral();
        let mu = self.mean_offset();
        let second = self
            .weights
            .iter()
            .zip(&self.offsets)
            .zip(&self.density)
            .fold(0.0, |acc, ((w, x), d)| acc + w * (x - mu) * (x - mu) * d);
        second / norm
    }

    /// Same nodes, different sampled values.
    pub fn with_density(&self, density: Vec<f64>) -> Self {
        assert_eq!(density.len(), self.points.len());
        Self {
            density,
            ..self.clone()
        }
    }
}

/// Discretizes `profile` for the phase length of `settings`.
///
/// Bell shapes span `±span_widths·σ_p` (clipped at `p = 0`); rectangular
/// profiles span exactly their support. The step resolves `2π/|Nk + γ|`
/// with at least `samples_per_period` samples. The density is normalized to
/// unit Simpson integral.
pub fn build_grid(
    profile: &SpectralProfile,
    settings: &MwiSettings,
    spec: &GridSpec,
) -> Result<MomentumGrid> {
    if profile.is_monochromatic() {
        return Err(Error::MonochromaticGrid);
    }
    let p0 = profile.center_momentum();
    let sigma_p = effective_sigma_p(profile);
    let (lo_off, hi_off) = match profile.support() {
        Some((lo, hi)) => (lo - p0, hi - p0),
        None => {
            let half = spec.span_widths * sigma_p;
            ((-half).max(-p0), half)
        }
    };
    let span = hi_off - lo_off;
    let phase_len = abs(settings.phase_length());
    let by_period = ceil(span * phase_len * spec.samples_per_period as f64 / TAU);
    let needed = if by_period.is_finite() {
        (by_period as usize).max(spec.min_intervals).max(4)
    } else {
        usize::MAX
    };
    let intervals = needed.checked_next_power_of_two().unwrap_or(usize::MAX);
    if intervals > spec.max_intervals {
        return Err(Error::NotConverged { intervals });
    }

    let step = span / intervals as f64;
    let symmetric = lo_off == -hi_off;
    let half = (intervals / 2) as f64;
    let offsets: Vec<f64> = (0..=intervals)
        .map(|i| {
            if symmetric {
                (i as f64 - half) * step
            } else {
                lo_off + i as f64 * step
            }
        })
        .collect();
    let points: Vec<f64> = offsets.iter().map(|x| p0 + x).collect();
    let weights = simpson_weights(intervals, step);
    let raw: Vec<f64> = points.iter().map(|&p| profile.shape_at(p)).collect();
    let norm = weighted_sum(&weights, &raw);
    let density = raw.into_iter().map(|d| d / norm).collect();
    Ok(MomentumGrid {
        points,
        offsets,
        weights,
        density,
        center: p0,
        step,
    })
}
