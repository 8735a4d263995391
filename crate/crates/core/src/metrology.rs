//! Instrument-side conversions: tilt angle to time difference, shift rates,
//! precisions `δk = δm / |∂S/∂k|`, and SNR.

use crate::math::{abs, log10, sin, sqrt, FRAC_PI_2};
use crate::{Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A tilted half-wave plate introducing the time difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltGeometry {
    theta: f64,
    refractive_index: f64,
    wavelength: f64,
}

impl TiltGeometry {
    pub fn new(theta: f64, refractive_index: f64, wavelength: f64) -> Result<Self> {
        if !(theta.is_finite() && abs(theta) < FRAC_PI_2) {
            return Err(Error::Domain {
                what: "tilt angle",
                value: theta,
            });
        }
        if !(refractive_index.is_finite() && refractive_index > 1.0) {
            return Err(Error::Domain {
                what: "refractive index",
                value: refractive_index,
            });
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::Domain {
                what: "wavelength",
                value: wavelength,
            });
        }
        Ok(Self {
            theta,
            refractive_index,
            wavelength,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn refractive_index(&self) -> f64 {
        self.refractive_index
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
}

/// `τ = (λ/2c)·(1/√(1 - sin²θ/n²) - 1)`, seconds.
pub fn tau_from_tilt(geom: &TiltGeometry) -> f64 {
    let s = sin(geom.theta) / geom.refractive_index;
    let x = s * s;
    let root = sqrt(1.0 - x);
    // 1/√(1-x) - 1 = x / (√(1-x)(1 + √(1-x)))
    let excess = x / (root * (1.0 + root));
    geom.wavelength / (2.0 * SPEED_OF_LIGHT) * excess
}

/// `k = c·τ`.
pub fn k_from_tau(tau: f64) -> f64 {
    SPEED_OF_LIGHT * tau
}

/// Seconds of time difference per meter of interaction strength, inverse of [`k_from_tau`].
pub fn tau_from_k(k: f64) -> f64 {
    k / SPEED_OF_LIGHT
}

/// Spectrometer and photodiode parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstrumentModel {
    /// Wavelength resolution of the spectrometer, m.
    pub spectrometer_resolution: f64,
    /// Photodiode conversion gain, V/W.
    pub apd_gain: f64,
    /// Mean electronic noise, V.
    pub noise_floor: f64,
    /// Intensity uncertainty `δI`, V.
    pub intensity_uncertainty: f64,
}

impl InstrumentModel {
    pub fn new(
        spectrometer_resolution: f64,
        apd_gain: f64,
        noise_floor: f64,
        intensity_uncertainty: f64,
    ) -> Result<Self> {
        for (what, v) in [
            ("spectrometer resolution", spectrometer_resolution),
            ("APD gain", apd_gain),
            ("noise floor", noise_floor),
            ("intensity uncertainty", intensity_uncertainty),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain { what, value: v });
            }
        }
        Ok(Self {
            spectrometer_resolution,
            apd_gain,
            noise_floor,
            intensity_uncertainty,
        })
    }

    /// 0.04 pm spectrometer, 3.14e6 V/W APD, 0.5 mV noise, 0.044 mV `δI`.
    pub fn reference() -> Self {
        Self {
            spectrometer_resolution: 0.04e-12,
            apd_gain: 3.14e6,
            noise_floor: 0.5e-3,
            intensity_uncertainty: 0.044e-3,
        }
    }
}

/// Central-difference derivative with one Richardson step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    /// `(4·D(h/2) - D(h)) / 3`.
    pub rate: f64,
    /// `|D(h/2) - D(h)|`.
    pub error: f64,
}

/// `∂S/∂k` at `k0` for an infallible signal.
pub fn shift_rate<F>(mut signal: F, k0: f64, half_window: f64) -> Result<RateEstimate>
where
    F: FnMut(f64) -> f64,
{
    try_shift_rate(|k| Ok(signal(k)), k0, half_window)
}

/// `∂S/∂k` at `k0` for a signal that may fail (e.g. a quadrature).
pub fn try_shift_rate<F>(mut signal: F, k0: f64, half_window: f64) -> Result<RateEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(half_window.is_finite() && half_window > 0.0) {
        return Err(Error::Domain {
            what: "half window",
            value: half_window,
        });
    }
    let mut eval = |k: f64| -> Result<f64> {
        let v = signal(k)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                what: "shift signal",
            })
        }
    };
    let h = half_window;
    let wide = (eval(k0 + h)? - eval(k0 - h)?) / (2.0 * h);
    let narrow = (eval(k0 + 0.5 * h)? - eval(k0 - 0.5 * h)?) / h;
    Ok(RateEstimate {
        rate: narrow + (narrow - wide) / 3.0,
        error: abs(narrow - wide),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pointer {
    P,
    I,
}

/// Resolution-limited precision of one pointer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionReport {
    /// Signal units per meter of `k`.
    pub shift_rate: f64,
    /// m.
    pub delta_k: f64,
    /// s.
    pub delta_tau: f64,
    pub pointer: Pointer,
}

/// `δk = resolution / |rate|`, `δτ = δk / c`.
///
/// `resolution` and `rate` share signal units (m and m/m for the P pointer
/// read on a spectrometer, V and V/m for the I pointer).
pub fn precision(resolution: f64, rate: f64, pointer: Pointer) -> Result<PrecisionReport> {
    if rate == 0.0 || !rate.is_finite() {
        return Err(Error::ZeroRate);
    }
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::Domain {
            what: "instrument resolution",
            value: resolution,
        });
    }
    let delta_k = resolution / abs(rate);
    Ok(PrecisionReport {
        shift_rate: rate,
        delta_k,
        delta_tau: delta_k / SPEED_OF_LIGHT,
        pointer,
    })
}

/// `10·log₁₀(signal / noise)`.
pub fn snr_db(signal: f64, noise: f64) -> Result<f64> {
    if !(signal.is_finite() && signal > 0.0) {
        return Err(Error::Domain {
            what: "signal",
            value: signal,
        });
    }
    if !(noise.is_finite() && noise > 0.0) {
        return Err(Error::Domain {
            what: "noise",
            value: noise,
        });
    }
    Ok(10.0 * log10(signal / noise))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;
    use proptest::prelude::*;

    const AS: f64 = 1e-18;
    const L0: f64 = 1550e-9;

    fn geom(deg: f64) -> TiltGeometry {
        TiltGeometry::new(deg * PI / 180.0, 1.54, L0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn tilt_examples() {
        assert_eq!(tau_from_tilt(&geom(0.0)), 0.0);
        assert!(rel(tau_from_tilt(&geom(10.0)), 1.659_264_908_464_063e-17) < 1e-12);
        assert!(rel(tau_from_tilt(&geom(30.0)), 1.480_691_682_411_778e-16) < 1e-12);
        assert!(TiltGeometry::new(0.1, 1.0, L0).is_err());
        assert!(TiltGeometry::new(FRAC_PI_2, 1.5, L0).is_err());
    }

    #[test]
    fn k_tau_examples() {
        assert_eq!(k_from_tau(0.0), 0.0);
        assert!(rel(k_from_tau(AS), 2.997_924_58e-10) < 1e-15);
        assert!(rel(k_from_tau(1e-17), 2.997_924_58e-9) < 1e-15);
        assert!(rel(tau_from_k(k_from_tau(3.3e-17)), 3.3e-17) < 1e-15);
    }

    #[test]
    fn linear_signal_rate() {
        for (k0, h) in [(0.0, 1e-3), (5.0, 0.5), (-2e-10, 1e-12)] {
            let r = shift_rate(|k| 5.0 * k, k0, h).unwrap();
            assert!(rel(r.rate, 5.0) < 1e-9);
        }
    }

    #[test]
    fn rate_errors() {
        assert!(shift_rate(|k| k, 0.0, 0.0).is_err());
        assert_eq!(
            shift_rate(|k| 1.0 / (k - 1.0), 1.0 - 0.5, 0.5),
            Err(Error::NonFinite {
                what: "shift signal"
            })
        );
    }

    #[test]
    fn precision_examples() {
        // rates in Δλ per k (m/m): 0.43 nm per attosecond of τ
        let rate = 0.43e-9 / k_from_tau(AS);
        let r = precision(0.04e-12, rate, Pointer::P).unwrap();
        assert!(rel(r.delta_tau / AS, 9.30e-5) < 1e-3);
        let r3 = precision(0.04e-12, 3.0 * rate, Pointer::P).unwrap();
        assert!(rel(r3.delta_tau / AS, 3.34e-5) < 0.15);
        let unit = precision(1.0, 1.0, Pointer::I).unwrap();
        assert_eq!(unit.delta_k, 1.0);
        assert!(rel(unit.delta_k, SPEED_OF_LIGHT * unit.delta_tau) < 1e-12);
        assert_eq!(precision(1.0, 0.0, Pointer::P), Err(Error::ZeroRate));
    }

    #[test]
    fn snr_examples() {
        assert_eq!(snr_db(0.5e-3, 0.5e-3).unwrap(), 0.0);
        assert!((snr_db(5e-3, 0.5e-3).unwrap() - 10.0).abs() < 1e-12);
        let signal = 0.5e-3 * crate::math::pow(10.0, 1.75);
        assert!((snr_db(signal, 0.5e-3).unwrap() - 17.5).abs() < 1e-12);
        assert!(snr_db(0.0, 1.0).is_err());
        assert!(snr_db(1.0, -1.0).is_err());
    }

    #[test]
    fn tilt_small_angle_taylor() {
        for i in 1..=10 {
            let theta = i as f64 * 1e-4;
            let g = TiltGeometry::new(theta, 1.54, L0).unwrap();
            let taylor = L0 / (4.0 * SPEED_OF_LIGHT) * theta * theta / (1.54 * 1.54);
            assert!(rel(tau_from_tilt(&g), taylor) < 1e-3);
        }
    }

    proptest! {
        #[test]
        fn tilt_even_and_increasing(a in 1e-6f64..1.5, b in 1e-6f64..1.5) {
            let g = |t| TiltGeometry::new(t, 1.54, L0).unwrap();
            prop_assert_eq!(tau_from_tilt(&g(a)), tau_from_tilt(&g(-a)));
            prop_assert!(tau_from_tilt(&g(a)) > 0.0);
            if a < b {
                prop_assert!(tau_from_tilt(&g(a)) < tau_from_tilt(&g(b)));
            }
        }

        #[test]
        fn quadratic_rate_is_exact(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0,
                                   k0 in -10.0f64..10.0, h in 0.01f64..1.0) {
            let r = shift_rate(|k| a * k * k + b * k + c, k0, h).unwrap();
            let exact = 2.0 * a * k0 + b;
            let scale = exact.abs().max((a * k0).abs() + b.abs() + 1.0);
            prop_assert!((r.rate - exact).abs() <= 1e-9 * scale);
        }
    }
}
