//! Unit constants, source construction from config, and the pointer
//! computations shared by several scenarios.

use std::f64::consts::PI;

use wva_core::{
    collapsed_density, k_from_tau, try_shift_rate, MwiSettings, Pointer, RateEstimate,
    SpectralProfile, WidthConvention,
};

use crate::config::{Config, Param};
use crate::error::{LabError, Result};

pub const NM: f64 = 1e-9;
pub const PM: f64 = 1e-12;
pub const FM: f64 = 1e-15;
pub const AS: f64 = 1e-18;
pub const MV: f64 = 1e-3;

pub const LAMBDA0: Param = Param::new("lambda0_nm", "1550", "center wavelength, nm");
pub const RHO: Param = Param::new("rho", "0.002", "postselection angle, rad");
pub const GAMMA_PI: Param = Param::new(
    "gamma_pi",
    "1.9",
    "initial phase length as gamma*p0/pi (residual path imbalance)",
);
pub const SHAPE: Param = Param::new(
    "shape",
    "supergaussian",
    "broadband shape: gaussian | supergaussian | rectangular",
);
pub const ORDER: Param = Param::new("order", "6", "supergaussian order (even, >= 2)");
pub const CONVENTION: Param = Param::new(
    "width_convention",
    "equal_variance",
    "how widths are read: equal_variance (sigma) | fwhm",
);
pub const RESOLUTION: Param = Param::new("resolution_pm", "0.04", "spectrometer resolution, pm");
pub const RATE_K0: Param = Param::new(
    "rate_tau0_as",
    "0.05",
    "offset of the shift-rate stencil, as",
);
pub const RATE_WINDOW: Param = Param::new(
    "rate_window_as",
    "0.02",
    "half window of the shift-rate stencil, as",
);
pub const NOISE: Param = Param::new("noise_floor_mv", "0.5", "mean detector noise, mV");
pub const APD_GAIN: Param = Param::new("apd_gain_v_per_w", "3.14e6", "APD conversion gain, V/W");
pub const CAL_DK: Param = Param::new(
    "calibration_delta_k_fm",
    "148.8",
    "I-pointer resolution that fixes the intensity scale, fm",
);
pub const CAL_N: Param = Param::new(
    "calibration_n",
    "3",
    "interaction count of the calibration point",
);
pub const CAL_DI: Param = Param::new(
    "calibration_delta_i_mv",
    "0.044",
    "intensity uncertainty at the calibration point, mV",
);

/// Descriptions of where the preset constants come from, echoed in summaries.
pub const PRESET_SOURCES: &[(&str, &str)] = &[
    ("lambda0_nm", "center wavelength of both sources"),
    ("rho", "operating postselection angle"),
    ("gamma_pi", "initial phase difference of the interferometer"),
    ("refractive_index", "half-wave plate index"),
    ("resolution_pm", "spectrometer resolution"),
    ("apd_gain_v_per_w", "APD conversion gain"),
    ("noise_floor_mv", "mean APD electronic noise"),
    (
        "calibration_delta_k_fm",
        "coherent-source I-pointer resolution at N=3",
    ),
    (
        "calibration_delta_i_mv",
        "coherent-source intensity uncertainty at N=3",
    ),
    ("delta_i_mv", "per-source intensity uncertainty"),
];

/// How broadband widths in the config become profiles. A width of 0 is the
/// narrow-linewidth coherent source.
#[derive(Debug, Clone, Copy)]
pub struct SourceFamily {
    pub lambda0: f64,
    shape: ShapeKind,
    order: u32,
    convention: WidthConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ShapeKind {
    Gaussian,
    SuperGaussian,
    Rectangular,
}

impl SourceFamily {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let lambda0 = cfg.positive("lambda0_nm")? * NM;
        let shape = match cfg.text("shape")? {
            "gaussian" => ShapeKind::Gaussian,
            "supergaussian" => ShapeKind::SuperGaussian,
            "rectangular" => ShapeKind::Rectangular,
            other => {
                return Err(LabError::Config(format!(
                    "`shape`: unknown shape `{other}`"
                )))
            }
        };
        let order = if shape == ShapeKind::SuperGaussian {
            cfg.u32("order")?
        } else {
            2
        };
        let convention = match cfg.text("width_convention")? {
            "equal_variance" => WidthConvention::EqualVariance,
            "fwhm" => WidthConvention::Fwhm,
            other => {
                return Err(LabError::Config(format!(
                    "`width_convention`: unknown convention `{other}`"
                )))
            }
        };
        Ok(Self {
            lambda0,
            shape,
            order,
            convention,
        })
    }

    /// Gaussian family at `lambda0`, for closed-form checks.
    pub fn gaussian(lambda0: f64) -> Self {
        Self {
            lambda0,
            shape: ShapeKind::Gaussian,
            order: 2,
            convention: WidthConvention::EqualVariance,
        }
    }

    pub fn profile(&self, width_nm: f64) -> Result<SpectralProfile> {
        if width_nm == 0.0 {
            return Ok(SpectralProfile::monochromatic(self.lambda0)?);
        }
        let w = width_nm * NM;
        let p = match self.shape {
            ShapeKind::Gaussian => SpectralProfile::gaussian(self.lambda0, w)?,
            ShapeKind::SuperGaussian => SpectralProfile::supergaussian(self.lambda0, w, self.order)
                .map_err(|_| {
                    LabError::Config(format!("`order`: {} is not an even order >= 2", self.order))
                })?,
            ShapeKind::Rectangular => SpectralProfile::rectangular(self.lambda0, w)?,
        };
        Ok(p.with_convention(self.convention))
    }

    pub fn p0(&self) -> f64 {
        2.0 * PI / self.lambda0
    }
}

/// `γ` in meters from its `γp₀/π` reading.
pub fn gamma_from(cfg: &Config, p0: f64) -> Result<f64> {
    let g = cfg.f64("gamma_pi")?;
    if g < 0.0 {
        return Err(LabError::Config("`gamma_pi`: must be nonnegative".into()));
    }
    Ok(g * PI / p0)
}

/// Shift-rate stencil `(k0, h)` in meters.
pub fn rate_stencil(cfg: &Config) -> Result<(f64, f64)> {
    Ok((
        k_from_tau(cfg.f64("rate_tau0_as")? * AS),
        k_from_tau(cfg.positive("rate_window_as")? * AS),
    ))
}

/// `∂Δλ/∂k` (m per m) from the quadrature P pointer.
pub fn p_pointer_rate(
    profile: &SpectralProfile,
    n: u32,
    gamma: f64,
    rho: f64,
    stencil: (f64, f64),
) -> Result<RateEstimate> {
    Ok(try_shift_rate(
        |k| {
            let s = MwiSettings::new(n, k, gamma, rho)?;
            Ok(collapsed_density(profile, &s)?.delta_lambda)
        },
        stencil.0,
        stencil.1,
    )?)
}

/// A rate in m of Δλ per m of k, read as nm per attosecond of τ.
pub fn nm_per_as(rate: f64) -> f64 {
    rate * k_from_tau(AS) / NM
}

/// Slope `∂P/∂k` of the Gaussian (or coherent, `σ_p = 0`) postselection
/// probability at the settings' `k`.
pub fn probability_slope(sigma_p: f64, p0: f64, settings: &MwiSettings) -> f64 {
    let n = settings.n_interactions() as f64;
    let length = settings.phase_length();
    let envelope = wva_core::coherence_envelope(sigma_p, length);
    let x = p0 * length + 2.0 * settings.rho();
    0.5 * n * envelope * (sigma_p * sigma_p * length * x.cos() + p0 * x.sin())
}

/// `I_init` (V) such that the linear I pointer with uncertainty `delta_i`
/// resolves `delta_k` at `n` interactions, `k = 0`, `γ = 0`.
pub fn calibrated_i_init(delta_i: f64, delta_k: f64, n: u32, rho: f64, p0: f64) -> Result<f64> {
    let s = MwiSettings::new(n, 0.0, 0.0, rho)?;
    Ok(delta_i / (delta_k * probability_slope(0.0, p0, &s)))
}

/// Intensity scale from the calibration keys.
pub fn i_init_from(cfg: &Config, p0: f64) -> Result<f64> {
    calibrated_i_init(
        cfg.positive("calibration_delta_i_mv")? * MV,
        cfg.positive("calibration_delta_k_fm")? * FM,
        cfg.u32("calibration_n")?.max(1),
        cfg.positive("rho")?,
        p0,
    )
}

/// I-pointer precision from the linear slope at `k = 0`.
pub fn i_pointer_precision(
    i_init: f64,
    delta_i: f64,
    sigma_p: f64,
    p0: f64,
    settings: &MwiSettings,
) -> Result<wva_core::PrecisionReport> {
    let rate = i_init * probability_slope(sigma_p, p0, &settings.with_k(0.0)?);
    Ok(wva_core::precision(delta_i, rate, Pointer::I)?)
}

/// `100·(value/reference − 1)`.
pub fn percent_off(value: f64, reference: f64) -> f64 {
    100.0 * (value / reference - 1.0)
}
