//! I pointer: intensity shift vs displacement and its resolution.

use rayon::prelude::*;
use wva_core::{
    effective_sigma_p, intensity_shift_approx, postselection_probability, snr_db, MwiSettings,
};

use super::{Outcome, Summary};
use crate::config::{Config, Param};
use crate::error::{LabError, Result};
use crate::model::*;
use crate::table::Table;

pub(crate) const REPORTED_COHERENT_N1_FM: f64 = 497.8;

pub(crate) const PARAMS: &[Param] = &[
    LAMBDA0,
    RHO,
    Param::new("gamma_pi", "0", "initial phase length as gamma*p0/pi"),
    SHAPE,
    ORDER,
    CONVENTION,
    CAL_DK,
    CAL_N,
    CAL_DI,
    NOISE,
    Param::new(
        "widths_nm",
        "0,0.5,1,3",
        "source widths, nm (0 = coherent source)",
    ),
    Param::new(
        "delta_i_mv",
        "0.044,0.072,0.11,0.21",
        "intensity uncertainty per source, mV",
    ),
    Param::new("n_list", "1,2,3", "interaction counts"),
    Param::new("k_min_pm", "0", "first displacement, pm"),
    Param::new("k_max_pm", "10", "last displacement, pm"),
    Param::new("k_step_pm", "0.5", "displacement step, pm"),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IResolution {
    pub width_nm: f64,
    pub n: u32,
    /// V.
    pub delta_i: f64,
    /// V per m of k.
    pub rate: f64,
    pub delta_k_fm: f64,
}

pub(crate) fn source_tag(width_nm: f64) -> String {
    if width_nm == 0.0 {
        "coherent".into()
    } else {
        format!("{width_nm}nm")
    }
}

pub(crate) fn paired_uncertainties(cfg: &Config) -> Result<Vec<(f64, f64)>> {
    let widths = cfg.f64_list("widths_nm")?;
    let di = cfg.f64_list("delta_i_mv")?;
    if widths.len() != di.len() {
        return Err(LabError::Config(
            "`delta_i_mv`: needs one value per entry of widths_nm".into(),
        ));
    }
    if widths.iter().any(|&w| w < 0.0) || di.iter().any(|&d| d <= 0.0) {
        return Err(LabError::Config(
            "widths must be >= 0 and uncertainties > 0".into(),
        ));
    }
    Ok(widths
        .into_iter()
        .zip(di.into_iter().map(|d| d * MV))
        .collect())
}

/// Calibrated `I_init` (V) and the linear-model resolution of every
/// `(source, N)` pair.
pub fn i_pointer_resolutions(cfg: &Config) -> Result<(f64, Vec<IResolution>)> {
    let family = SourceFamily::from_config(cfg)?;
    let p0 = family.p0();
    let i_init = i_init_from(cfg, p0)?;
    let rho = cfg.positive("rho")?;
    let gamma = gamma_from(cfg, p0)?;
    let ns = cfg.u32_list("n_list")?;
    let mut out = Vec::new();
    for (width_nm, delta_i) in paired_uncertainties(cfg)? {
        let sigma_p = effective_sigma_p(&family.profile(width_nm)?);
        for &n in &ns {
            let s = MwiSettings::new(n.max(1), 0.0, gamma, rho)?;
            let report = i_pointer_precision(i_init, delta_i, sigma_p, p0, &s)?;
            out.push(IResolution {
                width_nm,
                n: n.max(1),
                delta_i,
                rate: report.shift_rate,
                delta_k_fm: report.delta_k / FM,
            });
        }
    }
    Ok((i_init, out))
}

/// `(I, Δℓ, Δℓ_approx)` rows over `k` for `n` interactions.
pub(crate) fn intensity_rows(
    cfg: &Config,
    family: &SourceFamily,
    width_nm: f64,
    n: u32,
    i_init: f64,
) -> Result<Vec<(f64, f64, f64, f64)>> {
    let profile = family.profile(width_nm)?;
    let sigma_p = effective_sigma_p(&profile);
    let rho = cfg.positive("rho")?;
    let gamma = gamma_from(cfg, family.p0())?;
    let ks = cfg.range("k_min_pm", "k_max_pm", "k_step_pm")?;
    let base = postselection_probability(&profile, &MwiSettings::new(n, 0.0, gamma, rho)?)?;
    ks.par_iter()
        .map(|&k_pm| {
            let s = MwiSettings::new(n, k_pm * PM, gamma, rho)?;
            let prob = postselection_probability(&profile, &s)?;
            let approx = intensity_shift_approx(sigma_p, family.p0(), &s);
            Ok((k_pm, i_init * prob, (prob - base) / base, approx))
        })
        .collect()
}

pub(crate) fn run(cfg: &Config) -> Result<Outcome> {
    let family = SourceFamily::from_config(cfg)?;
    let (i_init, resolutions) = i_pointer_resolutions(cfg)?;
    let mut table = Table::new(
        &[
            ("k", "pm"),
            ("sigma_lambda", "nm"),
            ("n_interactions", "1"),
            ("intensity", "V"),
            ("delta_ell", "1"),
            ("delta_ell_approx", "1"),
        ],
        3,
    );
    for (width_nm, _) in paired_uncertainties(cfg)? {
        for &n in &cfg.u32_list("n_list")? {
            for (k, i, dl, approx) in intensity_rows(cfg, &family, width_nm, n.max(1), i_init)? {
                table.push(vec![
                    k.into(),
                    width_nm.into(),
                    n.max(1).into(),
                    i.into(),
                    dl.into(),
                    approx.into(),
                ]);
            }
        }
    }

    let rho = cfg.positive("rho")?;
    let baseline = i_init * rho.sin().powi(2);
    let mut summary = Summary::default();
    summary.num("i_init_v", i_init);
    summary.num("baseline_intensity_mv", baseline / MV);
    summary.num(
        "snr_db",
        snr_db(baseline, cfg.positive("noise_floor_mv")? * MV)?,
    );
    let cal_n = cfg.u32("calibration_n")?.max(1);
    for r in &resolutions {
        let tag = format!("{}.N{}", source_tag(r.width_nm), r.n);
        summary.num(format!("delta_k_fm.{tag}"), r.delta_k_fm);
        summary.num(format!("rate_v_per_m.{tag}"), r.rate);
        if let Some(cal) = resolutions
            .iter()
            .find(|c| c.width_nm == r.width_nm && c.n == cal_n)
        {
            summary.num(
                format!("scaling_n_delta_k_over_ncal_delta_kcal.{tag}"),
                r.n as f64 * r.delta_k_fm / (cal_n as f64 * cal.delta_k_fm),
            );
        }
    }
    if let Some(r1) = resolutions.iter().find(|r| r.width_nm == 0.0 && r.n == 1) {
        summary.num("reported_delta_k_fm.coherent.N1", REPORTED_COHERENT_N1_FM);
        summary.num(
            "delta_k_off_percent.coherent.N1",
            percent_off(r1.delta_k_fm, REPORTED_COHERENT_N1_FM),
        );
    }
    Ok(Outcome { table, summary })
}
