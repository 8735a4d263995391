//! P-pointer shift and shift rate across broadband widths.

use rayon::prelude::*;
use wva_core::{collapsed_density, k_from_tau, precision, MwiSettings, Pointer, RateEstimate};

use super::{Outcome, Summary};
use crate::config::{Config, Param};
use crate::error::Result;
use crate::model::*;
use crate::table::{Cell, Table};

/// Reported rates (nm/as) and precisions (as) for the four broadband widths.
pub(crate) const REPORTED_N1: &[(f64, f64, f64)] = &[
    (0.5, 0.27, 1.45e-4),
    (1.0, 0.31, 1.30e-4),
    (3.0, 0.41, 9.62e-5),
    (6.0, 0.43, 9.30e-5),
];
pub(crate) const REPORTED_MAX_RATE: f64 = 0.61;
pub(crate) const REPORTED_BAND_NM: (f64, f64) = (12.0, 135.0);

const WIDTHS: Param = Param::new("widths_nm", "0.5,1,3,6", "broadband widths, nm");
const N: Param = Param::new("n_interactions", "1", "interaction count");
const TAU_MIN: Param = Param::new("tau_min_as", "0", "first time difference, as");
const TAU_STEP: Param = Param::new("tau_step_as", "0.01", "time difference step, as");

pub(crate) const FIG3A_PARAMS: &[Param] = &[
    LAMBDA0,
    RHO,
    GAMMA_PI,
    SHAPE,
    ORDER,
    CONVENTION,
    RESOLUTION,
    RATE_K0,
    RATE_WINDOW,
    WIDTHS,
    N,
    TAU_MIN,
    Param::new("tau_max_as", "0.3", "last time difference, as"),
    TAU_STEP,
];

pub(crate) const FIG3B_PARAMS: &[Param] = &[
    LAMBDA0,
    RHO,
    GAMMA_PI,
    SHAPE,
    ORDER,
    CONVENTION,
    RATE_WINDOW,
    N,
    Param::new("width_min_nm", "0.5", "narrowest width, nm"),
    Param::new("width_max_nm", "300", "widest width, nm"),
    Param::new("width_points", "96", "geometrically spaced widths"),
    TAU_MIN,
    Param::new("tau_max_as", "0.3", "last time difference, as"),
    Param::new("tau_step_as", "0.05", "time difference step, as"),
    Param::new(
        "band_fraction",
        "0.95",
        "fraction of the maximum rate that delimits the reported width band",
    ),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthRate {
    pub width_nm: f64,
    pub n: u32,
    /// m of Δλ per m of k.
    pub rate: RateEstimate,
    pub rate_nm_per_as: f64,
    pub delta_tau_as: f64,
}

/// Shift rate and resolution-limited precision at the configured stencil for
/// every width in `widths_nm` and every `n`.
pub fn width_rates(cfg: &Config, ns: &[u32]) -> Result<Vec<WidthRate>> {
    let family = SourceFamily::from_config(cfg)?;
    let widths = cfg.f64_list("widths_nm")?;
    let rho = cfg.positive("rho")?;
    let gamma = gamma_from(cfg, family.p0())?;
    let stencil = rate_stencil(cfg)?;
    let resolution = cfg.positive("resolution_pm")? * PM;
    let jobs: Vec<(f64, u32)> = widths
        .iter()
        .flat_map(|&w| ns.iter().map(move |&n| (w, n)))
        .collect();
    jobs.par_iter()
        .map(|&(width_nm, n)| {
            let profile = family.profile(width_nm)?;
            let rate = p_pointer_rate(&profile, n, gamma, rho, stencil)?;
            let report = precision(resolution, rate.rate, Pointer::P)?;
            Ok(WidthRate {
                width_nm,
                n,
                rate,
                rate_nm_per_as: nm_per_as(rate.rate),
                delta_tau_as: report.delta_tau / AS,
            })
        })
        .collect()
}

/// Shift-vs-τ rows `(τ, width, n)` for [`run_fig3a`] and the fig4 scenario.
pub(crate) fn shift_rows(cfg: &Config, ns: &[u32], with_n: bool) -> Result<Vec<Vec<Cell>>> {
    let family = SourceFamily::from_config(cfg)?;
    let widths = cfg.f64_list("widths_nm")?;
    let taus = cfg.range("tau_min_as", "tau_max_as", "tau_step_as")?;
    let rho = cfg.positive("rho")?;
    let gamma = gamma_from(cfg, family.p0())?;
    let jobs: Vec<(f64, u32)> = widths
        .iter()
        .flat_map(|&w| ns.iter().map(move |&n| (w, n)))
        .collect();
    let blocks: Vec<Vec<Vec<Cell>>> = jobs
        .par_iter()
        .map(|&(width_nm, n)| -> Result<Vec<Vec<Cell>>> {
            let profile = family.profile(width_nm)?;
            let base = collapsed_density(&profile, &MwiSettings::new(n, 0.0, gamma, rho)?)?;
            taus.iter()
                .map(|&tau| {
                    let k = k_from_tau(tau * AS);
                    let r = collapsed_density(&profile, &MwiSettings::new(n, k, gamma, rho)?)?;
                    let mut row: Vec<Cell> = vec![tau.into(), width_nm.into()];
                    if with_n {
                        row.push(n.into());
                    }
                    row.extend([
                        k.into(),
                        ((r.delta_lambda - base.delta_lambda) / NM).into(),
                        (r.delta_lambda / NM).into(),
                        r.delta_p.into(),
                        r.postselection_probability.into(),
                    ]);
                    Ok(row)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

pub(crate) fn shift_columns(with_n: bool) -> Vec<(&'static str, &'static str)> {
    let mut cols = vec![("tau", "as"), ("sigma_lambda", "nm")];
    if with_n {
        cols.push(("n_interactions", "1"));
    }
    cols.extend([
        ("k", "m"),
        ("delta_lambda", "nm"),
        ("mean_wavelength_offset", "nm"),
        ("delta_p", "rad/m"),
        ("probability", "1"),
    ]);
    cols
}

pub(crate) fn reported_n1(width_nm: f64) -> Option<(f64, f64)> {
    REPORTED_N1
        .iter()
        .find(|(w, _, _)| *w == width_nm)
        .map(|&(_, r, p)| (r, p))
}

pub(crate) fn run_fig3a(cfg: &Config) -> Result<Outcome> {
    let n = cfg.u32("n_interactions")?.max(1);
    let cols = shift_columns(false);
    let mut table = Table::new(&cols, 2);
    table.extend(shift_rows(cfg, &[n], false)?);
    let mut summary = Summary::default();
    summary.put("delta_lambda.reference", "shift relative to tau=0");
    for r in width_rates(cfg, &[n])? {
        let tag = format!("{}nm", r.width_nm);
        summary.num(format!("rate_nm_per_as.{tag}"), r.rate_nm_per_as.abs());
        summary.num(format!("rate_signed_nm_per_as.{tag}"), r.rate_nm_per_as);
        summary.num(
            format!("rate_stencil_error_nm_per_as.{tag}"),
            nm_per_as(r.rate.error),
        );
        summary.num(format!("precision_as.{tag}"), r.delta_tau_as);
        if let (1, Some((rate, prec))) = (n, reported_n1(r.width_nm)) {
            summary.num(format!("reported_rate_nm_per_as.{tag}"), rate);
            summary.num(format!("reported_precision_as.{tag}"), prec);
            summary.num(
                format!("rate_off_percent.{tag}"),
                percent_off(r.rate_nm_per_as.abs(), rate),
            );
        }
    }
    Ok(Outcome { table, summary })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateMapPoint {
    pub tau_as: f64,
    pub width_nm: f64,
    pub rate_nm_per_as: f64,
}

pub(crate) fn map_widths(cfg: &Config) -> Result<Vec<f64>> {
    let lo = cfg.positive("width_min_nm")?;
    let hi = cfg.positive("width_max_nm")?;
    let count = cfg.u32("width_points")?.max(2) as usize;
    if hi <= lo {
        return Err(crate::error::LabError::Config(
            "`width_max_nm`: must exceed width_min_nm".into(),
        ));
    }
    let ratio = (hi / lo).ln();
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo * (ratio * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// `∂Δλ/∂τ` at every `(τ, width)` of the map.
pub fn rate_map(cfg: &Config) -> Result<Vec<RateMapPoint>> {
    let family = SourceFamily::from_config(cfg)?;
    let widths = map_widths(cfg)?;
    let taus = cfg.range("tau_min_as", "tau_max_as", "tau_step_as")?;
    let rho = cfg.positive("rho")?;
    let gamma = gamma_from(cfg, family.p0())?;
    let n = cfg.u32("n_interactions")?.max(1);
    let h = k_from_tau(cfg.positive("rate_window_as")? * AS);
    let jobs: Vec<(f64, f64)> = widths
        .iter()
        .flat_map(|&w| taus.iter().map(move |&t| (t, w)))
        .collect();
    jobs.par_iter()
        .map(|&(tau_as, width_nm)| {
            let profile = family.profile(width_nm)?;
            let rate = p_pointer_rate(&profile, n, gamma, rho, (k_from_tau(tau_as * AS), h))?;
            Ok(RateMapPoint {
                tau_as,
                width_nm,
                rate_nm_per_as: nm_per_as(rate.rate),
            })
        })
        .collect()
}

/// Largest `|rate|` and the contiguous width band around it whose best rate
/// stays above `fraction` of that maximum.
pub(crate) fn rate_maximum(points: &[RateMapPoint], fraction: f64) -> (RateMapPoint, f64, f64) {
    let best = *points
        .iter()
        .max_by(|a, b| a.rate_nm_per_as.abs().total_cmp(&b.rate_nm_per_as.abs()))
        .expect("empty rate map");
    let mut widths: Vec<f64> = points.iter().map(|p| p.width_nm).collect();
    widths.sort_by(f64::total_cmp);
    widths.dedup();
    let best_at = |w: f64| {
        points
            .iter()
            .filter(|p| p.width_nm == w)
            .map(|p| p.rate_nm_per_as.abs())
            .fold(0.0, f64::max)
    };
    let threshold = fraction * best.rate_nm_per_as.abs();
    let centre = widths.iter().position(|&w| w == best.width_nm).unwrap();
    let mut lo = centre;
    while lo > 0 && best_at(widths[lo - 1]) >= threshold {
        lo -= 1;
    }
    let mut hi = centre;
    while hi + 1 < widths.len() && best_at(widths[hi + 1]) >= threshold {
        hi += 1;
    }
    (best, widths[lo], widths[hi])
}

pub(crate) fn run_fig3b(cfg: &Config) -> Result<Outcome> {
    let points = rate_map(cfg)?;
    let mut table = Table::new(
        &[
            ("tau", "as"),
            ("sigma_lambda", "nm"),
            ("rate", "nm/as"),
            ("rate_abs", "nm/as"),
        ],
        2,
    );
    table.extend(points.iter().map(|p| {
        vec![
            p.tau_as.into(),
            p.width_nm.into(),
            p.rate_nm_per_as.into(),
            p.rate_nm_per_as.abs().into(),
        ]
    }));
    let fraction = cfg.positive("band_fraction")?;
    let (best, band_lo, band_hi) = rate_maximum(&points, fraction);
    let mut summary = Summary::default();
    summary.num("max_rate_nm_per_as", best.rate_nm_per_as.abs());
    summary.num("max_rate_signed_nm_per_as", best.rate_nm_per_as);
    summary.num("max_rate_width_nm", best.width_nm);
    summary.num("max_rate_tau_as", best.tau_as);
    summary.num("band_min_nm", band_lo);
    summary.num("band_max_nm", band_hi);
    summary.num("reported_max_rate_nm_per_as", REPORTED_MAX_RATE);
    summary.put(
        "reported_band_nm",
        format!("{}-{}", REPORTED_BAND_NM.0, REPORTED_BAND_NM.1),
    );
    summary.num(
        "max_rate_off_percent",
        percent_off(best.rate_nm_per_as.abs(), REPORTED_MAX_RATE),
    );
    summary.put(
        "band_overlaps_reported",
        band_lo <= REPORTED_BAND_NM.1 && band_hi >= REPORTED_BAND_NM.0,
    );
    Ok(Outcome { table, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(w: f64, r: f64) -> RateMapPoint {
        RateMapPoint {
            tau_as: 0.0,
            width_nm: w,
            rate_nm_per_as: r,
        }
    }

    #[test]
    fn band_grows_around_the_maximum() {
        let pts = [
            point(1.0, 0.1),
            point(2.0, 0.96),
            point(3.0, -1.0),
            point(4.0, 0.97),
            point(5.0, 0.5),
        ];
        let (best, lo, hi) = rate_maximum(&pts, 0.95);
        assert_eq!(best.width_nm, 3.0);
        assert_eq!((lo, hi), (2.0, 4.0));
    }

    #[test]
    fn map_widths_are_geometric_and_hit_both_ends() {
        let mut cfg = Config::from_params(FIG3B_PARAMS);
        cfg.set("width_points", "3").unwrap();
        cfg.set("width_min_nm", "1").unwrap();
        cfg.set("width_max_nm", "100").unwrap();
        let w = map_widths(&cfg).unwrap();
        assert_eq!(w[0], 1.0);
        assert!((w[1] - 10.0).abs() < 1e-12);
        assert_eq!(w[2], 100.0);
    }
}
