//! P pointer with multiple weak interactions.

use super::fig3::{shift_columns, shift_rows, width_rates, WidthRate};
use super::{Outcome, Summary};
use crate::config::{Config, Param};
use crate::error::Result;
use crate::model::*;
use crate::table::Table;

pub(crate) const REPORTED_BEST_PRECISION_AS: f64 = 3.34e-5;

pub(crate) const PARAMS: &[Param] = &[
    LAMBDA0,
    RHO,
    GAMMA_PI,
    SHAPE,
    ORDER,
    CONVENTION,
    RESOLUTION,
    RATE_K0,
    RATE_WINDOW,
    Param::new("widths_nm", "0.5,1,3,6", "broadband widths, nm"),
    Param::new("n_list", "1,2,3", "interaction counts"),
    Param::new("tau_min_as", "0", "first time difference, as"),
    Param::new("tau_max_as", "0.3", "last time difference, as"),
    Param::new("tau_step_as", "0.01", "time difference step, as"),
];

/// Shift rates for every configured width and interaction count.
pub fn mwi_rates(cfg: &Config) -> Result<Vec<WidthRate>> {
    let ns: Vec<u32> = cfg
        .u32_list("n_list")?
        .into_iter()
        .map(|n| n.max(1))
        .collect();
    width_rates(cfg, &ns)
}

pub(crate) fn run(cfg: &Config) -> Result<Outcome> {
    let ns: Vec<u32> = cfg
        .u32_list("n_list")?
        .into_iter()
        .map(|n| n.max(1))
        .collect();
    let mut table = Table::new(&shift_columns(true), 3);
    table.extend(shift_rows(cfg, &ns, true)?);
    let rates = mwi_rates(cfg)?;
    let mut summary = Summary::default();
    summary.put("delta_lambda.reference", "shift relative to tau=0");
    for r in &rates {
        let tag = format!("{}nm.N{}", r.width_nm, r.n);
        summary.num(format!("rate_nm_per_as.{tag}"), r.rate_nm_per_as.abs());
        summary.num(format!("precision_as.{tag}"), r.delta_tau_as);
        if let Some(single) = rates.iter().find(|s| s.width_nm == r.width_nm && s.n == 1) {
            summary.num(
                format!("rate_ratio_to_N1.{tag}"),
                r.rate_nm_per_as / single.rate_nm_per_as,
            );
        }
    }
    if let Some(best) = rates.iter().find(|r| r.width_nm == 6.0 && r.n == 3) {
        summary.num("reported_precision_as.6nm.N3", REPORTED_BEST_PRECISION_AS);
        summary.num(
            "precision_off_percent.6nm.N3",
            percent_off(best.delta_tau_as, REPORTED_BEST_PRECISION_AS),
        );
    }
    Ok(Outcome { table, summary })
}
