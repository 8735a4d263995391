//! Leggett-Garg `K31` over the postselection angle.

use wva_core::{k31, quantum_region_boundary, K31Mode, LgiPoint};

use super::{Outcome, Summary};
use crate::config::{Config, Param};
use crate::error::Result;
use crate::model::*;
use crate::table::Table;

pub(crate) const OPERATING_RHO: f64 = 0.0124;
pub(crate) const REPORTED_WEAK_VALUE_AT_OPERATING_RHO: f64 = 238.0;

pub(crate) const PARAMS: &[Param] = &[
    LAMBDA0,
    Param::new("rho_min", "0.002", "smallest postselection angle, rad"),
    Param::new("rho_max", "0.0124", "largest postselection angle, rad"),
    Param::new("rho_step", "0.0002", "postselection angle step, rad"),
    Param::new("n_list", "1,2,3", "interaction counts"),
    Param::new(
        "exact_k_pm",
        "0.1",
        "displacement for the exact-probability K31 column (coherent source), pm",
    ),
];

/// Approximate and exact-probability `K31` on the configured `ρ × N` grid.
pub fn k31_scan(cfg: &Config) -> Result<Vec<(LgiPoint, f64)>> {
    let rhos = cfg.range("rho_min", "rho_max", "rho_step")?;
    let p0 = SourceFamily::gaussian(cfg.positive("lambda0_nm")? * NM).p0();
    let k = cfg.f64("exact_k_pm")? * PM;
    let mut out = Vec::new();
    for &n in &cfg.u32_list("n_list")? {
        for &rho in &rhos {
            let approx = k31(n.max(1), rho, K31Mode::Approx)?;
            let exact = k31(
                n.max(1),
                rho,
                K31Mode::Exact {
                    sigma_p: 0.0,
                    p0,
                    k,
                },
            )?;
            out.push((approx, exact.k31));
        }
    }
    Ok(out)
}

pub(crate) fn run(cfg: &Config) -> Result<Outcome> {
    let scan = k31_scan(cfg)?;
    let mut table = Table::new(
        &[
            ("rho", "rad"),
            ("n_interactions", "1"),
            ("k31", "1"),
            ("k31_exact", "1"),
            ("im_weak_value", "1"),
            ("violates_lgi", "label"),
        ],
        2,
    );
    let mut all_negative = true;
    let mut region_consistent = true;
    for (p, exact) in &scan {
        let negative = p.k31 < 0.0;
        all_negative &= negative;
        region_consistent &= negative == (p.rho < quantum_region_boundary(p.n_interactions));
        table.push(vec![
            p.rho.into(),
            p.n_interactions.into(),
            p.k31.into(),
            (*exact).into(),
            p.im_weak_value.into(),
            if negative { "yes" } else { "no" }.into(),
        ]);
    }
    let mut summary = Summary::default();
    let mut ns = cfg.u32_list("n_list")?;
    ns.sort_unstable();
    ns.dedup();
    for n in ns {
        summary.num(
            format!("region_upper_rad.N{}", n.max(1)),
            quantum_region_boundary(n.max(1)),
        );
    }
    let op = k31(3, OPERATING_RHO, K31Mode::Approx)?;
    summary.num("k31.N3.rho0.0124", op.k31);
    summary.num("im_weak_value.N3.rho0.0124", op.im_weak_value);
    summary.num(
        "reported_weak_value.N3.rho0.0124",
        REPORTED_WEAK_VALUE_AT_OPERATING_RHO,
    );
    summary.num(
        "weak_value_off_percent.N3.rho0.0124",
        percent_off(op.im_weak_value, REPORTED_WEAK_VALUE_AT_OPERATING_RHO),
    );
    summary.put("all_rows_violate", all_negative);
    summary.put("violation_matches_region", region_consistent);
    Ok(Outcome { table, summary })
}
