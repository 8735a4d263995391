//! Joint-state oracle against the closed collapsed density.

use std::f64::consts::PI;

use rayon::prelude::*;
use wva_core::{
    build_grid, collapse_on_grid, oracle_joint_state, GridSpec, MwiSettings, SpectralProfile,
};

use super::{Outcome, Summary};
use crate::config::{Config, Param};
use crate::error::{LabError, Result};
use crate::model::*;
use crate::table::Table;

pub(crate) const TOLERANCE: f64 = 1e-10;

pub(crate) const PARAMS: &[Param] = &[
    LAMBDA0,
    Param::new("width_nm", "6", "broadband width, nm"),
    Param::new(
        "shapes",
        "gaussian,supergaussian,rectangular",
        "profile shapes",
    ),
    ORDER,
    Param::new("n_list", "1,2,3", "interaction counts"),
    Param::new("k_list", "0,1e-12,1e-10", "interaction strengths, m"),
    Param::new("rho_list", "0.002,0.01,0.1", "postselection angles, rad"),
    Param::new(
        "gamma_pi_list",
        "0,1.9",
        "initial phase lengths as gamma*p0/pi",
    ),
];

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub shape: String,
    pub n: u32,
    pub k: f64,
    pub rho: f64,
    pub gamma: f64,
    pub max_rel_dev: f64,
    pub probability: f64,
}

fn profile(shape: &str, lambda0: f64, width: f64, order: u32) -> Result<SpectralProfile> {
    Ok(match shape {
        "gaussian" => SpectralProfile::gaussian(lambda0, width)?,
        "supergaussian" => SpectralProfile::supergaussian(lambda0, width, order)?,
        "rectangular" => SpectralProfile::rectangular(lambda0, width)?,
        other => {
            return Err(LabError::Config(format!(
                "`shapes`: unknown shape `{other}`"
            )))
        }
    })
}

/// Largest relative pointwise deviation over nodes above `1e-15` of the peak.
fn max_relative_deviation(reference: &[f64], other: &[f64]) -> f64 {
    let peak = reference.iter().cloned().fold(0.0, f64::max);
    reference
        .iter()
        .zip(other)
        .filter(|(r, _)| **r > 1e-15 * peak)
        .map(|(r, o)| (r - o).abs() / r)
        .fold(0.0, f64::max)
}

pub fn oracle_matrix(cfg: &Config) -> Result<Vec<OracleCase>> {
    let lambda0 = cfg.positive("lambda0_nm")? * NM;
    let width = cfg.positive("width_nm")? * NM;
    let order = cfg.u32("order")?;
    let p0 = 2.0 * PI / lambda0;
    let shapes: Vec<String> = cfg
        .text("shapes")?
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let mut jobs = Vec::new();
    for shape in &shapes {
        for &n in &cfg.u32_list("n_list")? {
            for &k in &cfg.f64_list("k_list")? {
                for &rho in &cfg.f64_list("rho_list")? {
                    for &g in &cfg.f64_list("gamma_pi_list")? {
                        jobs.push((shape.clone(), n.max(1), k, rho, g * PI / p0));
                    }
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(shape, n, k, rho, gamma)| {
            let prof = profile(&shape, lambda0, width, order)?;
            let s = MwiSettings::new(n, k, gamma, rho)?;
            let grid = build_grid(&prof, &s, &GridSpec::default())?;
            let direct = collapse_on_grid(&grid, &s);
            let oracle = oracle_joint_state(&prof, &s, &grid)?;
            Ok(OracleCase {
                shape,
                n,
                k,
                rho,
                gamma,
                max_rel_dev: max_relative_deviation(
                    &direct.density.density,
                    &oracle.density.density,
                ),
                probability: direct.postselection_probability,
            })
        })
        .collect()
}

pub(crate) fn run(cfg: &Config) -> Result<Outcome> {
    let cases = oracle_matrix(cfg)?;
    let mut table = Table::new(
        &[
            ("shape", "label"),
            ("n_interactions", "1"),
            ("k", "m"),
            ("rho", "rad"),
            ("gamma", "m"),
            ("max_rel_dev", "1"),
            ("probability", "1"),
        ],
        5,
    );
    let mut worst: f64 = 0.0;
    for c in &cases {
        worst = worst.max(c.max_rel_dev);
        table.push(vec![
            c.shape.as_str().into(),
            c.n.into(),
            c.k.into(),
            c.rho.into(),
            c.gamma.into(),
            c.max_rel_dev.into(),
            c.probability.into(),
        ]);
    }
    let mut summary = Summary::default();
    summary.put("cases", cases.len());
    summary.num("max_rel_dev", worst);
    summary.num("tolerance", TOLERANCE);
    summary.put("passed", worst <= TOLERANCE);
    Ok(Outcome { table, summary })
}
