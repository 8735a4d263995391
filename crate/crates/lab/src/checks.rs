//! Pass/fail criteria over the model and the scenarios.
//!
//! Tolerances are fixed here; each check reports the measured values so a
//! failure says by how much it missed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use wva_core::{
    collapsed_density, effective_sigma_p, intensity_after_postselection, intensity_shift_approx,
    k31, pointer_shift_p_approx, pointer_shift_p_gaussian, postselection_probability_gaussian,
    quantum_region_boundary, tau_from_tilt, weak_value, weak_value_from_shift, K31Mode,
    MwiSettings, SpectralProfile, TiltGeometry,
};

use crate::error::{LabError, Result};
use crate::model::{SourceFamily, NM};
use crate::scenarios;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} | {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

/// Criteria run by `wva-lab verify`.
pub const VERIFY_IDS: &[u8] = &[1, 2, 3, 7, 8, 9];

pub fn run(id: u8) -> CheckResult {
    let (title, outcome): (&'static str, Result<(bool, String)>) = match id {
        1 => ("joint-state oracle equivalence", oracle_equivalence()),
        2 => (
            "quadrature vs Gaussian closed forms",
            closed_form_consistency(),
        ),
        3 => ("MWI amplification in the linear regime", amplification()),
        4 => ("P-pointer shift rates vs reported", shift_rates()),
        5 => ("P-pointer precisions vs reported", p_precisions()),
        6 => ("I-pointer resolution scaling", i_pointer_scaling()),
        7 => ("Leggett-Garg K31 and quantum region", lgi()),
        8 => ("weak value round trip", weak_value_round_trip()),
        9 => ("monotonicity properties", monotonicity()),
        _ => (
            "unknown criterion",
            Err(LabError::Config(format!("no criterion {id}"))),
        ),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        id,
        title,
        passed,
        detail,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn oracle_equivalence() -> Result<(bool, String)> {
    let s = scenarios::find("oracle_suite")?;
    let (cases, took) = timed(|| scenarios::oracle_matrix(&s.default_config()));
    let cases = cases?;
    let worst = cases.iter().map(|c| c.max_rel_dev).fold(0.0, f64::max);
    let ok = cases.len() == 162 && worst <= 1e-10 && took < Duration::from_secs(30);
    Ok((
        ok,
        format!(
            "{} cases, max relative deviation {worst:.3e} (<= 1e-10), {:.2} s (< 30 s)",
            cases.len(),
            took.as_secs_f64()
        ),
    ))
}

fn closed_form_consistency() -> Result<(bool, String)> {
    let family = SourceFamily::gaussian(1550.0 * NM);
    let mut jobs = Vec::new();
    for w in [0.5, 1.0, 3.0, 6.0, 20.0] {
        for n in 1..=3 {
            for k in [1e-12, 3e-12, 1e-11, 3e-10] {
                for rho in [0.002, 0.01, 0.1] {
                    jobs.push((w, n, k, rho));
                }
            }
        }
    }
    let (devs, took) = timed(|| {
        jobs.par_iter()
            .map(|&(w, n, k, rho)| -> Result<(f64, f64)> {
                let prof = family.profile(w)?;
                let sp = effective_sigma_p(&prof);
                let p0 = prof.center_momentum();
                let s = MwiSettings::new(n, k, 0.0, rho)?;
                let q = collapsed_density(&prof, &s)?;
                Ok((
                    rel(q.delta_p, pointer_shift_p_gaussian(sp, p0, &s)?),
                    rel(
                        q.postselection_probability,
                        postselection_probability_gaussian(sp, p0, &s),
                    ),
                ))
            })
            .collect::<Result<Vec<_>>>()
    });
    let devs = devs?;
    let dp = devs.iter().map(|d| d.0).fold(0.0, f64::max);
    let prob = devs.iter().map(|d| d.1).fold(0.0, f64::max);
    let ok = dp <= 1e-6 && prob <= 1e-9 && took < Duration::from_secs(10);
    Ok((
        ok,
        format!(
            "{} cases, max dp deviation {dp:.3e} (<= 1e-6), max P deviation {prob:.3e} (<= 1e-9), {:.2} s (< 10 s)",
            devs.len(),
            took.as_secs_f64()
        ),
    ))
}

fn amplification() -> Result<(bool, String)> {
    let prof = SpectralProfile::gaussian(1550.0 * NM, 6.0 * NM)?;
    let p0 = prof.center_momentum();
    let (rho, k) = (0.002, 1e-13);
    let shifts = |n: u32| -> Result<(f64, f64)> {
        let s = MwiSettings::new(n, k, 0.0, rho)?;
        Ok((
            collapsed_density(&prof, &s)?.delta_lambda,
            intensity_after_postselection(1.0, 0.0, p0, &s)?.relative_shift,
        ))
    };
    let (l1, i1) = shifts(1)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=3 {
        let (ln, iln) = shifts(n)?;
        let nf = n as f64;
        let (rl, ri) = (ln / l1, iln / i1);
        ok &= rel(rl, nf) <= 5e-3 && rel(ri, nf) <= 5e-3;
        parts.push(format!("N={n}: dlambda ratio {rl:.5}, dell ratio {ri:.5}"));
    }
    ok &= 3.0 * k * p0 <= rho / 50.0;
    Ok((
        ok,
        format!("{} (within 0.5% of N; k = 1e-13 m)", parts.join("; ")),
    ))
}

fn shift_rates() -> Result<(bool, String)> {
    let fig3a = scenarios::find("fig3a")?;
    let rates = scenarios::width_rates(&fig3a.default_config(), &[1])?;
    let mut ok = true;
    let mut parts = Vec::new();
    for r in &rates {
        if let Some((reported, _)) = scenarios::reported_n1(r.width_nm) {
            let got = r.rate_nm_per_as.abs();
            ok &= rel(got, reported) <= 0.15;
            parts.push(format!("{} nm {got:.3e} vs {reported}", r.width_nm));
        }
    }
    let fig3b = scenarios::find("fig3b")?;
    let summary = fig3b.run(&fig3b.default_config())?.summary;
    let max: f64 = summary_num(&summary, "max_rate_nm_per_as")?;
    let band_lo = summary_num(&summary, "band_min_nm")?;
    let band_hi = summary_num(&summary, "band_max_nm")?;
    let overlaps = band_lo <= 135.0 && band_hi >= 12.0;
    ok &= rel(max, 0.61) <= 0.20 && overlaps;
    Ok((
        ok,
        format!(
            "fig3a nm/as (15%): {}; fig3b max {max:.3e} vs 0.61 (20%), band {band_lo:.3}-{band_hi:.3} nm vs 12-135",
            parts.join(", ")
        ),
    ))
}

fn summary_num(summary: &scenarios::Summary, key: &str) -> Result<f64> {
    summary
        .get(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| LabError::Schema(format!("summary lacks `{key}`")))
}

fn p_precisions() -> Result<(bool, String)> {
    let fig3a = scenarios::find("fig3a")?;
    let rates = scenarios::width_rates(&fig3a.default_config(), &[1])?;
    let mut ok = true;
    let mut parts = Vec::new();
    for r in &rates {
        if let Some((_, reported)) = scenarios::reported_n1(r.width_nm) {
            ok &= rel(r.delta_tau_as, reported) <= 0.15;
            parts.push(format!(
                "{} nm {:.3e} vs {reported:e}",
                r.width_nm, r.delta_tau_as
            ));
        }
    }
    let fig4 = scenarios::find("fig4")?;
    let mut cfg = fig4.default_config();
    cfg.set("widths_nm", "6")?;
    cfg.set("n_list", "3")?;
    let best = scenarios::mwi_rates(&cfg)?[0];
    ok &= rel(best.delta_tau_as, 3.34e-5) <= 0.15;
    // consistency of the arithmetic behind the reported numbers
    let reported_ratio = 0.04e-3 / 0.43;
    Ok((
        ok,
        format!(
            "N=1 as (15%): {}; N=3 6 nm {:.3e} vs 3.34e-5; reported 0.04 pm / 0.43 nm/as = {reported_ratio:.3e} as",
            parts.join(", "),
            best.delta_tau_as
        ),
    ))
}

fn i_pointer_scaling() -> Result<(bool, String)> {
    let fig5 = scenarios::find("fig5")?;
    let (i_init, res) = scenarios::i_pointer_resolutions(&fig5.default_config())?;
    let coherent = |n: u32| {
        res.iter()
            .find(|r| r.width_nm == 0.0 && r.n == n)
            .map(|r| r.delta_k_fm)
            .ok_or_else(|| LabError::Schema(format!("no coherent N={n} resolution")))
    };
    let d3 = coherent(3)?;
    let calibrated = rel(d3, 148.8) <= 1e-9;
    let mut exact = true;
    for n in 1..=3 {
        exact &= rel(coherent(n)? * n as f64, 3.0 * d3) <= 1e-12;
    }
    let d1 = coherent(1)?;
    let near = rel(d1, 497.8) <= 0.12;
    Ok((
        calibrated && exact && near,
        format!(
            "I_init {i_init:.5e} V; dk(3) {d3:.4} fm; dk(N)*N = 3 dk(3) exactly: {exact}; dk(1) {d1:.1} fm vs 497.8 ({:+.1}%, 12%)",
            100.0 * (d1 / 497.8 - 1.0)
        ),
    ))
}

fn negativity_upper(n: u32, steps: usize) -> Result<(f64, f64)> {
    let step = (FRAC_PI_2 - 1e-9) / steps as f64;
    let mut upper = 0.0;
    for i in 1..steps {
        let rho = i as f64 * step;
        let p = k31(n, rho, K31Mode::Approx)?;
        if p.k31 < 0.0 {
            upper = rho;
        }
        if (p.k31 < 0.0) != (rho < quantum_region_boundary(n))
            && (rho - quantum_region_boundary(n)).abs() > step
        {
            return Ok((f64::NAN, step));
        }
    }
    Ok((upper, step))
}

fn lgi() -> Result<(bool, String)> {
    let op = k31(3, 0.0124, K31Mode::Approx)?;
    let value_ok = (op.k31 - -0.0741).abs() <= 1e-4;
    let wv_ok = rel(op.im_weak_value, 238.0) <= 0.02;
    let mut region_ok = true;
    let mut uppers = Vec::new();
    for n in 1..=3 {
        let (upper, step) = negativity_upper(n, 100_000)?;
        region_ok &= (upper - quantum_region_boundary(n)).abs() <= step;
        uppers.push(upper);
    }
    let nested = uppers[2] > uppers[0];
    Ok((
        value_ok && wv_ok && region_ok && nested,
        format!(
            "K31(3, 0.0124) {:.6} (-0.0741 +- 1e-4); Im w {:.2} vs 238 ({:+.2}%, 2%); scanned upper edges {:.5}/{:.5}/{:.5} vs atan N; region(3) contains region(1): {nested}",
            op.k31,
            op.im_weak_value,
            100.0 * (op.im_weak_value / 238.0 - 1.0),
            uppers[0],
            uppers[1],
            uppers[2]
        ),
    ))
}

fn weak_value_round_trip() -> Result<(bool, String)> {
    let lambda0 = 1550.0 * NM;
    let p0 = 2.0 * PI / lambda0;
    let sigma_6nm = effective_sigma_p(&SpectralProfile::gaussian(lambda0, 6.0 * NM)?);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=3 {
        for i in 0..=13 {
            let rho = 0.002 + i as f64 * 0.0008;
            for k in [1e-13, 1e-12, 1e-11] {
                for sp in [0.0, sigma_6nm] {
                    let s = MwiSettings::new(n, k, 0.0, rho)?;
                    let dl = intensity_shift_approx(sp, p0, &s);
                    let w = weak_value_from_shift(dl, k, p0, sp, n)?;
                    worst = worst.max(rel(w, weak_value(n, rho)?.imag()));
                    cases += 1;
                }
            }
        }
    }
    let (rho, recovered, theory) = scenarios::weak_value_at_inferred_rho(lambda0, 1e-13)?;
    let ok = worst <= 1e-9 && rel(recovered, theory) <= 1e-3 && rel(theory, 1478.0) <= 1e-9;
    Ok((
        ok,
        format!(
            "{cases} cases, max deviation {worst:.3e} (<= 1e-9); inferred rho {rho:.6e} rad: recovered {recovered:.2} vs 3 cot rho {theory:.2} ({:+.3}%, 0.1%)",
            100.0 * (recovered / theory - 1.0)
        ),
    ))
}

fn monotonicity() -> Result<(bool, String)> {
    let p0 = 2.0 * PI / (1550.0 * NM);
    let mut quadratic = true;
    for n in 1..=3 {
        let s = MwiSettings::new(n, 3e-12, 0.0, 0.002)?;
        for sp in [1e2, 1.3e3, 1.5688e4, 7.8e5] {
            quadratic &=
                pointer_shift_p_approx(2.0 * sp, &s) == 4.0 * pointer_shift_p_approx(sp, &s);
            quadratic &= rel(
                pointer_shift_p_approx(3.0 * sp, &s),
                9.0 * pointer_shift_p_approx(sp, &s),
            ) <= 1e-15;
        }
    }
    let mut decreasing = true;
    for n in 1..=3 {
        for k in [1e-10, -3e-10, 1e-9] {
            let s = MwiSettings::new(n, k, 0.0, 0.002)?;
            let mut last = f64::INFINITY;
            // geometric σ_p from 1e4 to 1e6 rad/m, where every step moves the
            // envelope by many ulps
            for i in 0..=400 {
                let sp = 1e4 * 100f64.powf(i as f64 / 400.0);
                let v = intensity_shift_approx(sp, p0, &s).abs();
                decreasing &= v < last;
                last = v;
            }
        }
    }
    let mut tilt = true;
    let mut last = 0.0;
    for i in 1..2000 {
        let theta = i as f64 * (FRAC_PI_2 / 2000.0);
        let up = tau_from_tilt(&TiltGeometry::new(theta, 1.54, 1550.0 * NM)?);
        let down = tau_from_tilt(&TiltGeometry::new(-theta, 1.54, 1550.0 * NM)?);
        tilt &= up == down && up > last;
        last = up;
    }
    Ok((
        quadratic && decreasing && tilt,
        format!(
            "dp_approx quadratic in sigma_p: {quadratic}; dell_approx strictly decreasing in sigma_p: {decreasing}; tau(theta) even and increasing: {tilt}"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for id in [3, 7, 8, 9] {
            let r = run(id);
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn unknown_criterion_fails_cleanly() {
        assert!(!run(42).passed);
    }
}
