//! Postselection collapse of the meter state and both pointer shifts.
//!
//! After `N` interactions and an initial phase length `γ`, projecting the
//! polarization onto the postselected state leaves the spectrum
//!
//! ```text
//! D(p) = Ω(p)/2 · {1 - cos[p(Nk + γ) + 2ρ]}
//! ```
//!
//! Three routes compute its consequences:
//!
//! * quadrature of `D` on a momentum grid, for any spectral shape
//!   ([`collapsed_density`]);
//! * closed forms for a Gaussian `Ω` of standard deviation `σ_p`
//!   ([`postselection_probability_gaussian`], [`pointer_shift_p_gaussian`]),
//!   which also cover the monochromatic limit `σ_p = 0`;
//! * linear-regime approximations valid for `k p₀/2 ≪ ρ ≪ 1`.
//!
//! [`oracle_joint_state`] rebuilds `D` from the joint system-meter state,
//! amplitude by amplitude, and exists to cross-check the formula route.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{cos, cot, exp, expm1, half_one_minus_cos, one_minus_cos, sin, sqrt, TAU};
use crate::polarization::{postselection_state, preselection_state, MwiSettings};
use crate::quadrature::simpson_strided;
use crate::spectra::{build_grid, effective_sigma_p, GridSpec, MomentumGrid, SpectralProfile};
use crate::{Error, Result};

/// Relative agreement required between a grid and its half-resolution rule.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// The postselected meter state.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseResult {
    /// `D(p)` on the grid of the initial density.
    pub density: MomentumGrid,
    /// `∫D / ∫Ω`.
    pub postselection_probability: f64,
    /// Mean momentum of `D` minus `p₀`, rad/m.
    pub delta_p: f64,
    /// `-(λ₀²/2π)·Δp`, meters.
    pub delta_lambda: f64,
}

/// The detected intensity after postselection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityResult {
    pub intensity: f64,
    /// Intensity at `k = 0` with the same `ρ` and `γ`.
    pub baseline: f64,
    /// `(I - I^{k=0}) / I^{k=0}`.
    pub relative_shift: f64,
}

/// `exp(-σ_p² L² / 2)`: the fringe visibility of a Gaussian spectrum of
/// standard deviation `σ_p` over a phase length `L`.
pub fn coherence_envelope(sigma_p: f64, length: f64) -> f64 {
    let a = sigma_p * length;
    exp(-0.5 * a * a)
}

fn delta_lambda_from(delta_p: f64, center_momentum: f64) -> f64 {
    let l0 = TAU / center_momentum;
    -(l0 * l0 / TAU) * delta_p
}

/// Applies the collapse formula to a grid carrying the initial density `Ω`.
pub fn collapse_on_grid(grid: &MomentumGrid, settings: &MwiSettings) -> CollapseResult {
    let length = settings.phase_length();
    let two_rho = 2.0 * settings.rho();
    let density: Vec<f64> = grid
        .points
        .iter()
        .zip(&grid.density)
        .map(|(&p, &omega)| omega * half_one_minus_cos(p * length + two_rho))
        .collect();
    finish(grid, density)
}

fn finish(initial: &MomentumGrid, density: Vec<f64>) -> CollapseResult {
    let init_norm = initial.integral();
    let collapsed = initial.with_density(density);
    let norm = collapsed.integral();
    let delta_p = if norm > 0.0 {
        collapsed.first_moment() / norm
    } else {
        0.0
    };
    CollapseResult {
        postselection_probability: norm / init_norm,
        delta_p,
        delta_lambda: delta_lambda_from(delta_p, initial.center),
        density: collapsed,
    }
}

/// Collapsed density with the default [`GridSpec`].
pub fn collapsed_density(
    profile: &SpectralProfile,
    settings: &MwiSettings,
) -> Result<CollapseResult> {
    collapsed_density_with(profile, settings, &GridSpec::default())
}

/// Collapsed density, doubling the grid until the Simpson integral and first
/// moment agree with the half-resolution rule to [`QUADRATURE_TOL`].
pub fn collapsed_density_with(
    profile: &SpectralProfile,
    settings: &MwiSettings,
    spec: &GridSpec,
) -> Result<CollapseResult> {
    let sigma_p = effective_sigma_p(profile);
    let mut spec = *spec;
    loop {
        let grid = build_grid(profile, settings, &spec)?;
        let result = collapse_on_grid(&grid, settings);
        let d = &result.density;
        let weighted: Vec<f64> = d
            .offsets
            .iter()
            .zip(&d.density)
            .map(|(x, v)| x * v)
            .collect();
        let fine_norm = d.integral();
        let fine_m1 = d.first_moment();
        let coarse_norm = simpson_strided(&d.density, d.step, 2);
        let coarse_m1 = simpson_strided(&weighted, d.step, 2);
        let norm_ok = (fine_norm - coarse_norm).abs() <= QUADRATURE_TOL * fine_norm;
        let m1_ok = (fine_m1 - coarse_m1).abs() <= QUADRATURE_TOL * sigma_p * fine_norm;
        if !(result.delta_p.is_finite() && result.postselection_probability.is_finite()) {
            return Err(Error::NonFinite {
                what: "collapsed density",
            });
        }
        if norm_ok && m1_ok {
            return Ok(result);
        }
        let next = grid.intervals() * 2;
        if next > spec.max_intervals {
            return Err(Error::NotConverged {
                intervals: grid.intervals(),
            });
        }
        spec.min_intervals = next;
    }
}

/// `½[1 - e^{-σ_p²L²/2} cos(p₀L + 2ρ)]` with `L = Nk + γ`.
///
/// `σ_p = 0` gives the monochromatic probability `sin²(p₀L/2 + ρ)`.
pub fn postselection_probability_gaussian(sigma_p: f64, p0: f64, settings: &MwiSettings) -> f64 {
    let length = settings.phase_length();
    let a = sigma_p * length;
    let half_a2 = 0.5 * a * a;
    let envelope = exp(-half_a2);
    let x = p0 * length + 2.0 * settings.rho();
    // 1 - E cos x = (1 - E) + E (1 - cos x)
    0.5 * (-expm1(-half_a2) + envelope * one_minus_cos(x))
}

/// Mean-momentum shift for a Gaussian spectrum:
/// `σ_p² L e^{-σ_p²L²/2} sin(p₀L + 2ρ) / (2P)`.
pub fn pointer_shift_p_gaussian(sigma_p: f64, p0: f64, settings: &MwiSettings) -> Result<f64> {
    if sigma_p <= 0.0 {
        return Err(Error::NoPointerShift);
    }
    let length = settings.phase_length();
    let prob = postselection_probability_gaussian(sigma_p, p0, settings);
    let num = sigma_p
        * sigma_p
        * length
        * coherence_envelope(sigma_p, length)
        * sin(p0 * length + 2.0 * settings.rho());
    Ok(num / (2.0 * prob))
}

/// Linear-regime P-pointer shift `k σ_p² N cot ρ`.
pub fn pointer_shift_p_approx(sigma_p: f64, settings: &MwiSettings) -> f64 {
    settings.k() * (sigma_p * sigma_p) * settings.n_interactions() as f64 * cot(settings.rho())
}

/// Postselection probability for any profile: closed form for monochromatic
/// sources, quadrature otherwise.
pub fn postselection_probability(profile: &SpectralProfile, settings: &MwiSettings) -> Result<f64> {
    if profile.is_monochromatic() {
        Ok(postselection_probability_gaussian(
            0.0,
            profile.center_momentum(),
            settings,
        ))
    } else {
        Ok(collapsed_density(profile, settings)?.postselection_probability)
    }
}

/// `I = I_init · P` for a Gaussian (or, with `σ_p = 0`, monochromatic) source.
pub fn intensity_after_postselection(
    i_init: f64,
    sigma_p: f64,
    p0: f64,
    settings: &MwiSettings,
) -> Result<IntensityResult> {
    if !(i_init.is_finite() && i_init > 0.0) {
        return Err(Error::Domain {
            what: "initial intensity",
            value: i_init,
        });
    }
    let baseline_settings = settings.with_k(0.0)?;
    let intensity = i_init * postselection_probability_gaussian(sigma_p, p0, settings);
    let baseline = i_init * postselection_probability_gaussian(sigma_p, p0, &baseline_settings);
    Ok(IntensityResult {
        intensity,
        baseline,
        relative_shift: (intensity - baseline) / baseline,
    })
}

/// Linear-regime I-pointer shift `e^{-σ_p²(Nk)²/2} p₀ k N cot ρ`.
pub fn intensity_shift_approx(sigma_p: f64, p0: f64, settings: &MwiSettings) -> f64 {
    let n = settings.n_interactions() as f64;
    let k = settings.k();
    coherence_envelope(sigma_p, n * k) * p0 * k * n * cot(settings.rho())
}

/// Phase factors of one coupling `exp[i(L/2) Â p]` on `|H>` and `|V>`.
fn coupling(p: f64, length: f64) -> [Complex64; 2] {
    let half = 0.5 * p * length;
    let (s, c) = (sin(half), cos(half));
    [Complex64::new(c, s), Complex64::new(c, -s)]
}

/// Brute-force collapse: builds the discretized joint state
/// `(e^{ipγ/2}|H> + e^{-ipγ/2}|V>)/√2 ⊗ √Ω(p)`, applies the single coupling
/// `N` times, projects onto the postselected state and squares.
///
/// `grid` must carry the initial density `Ω`.
pub fn oracle_joint_state(
    profile: &SpectralProfile,
    settings: &MwiSettings,
    grid: &MomentumGrid,
) -> Result<CollapseResult> {
    if profile.is_monochromatic() {
        return Err(Error::MonochromaticGrid);
    }
    let pre = preselection_state();
    let post = postselection_state(settings.rho())?;
    let k = settings.k();
    let gamma = settings.gamma();
    let density: Vec<f64> = grid
        .points
        .iter()
        .zip(&grid.density)
        .map(|(&p, &omega)| {
            let amp = sqrt(omega);
            let mut ket = [pre.amp_h() * amp, pre.amp_v() * amp];
            let bias = coupling(p, gamma);
            ket[0] *= bias[0];
            ket[1] *= bias[1];
            let step = coupling(p, k);
            for _ in 0..settings.n_interactions() {
                ket[0] *= step[0];
                ket[1] *= step[1];
            }
            post.bra(ket).norm_sqr()
        })
        .collect();
    Ok(finish(grid, density))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;
    use proptest::prelude::*;

    const NM: f64 = 1e-9;
    const L0: f64 = 1550.0 * NM;
    // Rounded inputs used by the worked examples.
    const SP: f64 = 1.5688e4;
    const P0: f64 = 4.0537e6;

    fn settings(n: u32, k: f64, gamma: f64, rho: f64) -> MwiSettings {
        MwiSettings::new(n, k, gamma, rho).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn zero_coupling_scales_spectrum_by_sin_squared() {
        let prof = SpectralProfile::gaussian(L0, 6.0 * NM).unwrap();
        let s = settings(1, 0.0, 0.0, 0.002);
        let r = collapsed_density(&prof, &s).unwrap();
        let s2 = sin(0.002) * sin(0.002);
        assert!(rel(r.postselection_probability, s2) < 1e-12);
        assert!(r.delta_p.abs() < 1e-9);
        let grid = build_grid(&prof, &s, &GridSpec::default()).unwrap();
        for (d, phi) in r.density.density.iter().zip(&grid.density) {
            assert!((d - phi * s2).abs() <= 1e-12 * phi * s2 + 1e-300);
        }
    }

    #[test]
    fn quadrature_shift_example() {
        // mpmath, exact Gaussian algebra, σ_λ = 6 nm: Δp = 0.36822032760525
        let prof = SpectralProfile::gaussian(L0, 6.0 * NM).unwrap();
        let r = collapsed_density(&prof, &settings(1, 3e-12, 0.0, 0.002)).unwrap();
        assert!(
            rel(r.delta_p, 0.368_220_327_605_251_6) < 1e-6,
            "{}",
            r.delta_p
        );
        let l0sq_over_2pi = L0 * L0 / TAU;
        assert!(rel(r.delta_lambda, -l0sq_over_2pi * r.delta_p) < 1e-15);
        // N = 3, k = 3e-10: P = 1.4624106176627e-5
        let r = collapsed_density(&prof, &settings(3, 3e-10, 0.0, 0.002)).unwrap();
        assert!(rel(r.postselection_probability, 1.462_410_617_662_747e-5) < 1e-9);
    }

    #[test]
    fn gaussian_probability_examples() {
        let s = settings(1, 0.0, 0.0, 0.002);
        let p = postselection_probability_gaussian(SP, P0, &s);
        assert!(rel(p, sin(0.002) * sin(0.002)) < 1e-14);
        let s = settings(3, 3e-10, 0.0, 0.002);
        assert!(
            rel(
                postselection_probability_gaussian(SP, P0, &s),
                1.462_421_649_441_331e-5
            ) < 1e-12
        );
        assert!(
            rel(
                postselection_probability_gaussian(0.0, P0, &s),
                1.462_416_665_791_883e-5
            ) < 1e-12
        );
    }

    #[test]
    fn gaussian_shift_examples() {
        assert_eq!(
            pointer_shift_p_gaussian(SP, P0, &settings(1, 0.0, 0.0, 0.002)).unwrap(),
            0.0
        );
        let s = settings(1, 3e-12, 0.0, 0.002);
        let exact = pointer_shift_p_gaussian(SP, P0, &s).unwrap();
        let approx = pointer_shift_p_approx(SP, &s);
        assert!(rel(exact, 0.368_050_545_851_533_5) < 1e-10);
        assert!(rel(approx, 0.369_169_523_773_180_7) < 1e-12);
        assert!(rel(approx, exact) < 0.01);

        let s = settings(3, 3e-10, 0.0, 0.002);
        let exact = pointer_shift_p_gaussian(SP, P0, &s).unwrap();
        let approx = pointer_shift_p_approx(SP, &s);
        assert!(rel(exact, 57.921_186_710_984_81) < 1e-10);
        assert!(rel(approx, 110.750_857_131_954_2) < 1e-12);
        assert!(rel(approx, exact) > 0.5);

        assert_eq!(
            pointer_shift_p_gaussian(0.0, P0, &s),
            Err(Error::NoPointerShift)
        );
    }

    #[test]
    fn approx_shift_is_quadratic_in_width() {
        let s = settings(2, 7e-12, 0.0, 0.01);
        assert_eq!(
            pointer_shift_p_approx(SP, &settings(1, 0.0, 0.0, 0.002)),
            0.0
        );
        assert_eq!(
            pointer_shift_p_approx(2.0 * SP, &s),
            4.0 * pointer_shift_p_approx(SP, &s)
        );
    }

    #[test]
    fn intensity_examples() {
        let r = intensity_after_postselection(1.0, 0.0, P0, &settings(1, 0.0, 0.0, 0.002)).unwrap();
        assert_eq!(r.relative_shift, 0.0);

        let s = settings(1, 3e-12, 0.0, 0.002);
        let r = intensity_after_postselection(1.0, 0.0, P0, &s).unwrap();
        assert!(rel(r.relative_shift, 6.089_785_102_901_668e-3) < 1e-8);
        let approx = intensity_shift_approx(0.0, P0, &s);
        assert!(rel(approx, 6.080_541_892_597_838e-3) < 1e-12);
        assert!(rel(approx, r.relative_shift) < 0.01);
        assert!(((r.intensity - r.baseline) / r.baseline - r.relative_shift).abs() < 1e-12);

        let s = settings(3, 3e-10, 0.0, 0.002);
        let r = intensity_after_postselection(2.5, 0.0, P0, &s).unwrap();
        assert!(rel(r.relative_shift, 2.656_046_539_205_826) < 1e-9);
        assert!(rel(intensity_shift_approx(0.0, P0, &s), 1.824_162_567_779_351) < 1e-12);

        assert!(intensity_after_postselection(0.0, 0.0, P0, &s).is_err());
    }

    #[test]
    fn intensity_shift_approx_decreases_with_width() {
        let s = settings(3, 2e-10, 0.0, 0.002);
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let v = intensity_shift_approx(i as f64 * 2e4, P0, &s);
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn oracle_matches_formula() {
        let prof = SpectralProfile::gaussian(L0, 6.0 * NM).unwrap();
        let s = settings(2, 1e-11, 0.0, 0.005);
        let grid = build_grid(&prof, &s, &GridSpec::default()).unwrap();
        let a = collapse_on_grid(&grid, &s);
        let b = oracle_joint_state(&prof, &s, &grid).unwrap();
        let peak = a.density.density.iter().cloned().fold(0.0, f64::max);
        for (x, y) in a.density.density.iter().zip(&b.density.density) {
            if *x > 1e-15 * peak {
                assert!((x - y).abs() <= 1e-10 * x);
            }
        }
    }

    #[test]
    fn oracle_composes_interactions() {
        let prof = SpectralProfile::supergaussian(L0, 3.0 * NM, 6).unwrap();
        let p0 = prof.center_momentum();
        let twice = settings(2, 1e-11, 1.9 * PI / p0, 0.002);
        let once = settings(1, 2e-11, 1.9 * PI / p0, 0.002);
        let grid = build_grid(&prof, &twice, &GridSpec::default()).unwrap();
        let a = oracle_joint_state(&prof, &twice, &grid).unwrap();
        let b = oracle_joint_state(&prof, &once, &grid).unwrap();
        let peak = a.density.density.iter().cloned().fold(0.0, f64::max);
        for (x, y) in a.density.density.iter().zip(&b.density.density) {
            if *x > 1e-15 * peak {
                assert!((x - y).abs() <= 1e-14 * x, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn oracle_zero_coupling() {
        let prof = SpectralProfile::gaussian(L0, 1.0 * NM).unwrap();
        let s = settings(1, 0.0, 0.0, 0.01);
        let grid = build_grid(&prof, &s, &GridSpec::default()).unwrap();
        let r = oracle_joint_state(&prof, &s, &grid).unwrap();
        let s2 = sin(0.01) * sin(0.01);
        for (d, phi) in r.density.density.iter().zip(&grid.density) {
            assert!((d - phi * s2).abs() <= 1e-12 * phi * s2 + 1e-300);
        }
        let mono = SpectralProfile::monochromatic(L0).unwrap();
        assert!(oracle_joint_state(&mono, &s, &grid).is_err());
        assert!(collapsed_density(&mono, &s).is_err());
    }

    #[test]
    fn probability_dispatch() {
        let s = settings(3, 3e-10, 0.0, 0.002);
        let mono = SpectralProfile::monochromatic(L0).unwrap();
        let p = postselection_probability(&mono, &s).unwrap();
        assert_eq!(
            p,
            postselection_probability_gaussian(0.0, mono.center_momentum(), &s)
        );
        let g = SpectralProfile::gaussian(L0, 6.0 * NM).unwrap();
        let q = postselection_probability(&g, &s).unwrap();
        let closed =
            postselection_probability_gaussian(effective_sigma_p(&g), g.center_momentum(), &s);
        assert!(rel(q, closed) < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn collapsed_density_bounded(
            width_nm in 0.3f64..20.0,
            n in 1u32..=3,
            k in -3e-10f64..3e-10,
            rho in 1e-3f64..1.0,
            gamma_pi in 0.0f64..2.0,
        ) {
            let prof = SpectralProfile::supergaussian(L0, width_nm * NM, 6).unwrap();
            let p0 = prof.center_momentum();
            let s = settings(n, k, gamma_pi * PI / p0, rho);
            let grid = build_grid(&prof, &s, &GridSpec::default()).unwrap();
            let r = collapse_on_grid(&grid, &s);
            prop_assert!((0.0..=1.0).contains(&r.postselection_probability));
            for (d, phi) in r.density.density.iter().zip(&grid.density) {
                prop_assert!(*d >= 0.0 && *d <= *phi);
            }
            prop_assert!((r.postselection_probability - r.density.integral() / grid.integral()).abs() < 1e-9);
            let pg = postselection_probability_gaussian(effective_sigma_p(&prof), p0, &s);
            prop_assert!((0.0..=1.0).contains(&pg));
        }
    }
}
