//! Reduced Leggett-Garg quantity `K31 = 2 P (1 - Im<N Ŝ₂>_w)` for the MWI
//! scheme, the region where it goes negative, and recovery of the weak value
//! from a measured I-pointer shift.

use crate::math::{atan, sin};
use crate::meter::{coherence_envelope, postselection_probability_gaussian};
use crate::polarization::{weak_value, MwiSettings};
use crate::{Error, Result};

/// One evaluated `K31` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgiPoint {
    pub rho: f64,
    pub n_interactions: u32,
    pub k31: f64,
    pub im_weak_value: f64,
}

/// Which postselection probability enters `K31`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum K31Mode {
    /// `P = sin²ρ`.
    Approx,
    /// Full Gaussian probability at interaction strength `k`.
    Exact { sigma_p: f64, p0: f64, k: f64 },
}

/// `K31 = 2P(1 - N cot ρ)`. Negative (a violation) exactly when the weak
/// value is anomalous, `N cot ρ > 1`.
pub fn k31(n_interactions: u32, rho: f64, mode: K31Mode) -> Result<LgiPoint> {
    let im_weak_value = weak_value(n_interactions, rho)?.imag();
    let prob = match mode {
        K31Mode::Approx => {
            let s = sin(rho);
            s * s
        }
        K31Mode::Exact { sigma_p, p0, k } => {
            let settings = MwiSettings::new(n_interactions, k, 0.0, rho)?;
            postselection_probability_gaussian(sigma_p, p0, &settings)
        }
    };
    Ok(LgiPoint {
        rho,
        n_interactions,
        k31: 2.0 * prob * (1.0 - im_weak_value),
        im_weak_value,
    })
}

/// `arctan N`: `K31 < 0` for `ρ` in `(0, arctan N)`.
pub fn quantum_region_boundary(n_interactions: u32) -> f64 {
    atan(n_interactions as f64)
}

/// Inverts the linear I-pointer model `Δℓ = e^{-σ_p²(Nk)²/2} p₀ k Im<N Â>_w`.
pub fn weak_value_from_shift(
    delta_ell: f64,
    k: f64,
    p0: f64,
    sigma_p: f64,
    n_interactions: u32,
) -> Result<f64> {
    if k == 0.0 {
        return Err(Error::ZeroInteraction);
    }
    let envelope = coherence_envelope(sigma_p, n_interactions as f64 * k);
    Ok(delta_ell / (envelope * p0 * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{FRAC_PI_2, PI};
    use crate::meter::intensity_shift_approx;
    use proptest::prelude::*;

    const P0: f64 = 4.0537e6;

    #[test]
    fn k31_examples() {
        let p = k31(1, PI / 4.0, K31Mode::Approx).unwrap();
        assert!(p.k31.abs() < 1e-15);
        let p = k31(3, 0.0124, K31Mode::Approx).unwrap();
        assert!((p.k31 - -0.074_084_869_499_628_51).abs() < 1e-12);
        assert!((p.im_weak_value - 241.923_083_743_857_6).abs() < 1e-9);
        let p = k31(1, 0.002, K31Mode::Approx).unwrap();
        assert!((p.k31 - -3.991_989_344_008_528e-3).abs() < 1e-15);
        assert_eq!(
            k31(1, 0.0, K31Mode::Approx),
            Err(Error::SingularPostselection)
        );
    }

    #[test]
    fn boundary_examples() {
        assert!((quantum_region_boundary(1) - PI / 4.0).abs() < 1e-15);
        assert!((quantum_region_boundary(3) - 1.249_045_772_398_254_4).abs() < 1e-15);
        assert!(quantum_region_boundary(3) > quantum_region_boundary(2));
        assert!(quantum_region_boundary(2) > quantum_region_boundary(1));
    }

    #[test]
    fn negativity_region_by_scan() {
        let steps = 20_000;
        let step = (FRAC_PI_2 - 1e-6) / steps as f64;
        for n in 1..=3 {
            let mut last_negative = 0.0;
            for i in 1..steps {
                let rho = i as f64 * step;
                let p = k31(n, rho, K31Mode::Approx).unwrap();
                if p.k31 < 0.0 {
                    last_negative = rho;
                }
                assert_eq!(p.k31 < 0.0, p.im_weak_value > 1.0);
            }
            assert!((last_negative - quantum_region_boundary(n)).abs() <= step);
        }
    }

    #[test]
    fn weak_value_from_shift_examples() {
        assert_eq!(weak_value_from_shift(0.0, 3e-12, P0, 0.0, 1).unwrap(), 0.0);
        // 0.018242 / (4.0537e6 · 3e-12) = 1500.02878
        let w = weak_value_from_shift(0.018242, 3e-12, P0, 0.0, 1).unwrap();
        assert!((w - 1_500.028_780_291_256_5).abs() < 1e-6);
        assert_eq!(
            weak_value_from_shift(0.1, 0.0, P0, 0.0, 1),
            Err(Error::ZeroInteraction)
        );
    }

    #[test]
    fn exact_mode_tracks_first_order_correction() {
        // relative gap between the two modes is the I-pointer shift itself
        let (n, rho, k) = (3, 0.002, 1e-14);
        let a = k31(n, rho, K31Mode::Approx).unwrap().k31;
        let e = k31(
            n,
            rho,
            K31Mode::Exact {
                sigma_p: 1.5688e4,
                p0: P0,
                k,
            },
        )
        .unwrap()
        .k31;
        let gap = (e - a) / a;
        let dl = intensity_shift_approx(1.5688e4, P0, &MwiSettings::new(n, k, 0.0, rho).unwrap());
        assert!((gap - dl).abs() < 1e-3 * dl);
    }

    proptest! {
        #[test]
        fn round_trip(n in 1u32..=3, rho in 0.002f64..0.0124, k in 1e-13f64..1e-11, sp in 0.0f64..2e4) {
            let s = MwiSettings::new(n, k, 0.0, rho).unwrap();
            let dl = intensity_shift_approx(sp, P0, &s);
            let w = weak_value_from_shift(dl, k, P0, sp, n).unwrap();
            let expect = weak_value(n, rho).unwrap().imag();
            prop_assert!((w - expect).abs() <= 1e-9 * expect);
        }

        #[test]
        fn modes_agree_deep_in_linear_regime(n in 1u32..=3, rho in 0.002f64..0.5) {
            // N p₀ k ≤ 1e-7 tan ρ keeps the first-order gap below 1e-6
            let k = 1e-7 * rho.tan() / (n as f64 * P0);
            let a = k31(n, rho, K31Mode::Approx).unwrap().k31;
            let e = k31(n, rho, K31Mode::Exact { sigma_p: 1.5688e4, p0: P0, k }).unwrap().k31;
            prop_assert!((e - a).abs() <= 1e-6 * a.abs());
        }
    }
}
