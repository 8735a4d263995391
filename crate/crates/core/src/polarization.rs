//! Two-level polarization algebra: the preselected and postselected states,
//! the observable `Â = |H><H| - |V><V|`, and weak values for `N`
//! interactions.

use num_complex::Complex64;

use crate::math::{cos, cot, sin, sqrt, FRAC_1_SQRT_2, FRAC_PI_2};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Normalized polarization amplitude on the `{|H>, |V>}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    amp_h: Complex64,
    amp_v: Complex64,
}

impl PolarizationState {
    /// Rejects amplitudes whose squared norm differs from one by more than `1e-12`.
    pub fn new(amp_h: Complex64, amp_v: Complex64) -> Result<Self> {
        let norm = amp_h.norm_sqr() + amp_v.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain {
                what: "state norm",
                value: norm,
            });
        }
        Ok(Self { amp_h, amp_v })
    }

    pub fn horizontal() -> Self {
        Self {
            amp_h: Complex64::new(1.0, 0.0),
            amp_v: Complex64::new(0.0, 0.0),
        }
    }

    pub fn vertical() -> Self {
        Self {
            amp_h: Complex64::new(0.0, 0.0),
            amp_v: Complex64::new(1.0, 0.0),
        }
    }

    pub fn amp_h(&self) -> Complex64 {
        self.amp_h
    }

    pub fn amp_v(&self) -> Complex64 {
        self.amp_v
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.amp_h, self.amp_v]
    }

    /// `<self|ket>` for an arbitrary (not necessarily normalized) ket.
    pub fn bra(&self, ket: [Complex64; 2]) -> Complex64 {
        self.amp_h.conj() * ket[0] + self.amp_v.conj() * ket[1]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PolarizationState) -> Complex64 {
        self.bra(other.as_array())
    }

    /// `|<self|other>|²`.
    pub fn overlap_probability(&self, other: &PolarizationState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp_h.norm_sqr() + self.amp_v.norm_sqr()
    }
}

/// `(|H> + |V>)/√2`.
pub fn preselection_state() -> PolarizationState {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PolarizationState { amp_h: a, amp_v: a }
}

/// `(e^{-iρ}|H> - e^{iρ}|V>)/√2`. Its squared overlap with the preselection
/// is `sin²ρ`.
///
/// `rho = 0` is accepted (the exactly orthogonal limit); anything outside
/// `[0, π/2)` is a domain error.
pub fn postselection_state(rho: f64) -> Result<PolarizationState> {
    if !(0.0..FRAC_PI_2).contains(&rho) {
        return Err(Error::Domain {
            what: "postselection angle",
            value: rho,
        });
    }
    let (s, c) = (sin(rho), cos(rho));
    Ok(PolarizationState {
        amp_h: Complex64::new(c, -s) * FRAC_1_SQRT_2,
        amp_v: Complex64::new(-c, -s) * FRAC_1_SQRT_2,
    })
}

/// A 2×2 Hermitian operator on the polarization space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliObservable {
    m: [[Complex64; 2]; 2],
}

impl PauliObservable {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let obs = Self { m };
        if !obs.is_hermitian(1e-12) {
            return Err(Error::Domain {
                what: "non-Hermitian observable, |m01 - conj(m10)|",
                value: (m[0][1] - m[1][0].conj()).norm(),
            });
        }
        Ok(obs)
    }

    /// `Â = |H><H| - |V><V|`.
    pub fn observable_a() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, -one]],
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let m = &self.m;
        m[0][0].im.abs() <= tol
            && m[1][1].im.abs() <= tol
            && (m[0][1] - m[1][0].conj()).norm() <= tol
    }

    /// Eigenvalues in ascending order, from the trace and determinant.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = self.m[0][1].norm_sqr();
        let half_tr = 0.5 * (a + d);
        let half_gap = 0.5 * (a - d);
        let r = sqrt(half_gap * half_gap + b);
        [half_tr - r, half_tr + r]
    }

    pub fn apply(&self, ket: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.m[0][0] * ket[0] + self.m[0][1] * ket[1],
            self.m[1][0] * ket[0] + self.m[1][1] * ket[1],
        ]
    }

    /// `<f|N·O|i> / <f|i>` evaluated by matrix-vector arithmetic.
    pub fn weak_value_between(
        &self,
        pre: &PolarizationState,
        post: &PolarizationState,
        n_interactions: u32,
    ) -> Result<WeakValue> {
        let denom = post.inner(pre);
        if denom.norm_sqr() == 0.0 {
            return Err(Error::SingularPostselection);
        }
        let num = post.bra(self.apply(pre.as_array())) * n_interactions as f64;
        Ok(WeakValue { value: num / denom })
    }
}

/// Parameters of one MWI configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwiSettings {
    n_interactions: u32,
    k: f64,
    gamma: f64,
    rho: f64,
}

impl MwiSettings {
    /// * `n_interactions` ≥ 1
    /// * `k`: interaction strength `cτ` in meters, any finite sign
    /// * `gamma`: initial phase length in meters, ≥ 0 (phase `γ·p`)
    /// * `rho`: postselection angle in `(0, π/2)`
    pub fn new(n_interactions: u32, k: f64, gamma: f64, rho: f64) -> Result<Self> {
        if n_interactions == 0 {
            return Err(Error::Domain {
                what: "interaction count",
                value: 0.0,
            });
        }
        if !k.is_finite() {
            return Err(Error::Domain {
                what: "interaction strength",
                value: k,
            });
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::Domain {
                what: "initial phase length",
                value: gamma,
            });
        }
        if !(rho > 0.0 && rho < FRAC_PI_2) {
            return Err(Error::Domain {
                what: "postselection angle",
                value: rho,
            });
        }
        Ok(Self {
            n_interactions,
            k,
            gamma,
            rho,
        })
    }

    pub fn n_interactions(&self) -> u32 {
        self.n_interactions
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `N·k + γ`, the total phase length multiplying `p`.
    pub fn phase_length(&self) -> f64 {
        self.n_interactions as f64 * self.k + self.gamma
    }

    /// Same configuration with a different interaction strength.
    pub fn with_k(&self, k: f64) -> Result<Self> {
        Self::new(self.n_interactions, k, self.gamma, self.rho)
    }

    pub fn with_n(&self, n_interactions: u32) -> Result<Self> {
        Self::new(n_interactions, self.k, self.gamma, self.rho)
    }
}

/// A complex weak value `<Â>_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue {
    pub value: Complex64,
}

impl WeakValue {
    pub fn imag(&self) -> f64 {
        self.value.im
    }
}

/// `<N·Â>_w = i·N·cot ρ`.
///
/// The sign is the one for which the P-pointer shift reads
/// `Δp ≈ k σ_p² Im<N·Â>_w` with positive `Im` for `ρ ∈ (0, π/2)`.
/// [`PauliObservable::weak_value_between`] on the stored states uses the
/// Hermitian inner product and returns the complex conjugate of this value.
pub fn weak_value(n_interactions: u32, rho: f64) -> Result<WeakValue> {
    if rho == 0.0 {
        return Err(Error::SingularPostselection);
    }
    if n_interactions == 0 {
        return Err(Error::Domain {
            what: "interaction count",
            value: 0.0,
        });
    }
    if !(rho > 0.0 && rho < FRAC_PI_2) {
        return Err(Error::Domain {
            what: "postselection angle",
            value: rho,
        });
    }
    Ok(WeakValue {
        value: Complex64::new(0.0, n_interactions as f64 * cot(rho)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn preselection_is_balanced() {
        let s = preselection_state();
        assert_eq!(s.amp_h(), Complex64::new(FRAC_1_SQRT_2, 0.0));
        assert_eq!(s.amp_v(), s.amp_h());
        assert!((s.overlap_probability(&s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn postselection_overlaps() {
        let pre = preselection_state();
        let orth = postselection_state(0.0).unwrap();
        assert!(pre.overlap_probability(&orth) < 1e-30);
        assert_eq!(orth.amp_h().re, FRAC_1_SQRT_2);
        assert_eq!(orth.amp_v().re, -FRAC_1_SQRT_2);

        // sin²(0.002) = 3.99999466666951e-6 (mpmath)
        let p = pre.overlap_probability(&postselection_state(0.002).unwrap());
        assert!((p - 3.999_994_666_669_511e-6).abs() < 1e-18);

        let p =
            pre.overlap_probability(&postselection_state(core::f64::consts::FRAC_PI_4).unwrap());
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn postselection_rejects_out_of_range() {
        assert!(postselection_state(-0.1).is_err());
        assert!(postselection_state(FRAC_PI_2).is_err());
        assert!(postselection_state(f64::NAN).is_err());
    }

    #[test]
    fn weak_value_examples() {
        let w = weak_value(1, core::f64::consts::FRAC_PI_4).unwrap();
        assert!(w.value.re == 0.0 && (w.imag() - 1.0).abs() < 1e-15);
        // cot(0.002) = 499.99933333315556
        assert!((weak_value(1, 0.002).unwrap().imag() - 499.999_333_333_155_56).abs() < 1e-9);
        // 3·cot(0.0124) = 241.92308374385761
        assert!((weak_value(3, 0.0124).unwrap().imag() - 241.923_083_743_857_6).abs() < 1e-9);
    }

    #[test]
    fn weak_value_errors() {
        assert_eq!(weak_value(1, 0.0), Err(Error::SingularPostselection));
        assert!(weak_value(0, 0.1).is_err());
        assert!(weak_value(1, 2.0).is_err());
    }

    #[test]
    fn observable_a_is_pauli_z() {
        let a = PauliObservable::observable_a();
        assert!(a.is_hermitian(1e-12));
        assert_eq!(a.eigenvalues(), [-1.0, 1.0]);
    }

    #[test]
    fn non_hermitian_rejected() {
        let z = Complex64::new(0.0, 0.0);
        let m = [[z, Complex64::new(1.0, 0.0)], [Complex64::new(2.0, 0.0), z]];
        assert!(PauliObservable::new(m).is_err());
    }

    #[test]
    fn weak_value_orthogonal_is_singular() {
        let a = PauliObservable::observable_a();
        let post = postselection_state(0.0).unwrap();
        assert_eq!(
            a.weak_value_between(&preselection_state(), &post, 1),
            Err(Error::SingularPostselection)
        );
    }

    #[test]
    fn settings_validation() {
        assert!(MwiSettings::new(0, 0.0, 0.0, 0.1).is_err());
        assert!(MwiSettings::new(1, 0.0, -1e-9, 0.1).is_err());
        assert!(MwiSettings::new(1, 0.0, 0.0, 0.0).is_err());
        assert!(MwiSettings::new(1, f64::INFINITY, 0.0, 0.1).is_err());
        let s = MwiSettings::new(3, -2e-12, 1e-6, 0.002).unwrap();
        assert_eq!(s.phase_length(), 3.0 * -2e-12 + 1e-6);
    }

    proptest! {
        #[test]
        fn weak_value_linear_in_n(n in 1u32..=10, rho in 1e-3f64..1.5) {
            let one = weak_value(1, rho).unwrap().value;
            let many = weak_value(n, rho).unwrap().value;
            prop_assert_eq!(many, one * n as f64);
            prop_assert_eq!(many.re, 0.0);
        }

        #[test]
        fn symbolic_matches_matrix_route(n in 1u32..=10, rho in 1e-3f64..1.5) {
            // Hermitian-inner-product route yields the conjugate convention.
            let symbolic = weak_value(n, rho).unwrap().value.conj();
            let post = postselection_state(rho).unwrap();
            let matrix = PauliObservable::observable_a()
                .weak_value_between(&preselection_state(), &post, n)
                .unwrap()
                .value;
            prop_assert!((matrix - symbolic).norm() <= 1e-10 * symbolic.norm());
            prop_assert!(matrix.re.abs() <= 1e-12 * symbolic.norm().max(1.0));
        }

        #[test]
        fn postselection_probability_is_sin_squared(rho in 0.0f64..1.57) {
            let p = preselection_state().overlap_probability(&postselection_state(rho).unwrap());
            let s = sin(rho);
            prop_assert!((p - s * s).abs() <= 1e-12);
            prop_assert!((postselection_state(rho).unwrap().norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }
}
