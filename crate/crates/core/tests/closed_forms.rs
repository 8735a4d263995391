use wva_core::{
    collapsed_density, effective_sigma_p, pointer_shift_p_gaussian,
    postselection_probability_gaussian, MwiSettings, SpectralProfile,
};

const L0: f64 = 1550e-9;
const NM: f64 = 1e-9;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn gaussian_quadrature_matches_closed_forms() {
    for width_nm in [0.5, 1.0, 3.0, 6.0, 20.0] {
        let prof = SpectralProfile::gaussian(L0, width_nm * NM).unwrap();
        let sp = effective_sigma_p(&prof);
        let p0 = prof.center_momentum();
        for n in 1..=3 {
            for k in [1e-12, 3e-12, 1e-11, 3e-10] {
                for rho in [0.002, 0.01, 0.1] {
                    let s = MwiSettings::new(n, k, 0.0, rho).unwrap();
                    let q = collapsed_density(&prof, &s).unwrap();
                    let dp = pointer_shift_p_gaussian(sp, p0, &s).unwrap();
                    let prob = postselection_probability_gaussian(sp, p0, &s);
                    assert!(
                        rel(q.delta_p, dp) <= 1e-6,
                        "dp {width_nm} nm N={n} k={k} rho={rho}: {} vs {dp}",
                        q.delta_p
                    );
                    assert!(
                        rel(q.postselection_probability, prob) <= 1e-9,
                        "P {width_nm} nm N={n} k={k} rho={rho}"
                    );
                }
            }
        }
    }
}

#[test]
fn wavelength_shift_has_opposite_sign_to_momentum_shift() {
    let prof = SpectralProfile::gaussian(L0, 6.0 * NM).unwrap();
    let s = MwiSettings::new(1, 3e-12, 0.0, 0.002).unwrap();
    let q = collapsed_density(&prof, &s).unwrap();
    assert!(q.delta_p > 0.0);
    let expect = -L0 * L0 / (2.0 * std::f64::consts::PI) * q.delta_p;
    assert!(rel(q.delta_lambda, expect) < 1e-12);
}
