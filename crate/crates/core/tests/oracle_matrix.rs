use std::f64::consts::PI;

use wva_core::{
    build_grid, collapse_on_grid, collapsed_density, oracle_joint_state, GridSpec, MwiSettings,
    SpectralProfile,
};

const L0: f64 = 1550e-9;
const NM: f64 = 1e-9;

fn profiles() -> Vec<(&'static str, SpectralProfile)> {
    vec![
        ("gaussian", SpectralProfile::gaussian(L0, 6.0 * NM).unwrap()),
        (
            "supergaussian",
            SpectralProfile::supergaussian(L0, 6.0 * NM, 6).unwrap(),
        ),
        (
            "rectangular",
            SpectralProfile::rectangular(L0, 6.0 * NM).unwrap(),
        ),
    ]
}

fn max_relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    let peak = a.iter().cloned().fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .filter(|(x, _)| **x > 1e-15 * peak)
        .map(|(x, y)| (x - y).abs() / x)
        .fold(0.0, f64::max)
}

#[test]
fn joint_state_matches_closed_density_over_matrix() {
    let mut cases = 0;
    for (name, prof) in profiles() {
        let p0 = prof.center_momentum();
        for n in 1..=3 {
            for k in [0.0, 1e-12, 1e-10] {
                for rho in [0.002, 0.01, 0.1] {
                    for gamma in [0.0, 1.9 * PI / p0] {
                        let s = MwiSettings::new(n, k, gamma, rho).unwrap();
                        let grid = build_grid(&prof, &s, &GridSpec::default()).unwrap();
                        let direct = collapse_on_grid(&grid, &s);
                        let oracle = oracle_joint_state(&prof, &s, &grid).unwrap();
                        let dev = max_relative_deviation(
                            &direct.density.density,
                            &oracle.density.density,
                        );
                        assert!(
                            dev <= 1e-10,
                            "{name} N={n} k={k} rho={rho} gamma={gamma}: {dev}"
                        );
                        cases += 1;
                    }
                }
            }
        }
    }
    assert_eq!(cases, 162);
}

#[test]
fn refined_density_matches_oracle_on_its_own_grid() {
    let prof = SpectralProfile::supergaussian(L0, 3.0 * NM, 6).unwrap();
    let s = MwiSettings::new(2, 1e-11, 0.0, 0.005).unwrap();
    let refined = collapsed_density(&prof, &s).unwrap();
    let spec = GridSpec {
        min_intervals: refined.density.intervals(),
        ..GridSpec::default()
    };
    let grid = build_grid(&prof, &s, &spec).unwrap();
    assert_eq!(grid.points, refined.density.points);
    let oracle = oracle_joint_state(&prof, &s, &grid).unwrap();
    assert!(max_relative_deviation(&refined.density.density, &oracle.density.density) <= 1e-10);
    let rel_p = (oracle.postselection_probability - refined.postselection_probability).abs()
        / refined.postselection_probability;
    assert!(rel_p <= 1e-10);
}

#[test]
fn zero_coupling_gives_uniform_suppression() {
    let rho: f64 = 0.01;
    for (_, prof) in profiles() {
        let s = MwiSettings::new(1, 0.0, 0.0, rho).unwrap();
        let grid = build_grid(&prof, &s, &GridSpec::default()).unwrap();
        let oracle = oracle_joint_state(&prof, &s, &grid).unwrap();
        let expect = rho.sin().powi(2);
        for (d, phi) in oracle.density.density.iter().zip(&grid.density) {
            assert!((d - phi * expect).abs() <= 1e-12 * phi * expect + 1e-300);
        }
        assert!((oracle.postselection_probability - expect).abs() <= 1e-12 * expect);
    }
}
