//! Numerical model of dual-pointer weak-value amplification with multiple
//! weak interactions.
//!
//! A polarization qubit prepared in `(|H> + |V>)/√2` is coupled `N` times to
//! the momentum spectrum of a light pulse, then postselected onto a state
//! nearly orthogonal to the preparation. The collapsed spectrum carries two
//! pointers: the mean momentum (P pointer) and the total intensity
//! (I pointer). This crate computes both, their closed forms, the
//! precisions they support, and the reduced Leggett-Garg quantity `K31`.
//!
//! The crate is `no_std` and only needs `alloc` for momentum grids.
//! Everything is SI: momenta are angular wavenumbers in rad/m, interaction
//! strengths and phase lengths are in meters.
//!
//! | module | contents |
//! |---|---|
//! | [`polarization`] | pre/postselected states, `Â`, weak values |
//! | [`spectra`] | spectral profiles, `λ ↔ p`, momentum grids |
//! | [`quadrature`] | composite Simpson weights |
//! | [`meter`] | collapse of the meter state, both pointer shifts, joint-state oracle |
//! | [`metrology`] | tilt → time difference, shift rates, precisions, SNR |
//! | [`lgi`] | `K31`, quantum-effect region, weak value from a measured shift |

#![no_std]

extern crate alloc;

mod error;
pub mod lgi;
pub mod math;
pub mod meter;
pub mod metrology;
pub mod polarization;
pub mod quadrature;
pub mod spectra;

pub use error::{Error, Result};
pub use lgi::{k31, quantum_region_boundary, weak_value_from_shift, K31Mode, LgiPoint};
pub use meter::{
    coherence_envelope, collapse_on_grid, collapsed_density, collapsed_density_with,
    intensity_after_postselection, intensity_shift_approx, oracle_joint_state,
    pointer_shift_p_approx, pointer_shift_p_gaussian, postselection_probability,
    postselection_probability_gaussian, CollapseResult, IntensityResult,
};
pub use metrology::{
    k_from_tau, precision, shift_rate, snr_db, tau_from_k, tau_from_tilt, try_shift_rate,
    InstrumentModel, Pointer, PrecisionReport, RateEstimate, TiltGeometry, SPEED_OF_LIGHT,
};
pub use polarization::{
    postselection_state, preselection_state, weak_value, MwiSettings, PauliObservable,
    PolarizationState, WeakValue,
};
pub use spectra::{
    build_grid, effective_sigma_p, lambda_p_convert, Conversion, GridSpec, MomentumGrid, Shape,
    SpectralProfile, WidthConvention,
};
