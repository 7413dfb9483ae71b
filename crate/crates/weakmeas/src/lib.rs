//! Pointer statistics for post-selected weak measurements of involutory
//! observables.
//!
//! A detector in a Gaussian state is coupled weakly to a two-level system
//! through e^(-i g A p) with A^2 = 1, and the system is then post-selected.
//! Because the coupling exponent squares to a scalar, every post-selected
//! pointer statistic has an exact closed form at any coupling strength.
//! This crate provides those closed forms, two independent numerical
//! routes that check them (an exact grid simulation of the full chain and
//! a truncated operator-series evaluation), the spin-1/2 and Sagnac
//! geometries that realize them, optimal working points, and Monte Carlo
//! sampling utilities for signal-to-noise experiments.
//!
//! Everything works in the dimensionless pair u = g p, v = q / g and the
//! strength parameter s = 2 g^2 <p^2>; translating physical units into
//! these combinations is the caller's job.
//!
//! Where the commonly quoted orthogonal-post-selection closed forms
//! conflict with the series route, both values are reported side by side
//! (fields named `_closed` against `_series` or `_grid`) rather than
//! silently reconciled; see [`weak_core::OrthogonalStats`].

pub mod curve;
pub mod ensemble;
pub mod error;
pub mod gaussian_oracle;
pub mod optimize;
pub mod setups;
pub mod tolerances;
pub mod weak_core;

pub use curve::Curve;
pub use ensemble::{
    ks_critical_1pct, ks_statistic, sample_density, snr_scaling, SampleBatch, ScalingRow,
    ScalingTable, SetupPoint,
};
pub use error::{Error, Result};
pub use gaussian_oracle::{
    gaussian_moment_p, initial_wave, mixed_gaussian_moment, oracle_report,
    orthogonal_grid_reference, postselect_wave, series_moments, series_z, series_z_orthogonal,
    to_momentum_space, to_position_space, GridSpec, MixedMomentKind, OracleReport,
    OrthogonalGridRef, SpaceTag, WaveGrid,
};
pub use optimize::{
    aav_optimal_expectation, aav_optimal_snr, argmax_scan, dsjh_global_max,
    dsjh_optimal_expectation, dsjh_optimal_snr, OptimalPoint,
};
pub use setups::{
    aav_closed_forms, aav_density, aav_setup, dsjh_amplification, dsjh_closed_forms,
    dsjh_density, dsjh_setup, setup_with_weak_value, weak_value_of, AavPoint, AavStats,
    DsjhPoint, DsjhStats, PostSelection, TwoLevelSetup,
};
pub use weak_core::{
    density_p_nonorthogonal, density_p_orthogonal, density_q_nonorthogonal,
    density_q_orthogonal, moments_nonorthogonal, moments_orthogonal, orthogonal_weak_value,
    wu_li_shifts, DensityForm, MeasurementPoint, OrthogonalStats, PointerStats, WeakValue,
};
