//! Exact grid simulation of the pre-select, evolve, post-select chain.
//!
//! The detector wave lives on a uniform momentum grid, the evolution is
//! applied pointwise through the involution identity
//! e^(-i u A) = cos(u) - i sin(u) A, and the conjugate representation is
//! reached by a unitary discrete Fourier transform. Nothing here knows
//! the closed forms; they enter only when a report computes residuals.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::setups::{weak_value_of, PostSelection, TwoLevelSetup};
use crate::tolerances::{self, scaled_residual};
use crate::weak_core::{
    density_p_nonorthogonal, density_p_orthogonal, density_q_nonorthogonal,
    density_q_orthogonal, moments_nonorthogonal, DensityForm, MeasurementPoint,
};

use super::series;

const SQRT_TAU: f64 = 2.506_628_274_631_000_5;

/// Coverage demanded of a grid, in standard deviations of the Gaussian it
/// must hold.
const COVERAGE_SIGMAS: f64 = 12.0;

/// Uniform symmetric grid: `points` samples from -half_width inclusive,
/// spaced 2 half_width / points. The conjugate grid is fixed by the
/// transform pairing and has half-width pi points / (2 half_width).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::GridConfig(format!(
                "grid half-width must be positive and finite, got {half_width}"
            )));
        }
        if points < 256 || !points.is_power_of_two() {
            return Err(Error::GridConfig(format!(
                "grid needs a power-of-two point count of at least 256, got {points}"
            )));
        }
        Ok(Self { half_width, points })
    }

    /// A grid that comfortably holds both representations at coupling s:
    /// 2^15 points over half-width 36 max(sqrt(s), 1).
    pub fn default_for(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Domain(format!(
                "coupling strength s must be positive and finite, got {s}"
            )));
        }
        Self::new(36.0 * s.sqrt().max(1.0), 1 << 15)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step_u(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn step_v(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    pub fn position_half_width(&self) -> f64 {
        0.5 * self.points as f64 * self.step_v()
    }
}

/// Which conjugate representation a [`WaveGrid`] samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceTag {
    Momentum,
    Position,
}

/// A complex wave sampled on one of the two conjugate grids.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveGrid {
    spec: GridSpec,
    tag: SpaceTag,
    values: Vec<Complex64>,
}

impl WaveGrid {
    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        match self.tag {
            SpaceTag::Momentum => self.spec.step_u(),
            SpaceTag::Position => self.spec.step_v(),
        }
    }

    fn start(&self) -> f64 {
        match self.tag {
            SpaceTag::Momentum => -self.spec.half_width,
            SpaceTag::Position => -self.spec.position_half_width(),
        }
    }

    pub fn axis(&self) -> Vec<f64> {
        let (start, step) = (self.start(), self.step());
        (0..self.values.len()).map(|i| start + i as f64 * step).collect()
    }

    pub fn quadrature_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.step()
    }

    /// Quadrature expectation of axis^k against |wave|^2.
    pub fn moment(&self, k: u32) -> f64 {
        let (start, step) = (self.start(), self.step());
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (start + i as f64 * step).powi(k as i32) * v.norm_sqr())
            .sum();
        sum * step
    }

    fn density_curve(&self) -> Result<Curve> {
        Curve::from_samples(self.axis(), self.values.iter().map(|v| v.norm_sqr()).collect())
    }
}

/// Normalized momentum-space Gaussian exp(-u^2/(2s)) on the grid.
pub fn initial_wave(s: f64, spec: GridSpec) -> Result<WaveGrid> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    let sigma_u = (0.5 * s).sqrt();
    if spec.half_width < COVERAGE_SIGMAS * sigma_u {
        return Err(Error::GridConfig(format!(
            "half-width {} holds fewer than {COVERAGE_SIGMAS} deviations of the \
             initial wave (sigma_u = {sigma_u})",
            spec.half_width
        )));
    }
    let norm = (std::f64::consts::PI * s).powf(-0.25);
    let (start, step) = (-spec.half_width, spec.step_u());
    let values = (0..spec.points)
        .map(|i| {
            let u = start + i as f64 * step;
            Complex64::new(norm * (-u * u / (2.0 * s)).exp(), 0.0)
        })
        .collect();
    Ok(WaveGrid {
        spec,
        tag: SpaceTag::Momentum,
        values,
    })
}

/// Apply the full evolve-and-post-select chain to a momentum-space wave.
///
/// Returns the normalized post-selected wave together with the raw
/// post-selection probability (the squared norm before renormalizing).
/// The coupling enters only through the dimensionless abscissa, so s is
/// validated for contract symmetry but does not reappear in the kernel.
pub fn postselect_wave(
    setup: &TwoLevelSetup,
    s: f64,
    wave: &WaveGrid,
) -> Result<(WaveGrid, f64)> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    if wave.tag != SpaceTag::Momentum {
        return Err(Error::GridConfig(
            "post-selection acts on a momentum-space wave".into(),
        ));
    }
    let overlap = setup.overlap();
    let transition = setup.transition();
    let (start, step) = (wave.start(), wave.step());
    let mut values: Vec<Complex64> = wave
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let (sin_u, cos_u) = (start + i as f64 * step).sin_cos();
            (overlap * cos_u - Complex64::i() * transition * sin_u) * v
        })
        .collect();
    let probability = values.iter().map(|v| v.norm_sqr()).sum::<f64>() * step;
    if probability < tolerances::DEGENERATE_PROBABILITY {
        return Err(Error::DegeneratePostSelection { probability });
    }
    let scale = probability.sqrt().recip();
    for v in &mut values {
        *v *= scale;
    }
    Ok((
        WaveGrid {
            spec: wave.spec,
            tag: SpaceTag::Momentum,
            values,
        },
        probability,
    ))
}

fn checkerboard(values: &mut [Complex64]) {
    for v in values.iter_mut().skip(1).step_by(2) {
        *v = -*v;
    }
}

/// Unitary transform from the momentum grid to its conjugate position
/// grid, kernel e^(+i u v) / sqrt(2 pi).
///
/// With both origins at the grid center the kernel picks up the sign
/// pattern (-1)^(j+k) and a corner phase i^points; the point count is a
/// power of two >= 256, so the corner phase is unity and two sign
/// checkerboards around a plain DFT realize the transform exactly. The
/// scale step / sqrt(2 pi) makes the discrete map unitary between the
/// quadrature norms, and the forward/backward pair inverts to machine
/// precision because step_u step_v points = 2 pi.
pub fn to_position_space(wave: &WaveGrid) -> Result<WaveGrid> {
    if wave.tag != SpaceTag::Momentum {
        return Err(Error::GridConfig(
            "position transform needs a momentum-space wave".into(),
        ));
    }
    let mut values = wave.values.clone();
    checkerboard(&mut values);
    FftPlanner::new()
        .plan_fft_inverse(values.len())
        .process(&mut values);
    checkerboard(&mut values);
    let scale = wave.spec.step_u() / SQRT_TAU;
    for v in &mut values {
        *v *= scale;
    }
    Ok(WaveGrid {
        spec: wave.spec,
        tag: SpaceTag::Position,
        values,
    })
}

/// Inverse companion of [`to_position_space`], kernel e^(-i u v) / sqrt(2 pi).
pub fn to_momentum_space(wave: &WaveGrid) -> Result<WaveGrid> {
    if wave.tag != SpaceTag::Position {
        return Err(Error::GridConfig(
            "momentum transform needs a position-space wave".into(),
        ));
    }
    let mut values = wave.values.clone();
    checkerboard(&mut values);
    FftPlanner::new()
        .plan_fft_forward(values.len())
        .process(&mut values);
    checkerboard(&mut values);
    let scale = wave.spec.step_v() / SQRT_TAU;
    for v in &mut values {
        *v *= scale;
    }
    Ok(WaveGrid {
        spec: wave.spec,
        tag: SpaceTag::Momentum,
        values,
    })
}

/// Everything the grid route knows about one setup at one coupling.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub post_selection_probability: f64,
    pub mean_u: f64,
    pub mean_v: f64,
    pub var_u: f64,
    pub var_v: f64,
    pub density_u: Curve,
    pub density_v: Curve,
    /// Scaled residuals of every grid statistic against its closed-form
    /// counterpart; densities contribute their worst point.
    pub residuals_vs_closed_form: BTreeMap<String, f64>,
}

/// Second moment of the unit-normalized orthogonal u-density.
fn orthogonal_var_u_reference(s: f64) -> f64 {
    let em = (-s).exp();
    0.5 * s * (1.0 + (2.0 * s - 1.0) * em) / -f64::exp_m1(-s)
}

/// Second moment of the unit-normalized orthogonal v-density.
fn orthogonal_var_v_reference(s: f64) -> f64 {
    1.0 / -f64::exp_m1(-s) + 0.5 / s
}

/// Run the whole chain for one setup and compare against the closed forms.
pub fn oracle_report(setup: &TwoLevelSetup, s: f64, spec: GridSpec) -> Result<OracleReport> {
    let selection = weak_value_of(setup)?;
    let initial = initial_wave(s, spec)?;
    let sigma_v = (0.5 / s).sqrt();
    let needed_v = 1.0 + COVERAGE_SIGMAS * sigma_v;
    if spec.position_half_width() < needed_v {
        return Err(Error::GridConfig(format!(
            "position half-width {} cannot hold the displaced pointer lobes \
             (need {needed_v})",
            spec.position_half_width()
        )));
    }
    let (post, probability) = postselect_wave(setup, s, &initial)?;
    let position = to_position_space(&post)?;
    let mean_u = post.moment(1);
    let var_u = post.moment(2) - mean_u * mean_u;
    let mean_v = position.moment(1);
    let var_v = position.moment(2) - mean_v * mean_v;
    let density_u = post.density_curve()?;
    let density_v = position.density_curve()?;

    let mut residuals = BTreeMap::new();
    match selection {
        PostSelection::Regular {
            overlap,
            weak_value,
        } => {
            let pt = MeasurementPoint::new(s, weak_value)?;
            let closed = moments_nonorthogonal(pt);
            let z_grid = probability / overlap.norm_sqr();
            residuals.insert("z".into(), scaled_residual(z_grid, closed.z));
            residuals.insert("mean_q".into(), scaled_residual(mean_v, closed.mean_q));
            residuals.insert("mean_p".into(), scaled_residual(mean_u, closed.mean_p));
            residuals.insert("var_q".into(), scaled_residual(var_v, closed.var_q));
            residuals.insert("var_p".into(), scaled_residual(var_u, closed.var_p));
            residuals.insert(
                "density_p".into(),
                density_u.max_scaled_residual_against(|u| density_p_nonorthogonal(pt, u)),
            );
            residuals.insert(
                "density_q".into(),
                density_v.max_scaled_residual_against(|v| density_q_nonorthogonal(pt, v)),
            );
        }
        PostSelection::Orthogonal { transition } => {
            let z_o_grid = probability / (transition.norm_sqr() * 0.5 * s);
            let z_o_series = series::series_z_orthogonal(s, series::MAX_SERIES_TERMS)?;
            residuals.insert("z_o_series".into(), scaled_residual(z_o_grid, z_o_series));
            residuals.insert("mean_u".into(), scaled_residual(mean_u, 0.0));
            residuals.insert("mean_v".into(), scaled_residual(mean_v, 0.0));
            residuals.insert(
                "var_p".into(),
                scaled_residual(var_u, orthogonal_var_u_reference(s)),
            );
            residuals.insert(
                "var_q".into(),
                scaled_residual(var_v, orthogonal_var_v_reference(s)),
            );
            residuals.insert(
                "density_p".into(),
                density_u.max_scaled_residual_against(|u| {
                    density_p_orthogonal(s, u, DensityForm::Normalized)
                        .expect("s validated by initial_wave")
                }),
            );
            residuals.insert(
                "density_q".into(),
                density_v.max_scaled_residual_against(|v| {
                    density_q_orthogonal(s, v, DensityForm::Normalized)
                        .expect("s validated by initial_wave")
                }),
            );
        }
    }
    Ok(OracleReport {
        post_selection_probability: probability,
        mean_u,
        mean_v,
        var_u,
        var_v,
        density_u,
        density_v,
        residuals_vs_closed_form: residuals,
    })
}

/// Grid-route reference values for the orthogonal case, consumed by the
/// dual-reporting statistics and by errata tabulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalGridRef {
    pub z_o: f64,
    pub var_u: f64,
    pub var_v: f64,
}

/// Orthogonal vehicle with exactly zero overlap and unit transition:
/// pre (1,1)/sqrt(2), post (1,-1)/sqrt(2), observable sigma_z.
fn orthogonal_vehicle() -> TwoLevelSetup {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    TwoLevelSetup::new(
        [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        [
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ],
    )
    .expect("hadamard pair is unit and involutory")
}

/// Simulate the orthogonal chain on a grid balanced between the two
/// representations.
///
/// The default grid keys its width to the u-Gaussian alone and loses the
/// v-lobes once s drops below about 4e-5; choosing half_width so that
/// both representations get the same relative coverage (about 320
/// deviations at 2^15 points) keeps every s from 1e-300 to about 4e4 on
/// the grid.
pub fn orthogonal_grid_reference(s: f64) -> Result<OrthogonalGridRef> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    let points = 1usize << 15;
    let half_width = (0.5 * std::f64::consts::PI * points as f64 * s).sqrt();
    let spec = GridSpec::new(half_width, points)?;
    let initial = initial_wave(s, spec)?;
    let vehicle = orthogonal_vehicle();
    let (post, probability) = postselect_wave(&vehicle, s, &initial)?;
    let position = to_position_space(&post)?;
    let mean_u = post.moment(1);
    let mean_v = position.moment(1);
    Ok(OrthogonalGridRef {
        z_o: probability / (0.5 * s),
        var_u: post.moment(2) - mean_u * mean_u,
        var_v: position.moment(2) - mean_v * mean_v,
    })
}
