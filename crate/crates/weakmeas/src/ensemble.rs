//! Monte Carlo sampling from tabulated densities and the empirical
//! square-root-of-N precision law.
//!
//! The sampler inverts the cumulative trapezoid of a tabulated density with
//! linear interpolation between knots. The draws are therefore exact with
//! respect to that piecewise-linear distribution, which makes the
//! Kolmogorov-Smirnov distance against the same distribution null-distributed
//! and lets the 1 percent critical value apply without a plug-in correction.
//!
//! Randomness is never ambient: every operation takes an explicit 64-bit
//! seed, repeated runs are byte-identical, and ensemble cells derive their
//! sub-seeds from the documented SplitMix64 stream so each (N, trial) cell is
//! an independent ChaCha12 stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::setups::{aav_closed_forms, aav_density, dsjh_closed_forms, dsjh_density};
use crate::setups::{AavPoint, DsjhPoint};
use crate::tolerances;

/// Weyl increment of the SplitMix64 stream.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output mix. Feeding it `seed + GOLDEN_GAMMA * (index + 1)`
/// reproduces the generator's own stream at position `index`, which is the
/// standard way to fan one seed out into independent sub-seeds.
fn splitmix64(state: u64) -> u64 {
    let mut z = state;
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sub_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// Piecewise-linear cumulative distribution of a tabulated density.
///
/// Densities arrive with float noise: values down to -1e-12 of the peak are
/// clamped to zero, anything more negative is rejected. The running
/// trapezoid integral must land within 1e-6 of 1 and is then renormalized so
/// the last knot is exactly 1.
struct TabulatedCdf {
    xs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl TabulatedCdf {
    fn build(curve: &Curve) -> Result<Self> {
        let xs = curve.xs().to_vec();
        let peak = curve.ys().iter().fold(0.0f64, |acc, &y| acc.max(y));
        let floor = -tolerances::CURVE_NEGATIVE_NOISE * peak.max(1.0);
        let mut ys = Vec::with_capacity(curve.len());
        for &y in curve.ys() {
            if y < floor {
                return Err(Error::InvalidCurve(format!(
                    "density value {y:e} is negative beyond the noise floor"
                )));
            }
            ys.push(y.max(0.0));
        }
        let mut cumulative = Vec::with_capacity(xs.len());
        cumulative.push(0.0);
        for i in 1..xs.len() {
            let panel = 0.5 * (ys[i - 1] + ys[i]) * (xs[i] - xs[i - 1]);
            cumulative.push(cumulative[i - 1] + panel);
        }
        let total = *cumulative.last().unwrap();
        if (total - 1.0).abs() > tolerances::SAMPLER_UNIT_INTEGRAL {
            return Err(Error::InvalidCurve(format!(
                "density integrates to {total}, not 1, on its tabulated window"
            )));
        }
        for c in &mut cumulative {
            *c /= total;
        }
        Ok(TabulatedCdf { xs, cumulative })
    }

    /// Quantile of the piecewise-linear distribution at level u in [0, 1).
    fn invert(&self, u: f64) -> f64 {
        let i = self.cumulative.partition_point(|&c| c < u);
        if i == 0 {
            return self.xs[0];
        }
        if i >= self.xs.len() {
            return *self.xs.last().unwrap();
        }
        let c0 = self.cumulative[i - 1];
        let c1 = self.cumulative[i];
        if c1 <= c0 {
            self.xs[i]
        } else {
            self.xs[i - 1] + (u - c0) / (c1 - c0) * (self.xs[i] - self.xs[i - 1])
        }
    }

    /// Distribution function at x, clamped to 0 and 1 outside the window.
    fn value(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return 1.0;
        }
        let i = self.xs.partition_point(|&knot| knot < x);
        let x0 = self.xs[i - 1];
        let x1 = self.xs[i];
        let c0 = self.cumulative[i - 1];
        let c1 = self.cumulative[i];
        c0 + (x - x0) / (x1 - x0) * (c1 - c0)
    }
}

/// Draws from one tabulated density, with the seed and source retained so
/// the batch can be reproduced or tested against its own distribution.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub draws: Vec<f64>,
    pub seed: u64,
    pub source_curve: Curve,
}

/// Inverse-CDF sampling: `n` independent draws from the piecewise-linear
/// distribution defined by `curve`, driven by a ChaCha12 stream seeded with
/// `seed`. Identical (curve, n, seed) always reproduces identical draws.
pub fn sample_density(curve: &Curve, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Domain("sampling needs at least one draw".into()));
    }
    let cdf = TabulatedCdf::build(curve)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let draws = (0..n).map(|_| cdf.invert(rng.gen::<f64>())).collect();
    Ok(SampleBatch {
        draws,
        seed,
        source_curve: curve.clone(),
    })
}

/// Two-sided Kolmogorov-Smirnov distance between `draws` and the
/// piecewise-linear distribution of `curve`.
pub fn ks_statistic(draws: &[f64], curve: &Curve) -> Result<f64> {
    if draws.is_empty() {
        return Err(Error::Domain(
            "the KS statistic needs at least one draw".into(),
        ));
    }
    let cdf = TabulatedCdf::build(curve)?;
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf.value(x);
        worst = worst.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(worst)
}

/// One percent critical value of the two-sided KS statistic for n draws,
/// sqrt(ln(2/0.01)/2)/sqrt(n) in the large-n limit.
pub fn ks_critical_1pct(n: usize) -> f64 {
    assert!(n > 0, "the KS critical value needs at least one draw");
    tolerances::KS_COEFF_1PCT / (n as f64).sqrt()
}

/// A measurement family fixed at one (coupling, angle) point, ready for
/// ensemble sampling.
#[derive(Debug, Clone, Copy)]
pub enum SetupPoint {
    Aav(AavPoint),
    Dsjh(DsjhPoint),
}

impl SetupPoint {
    fn closed_mean_and_sigma(&self) -> Result<(f64, f64)> {
        match self {
            SetupPoint::Aav(pt) => {
                let stats = aav_closed_forms(*pt)?;
                Ok((stats.mean_pz, stats.delta_pz_sq.sqrt()))
            }
            SetupPoint::Dsjh(pt) => {
                let stats = dsjh_closed_forms(*pt)?;
                Ok((stats.mean_kx, stats.delta_x_sq.sqrt()))
            }
        }
    }

    /// Post-selected pointer density tabulated on mean plus or minus 13
    /// standard deviations, wide enough that the clipped tails are below the
    /// sampler's normalization tolerance.
    pub fn density_curve(&self, points: usize) -> Result<Curve> {
        let (mean, sigma) = self.closed_mean_and_sigma()?;
        let lo = mean - 13.0 * sigma;
        let hi = mean + 13.0 * sigma;
        match self {
            SetupPoint::Aav(pt) => {
                let pt = *pt;
                Curve::tabulate(
                    |x| aav_density(pt, x).expect("density is finite on a finite window"),
                    lo,
                    hi,
                    points,
                )
            }
            SetupPoint::Dsjh(pt) => {
                let pt = *pt;
                Curve::tabulate(
                    |x| dsjh_density(pt, x).expect("density is finite on a finite window"),
                    lo,
                    hi,
                    points,
                )
            }
        }
    }
}

/// Empirical SNR of the N-sample mean at one ensemble size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub snr: f64,
}

/// The full scaling run: one row per requested N plus the log-log slope of
/// SNR against N, which the central limit theorem pins at one half.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    pub slope: f64,
}

const DENSITY_POINTS: usize = 4001;

/// Empirical square-root-of-N law for the sample-mean estimator.
///
/// For each ensemble size N, `trials` independent cells each draw N samples
/// and record their mean; the row's SNR is |mean of the cell means| divided
/// by their standard deviation. Cell (i, t) uses the SplitMix64 sub-seed at
/// stream position i * trials + t, so the run is reproducible and cells are
/// independent. Setups whose closed-form signal vanishes have no SNR to
/// scale and are rejected.
pub fn snr_scaling(
    point: SetupPoint,
    n_values: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ScalingTable> {
    if n_values.len() < 2 {
        return Err(Error::Domain(
            "the scaling fit needs at least two ensemble sizes".into(),
        ));
    }
    if n_values[0] == 0 {
        return Err(Error::Domain("ensemble sizes must be at least 1".into()));
    }
    if n_values.windows(2).any(|pair| pair[0] >= pair[1]) {
        return Err(Error::Domain(
            "ensemble sizes must be strictly ascending".into(),
        ));
    }
    if trials < 30 {
        return Err(Error::Domain(format!(
            "a standard deviation over {trials} trials is too noisy; use at least 30"
        )));
    }
    let (mean, _) = point.closed_mean_and_sigma()?;
    if mean.abs() < 1e-12 {
        return Err(Error::Domain(
            "zero-signal setup: the SNR of the mean is undefined".into(),
        ));
    }
    let curve = point.density_curve(DENSITY_POINTS)?;
    let cdf = TabulatedCdf::build(&curve)?;

    let mut rows = Vec::with_capacity(n_values.len());
    for (i, &n) in n_values.iter().enumerate() {
        let mut cell_means = Vec::with_capacity(trials);
        for t in 0..trials {
            let stream = (i * trials + t) as u64;
            let mut rng = ChaCha12Rng::seed_from_u64(sub_seed(seed, stream));
            let mut acc = 0.0;
            for _ in 0..n {
                acc += cdf.invert(rng.gen::<f64>());
            }
            cell_means.push(acc / n as f64);
        }
        let center = cell_means.iter().sum::<f64>() / trials as f64;
        let variance = cell_means
            .iter()
            .map(|m| (m - center) * (m - center))
            .sum::<f64>()
            / (trials - 1) as f64;
        rows.push(ScalingRow {
            n,
            snr: center.abs() / variance.sqrt(),
        });
    }

    let log_n: Vec<f64> = rows.iter().map(|row| (row.n as f64).ln()).collect();
    let log_snr: Vec<f64> = rows.iter().map(|row| row.snr.ln()).collect();
    let x_bar = log_n.iter().sum::<f64>() / log_n.len() as f64;
    let y_bar = log_snr.iter().sum::<f64>() / log_snr.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in log_n.iter().zip(&log_snr) {
        num += (x - x_bar) * (y - y_bar);
        den += (x - x_bar) * (x - x_bar);
    }
    Ok(ScalingTable {
        rows,
        slope: num / den,
    })
}
