use crate::error::{Error, Result};

/// A real function tabulated on a strictly increasing abscissa.
///
/// This is the exchange format between the analytic formulas, the grid
/// simulation, and the sampler: densities travel as curves and every
/// consumer integrates them the same way (trapezoid rule, which is
/// spectrally accurate for the smooth, exponentially decaying integrands
/// this crate produces).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Curve {
    pub fn from_samples(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidCurve(format!(
                "abscissa and ordinate lengths differ: {} vs {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidCurve("need at least two samples".into()));
        }
        if xs.iter().any(|x| !x.is_finite()) || ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidCurve(
                "abscissa must be strictly increasing".into(),
            ));
        }
        Ok(Self { xs, ys })
    }

    /// Tabulates `f` on `n` evenly spaced points over `[lo, hi]`.
    pub fn tabulate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidCurve(format!(
                "invalid tabulation range [{lo}, {hi}]"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidCurve("need at least two samples".into()));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        Self::from_samples(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Trapezoid integral over the full abscissa.
    pub fn integral(&self) -> f64 {
        self.weighted_integral(|_| 1.0)
    }

    /// Trapezoid integral of x^k times the curve.
    pub fn moment(&self, k: u32) -> f64 {
        self.weighted_integral(|x| x.powi(k as i32))
    }

    /// Trapezoid integral of w(x) times the curve.
    pub fn weighted_integral(&self, w: impl Fn(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            let dx = self.xs[i] - self.xs[i - 1];
            let fa = w(self.xs[i - 1]) * self.ys[i - 1];
            let fb = w(self.xs[i]) * self.ys[i];
            acc += 0.5 * (fa + fb) * dx;
        }
        acc
    }

    /// Largest pointwise value of |self - f| scaled per
    /// [`crate::tolerances::scaled_residual`].
    pub fn max_scaled_residual_against(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(&x, &y)| crate::tolerances::scaled_residual(y, f(x)))
            .fold(0.0, f64::max)
    }
}
