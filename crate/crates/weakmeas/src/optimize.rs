//! Optimal pre-selection solvers.
//!
//! Both measurement families expose two ridges in the (s, angle) plane: the
//! locus maximizing the pointer expectation value and the locus maximizing
//! the signal-to-noise ratio. The expectation ridges have elementary closed
//! forms (cos alpha = -e^(-s) for the spin pair, cos phi = e^(-s) for the
//! interferometric pair). The SNR ridges come from quadratics in the cosine
//! whose admissible root is rationalized here so it stays cancellation-free
//! at small s and continuous through the s = 1 degeneracy of the
//! interferometric coefficient.
//!
//! Every solver returns an [`OptimalPoint`] that carries the defining
//! residual of its equation, so callers can confirm the root quality without
//! re-deriving the equation. [`argmax_scan`] provides the independent check:
//! a dense grid pass plus golden-section refinement that knows nothing about
//! the closed forms.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::setups::{aav_closed_forms, dsjh_closed_forms, AavPoint, DsjhPoint};
use crate::tolerances;

/// An optimum of a one-angle pre-selection family at fixed coupling.
///
/// `companion_stats` carries the quantities that travel with the optimum,
/// keyed by name so reports can serialize them without bespoke structs. All
/// solvers include the residual of their defining equation under the key
/// `defining_residual` or `quadratic_residual`; it stays below 1e-12 for
/// every admissible input.
#[derive(Debug, Clone)]
pub struct OptimalPoint {
    pub s: f64,
    pub angle: f64,
    pub objective_value: f64,
    pub companion_stats: BTreeMap<String, f64>,
}

fn validate_s(s: f64) -> Result<()> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::Domain(format!(
            "coupling s must be positive and finite, got {s}"
        )));
    }
    Ok(())
}

fn companions<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// Angle maximizing the spin-pair pointer shift at fixed coupling.
///
/// The ridge is cos alpha = -e^(-s), which puts the angle in (pi/2, pi). On
/// the ridge the closed forms collapse: the shift is 1/sqrt(1 - e^(-2s)) and
/// the fluctuation is exactly 1/sqrt(2s), so their ratio (the on-line SNR)
/// tends to 1 from above as s tends to 0.
pub fn aav_optimal_expectation(s: f64) -> Result<OptimalPoint> {
    validate_s(s)?;
    let cos_alpha = -(-s).exp();
    let angle = cos_alpha.acos();
    let objective = 1.0 / (-(-2.0 * s).exp_m1()).sqrt();
    let delta_pz = 1.0 / (2.0 * s).sqrt();
    Ok(OptimalPoint {
        s,
        angle,
        objective_value: objective,
        companion_stats: companions([
            ("cos_alpha", cos_alpha),
            ("defining_residual", (angle.cos() - cos_alpha).abs()),
            ("delta_pz", delta_pz),
            ("on_line_snr", objective / delta_pz),
        ]),
    })
}

/// Angle maximizing the spin-pair SNR at fixed coupling.
///
/// Stationarity gives the quadratic
/// cos^2(alpha) + 2 c cos(alpha) + 1 = 0 with
/// c = (cosh s + s e^s)/(1 + s) >= 1. The roots multiply to 1; the
/// admissible one is written as -1/(c + sqrt((c - 1)(c + 1))) with
/// c - 1 = (2 sinh^2(s/2) + s (e^s - 1))/(1 + s), which keeps full
/// precision down to the smallest couplings. The other root is asserted
/// inadmissible. Above s of roughly 705 the hyperbolic coefficient
/// overflows; the root is then smaller than the smallest subnormal and the
/// solver saturates at its exact limit alpha = pi/2.
///
/// The objective is evaluated through the closed-form statistics, so for s
/// below roughly 1e-11 the optimal angle is operationally indistinguishable
/// from the orthogonal point and construction fails with a domain error.
pub fn aav_optimal_snr(s: f64) -> Result<OptimalPoint> {
    validate_s(s)?;
    let c = (s.cosh() + s * s.exp()) / (1.0 + s);
    let (cos_alpha, angle, residual) = if c.is_finite() {
        let c_minus_1 = (2.0 * (0.5 * s).sinh().powi(2) + s * s.exp_m1()) / (1.0 + s);
        let root_den = c + (c_minus_1 * (c + 1.0)).sqrt();
        let cos_alpha = -1.0 / root_den;
        let discarded = -root_den;
        assert!(
            discarded.abs() > 1.0,
            "discarded SNR root must lie outside the cosine range"
        );
        let residual =
            (cos_alpha * cos_alpha + 2.0 * c * cos_alpha + 1.0).abs() / (1.0 + 2.0 * c);
        (cos_alpha, cos_alpha.acos(), residual)
    } else {
        (-0.0, FRAC_PI_2, 0.0)
    };
    assert!(cos_alpha.abs() <= 1.0, "SNR root left the cosine range");
    let stats = aav_closed_forms(AavPoint::new(s, angle)?)?;
    Ok(OptimalPoint {
        s,
        angle,
        objective_value: stats.snr,
        companion_stats: companions([
            ("cos_alpha", cos_alpha),
            ("delta_pz", stats.delta_pz_sq.sqrt()),
            ("mean_pz", stats.mean_pz),
            ("quadratic_residual", residual),
        ]),
    })
}

/// Angle maximizing the interferometric signal magnitude at fixed coupling.
///
/// The ridge is cos phi = e^(-s), placing the angle in (0, pi/2). On the
/// ridge the signal is s e^(-s)/sqrt(1 - e^(-2s)) and the position
/// fluctuation is exactly sqrt(s/2).
pub fn dsjh_optimal_expectation(s: f64) -> Result<OptimalPoint> {
    validate_s(s)?;
    let cos_phi = (-s).exp();
    let angle = cos_phi.acos();
    let objective = s * cos_phi / (-(-2.0 * s).exp_m1()).sqrt();
    let delta_x = (0.5 * s).sqrt();
    Ok(OptimalPoint {
        s,
        angle,
        objective_value: objective,
        companion_stats: companions([
            ("cos_phi", cos_phi),
            ("defining_residual", (angle.cos() - cos_phi).abs()),
            ("delta_x", delta_x),
            ("on_line_snr", objective / delta_x),
        ]),
    })
}

/// Global maximum of the interferometric signal over the whole (s, phi)
/// plane, returned as (s_m, phi_m, value).
///
/// Along the expectation ridge the signal is stationary in s where
/// 1 - s - e^(-2s) = 0. That function is positive at s = 0.1 and negative
/// at s = 2, so the bracket is analytic and the hybrid root finder always
/// converges; the residual at the returned root is below 1e-12.
pub fn dsjh_global_max() -> (f64, f64, f64) {
    let s_m = find_root(|s| 1.0 - s - (-2.0 * s).exp(), 0.1, 2.0);
    let point = dsjh_optimal_expectation(s_m)
        .expect("the bracketed root is strictly positive");
    (s_m, point.angle, point.objective_value)
}

/// Angle maximizing the interferometric SNR at fixed coupling.
///
/// Stationarity gives cos^2(phi) + 2 (b/(s - 1)) cos(phi) + 1 = 0 with
/// b = cosh s - s e^(-s) > 0. The coefficient divides by s - 1, but the
/// admissible root rationalizes to
/// (1 - s)/(b + sqrt((b - 1 + s)(b + 1 - s))), which is continuous through
/// s = 1 (where it gives exactly 0, the analytic limit phi = pi/2) and
/// cancellation-free at small s via
/// b - 1 + s = 2 sinh^2(s/2) + s (1 - e^(-s)). The root is positive below
/// s = 1 and negative above it; the product of the two roots is 1, so the
/// discarded root is asserted inadmissible. Overflow of b (s above roughly
/// 710) saturates at the exact limit phi = pi/2, as in the spin pair.
pub fn dsjh_optimal_snr(s: f64) -> Result<OptimalPoint> {
    validate_s(s)?;
    let b = s.cosh() - s * (-s).exp();
    let (cos_phi, angle, residual) = if b.is_finite() {
        let b_minus = 2.0 * (0.5 * s).sinh().powi(2) + s * (-(-s).exp_m1());
        let b_plus = b + (1.0 - s);
        let cos_phi = (1.0 - s) / (b + (b_minus * b_plus).sqrt());
        if cos_phi != 0.0 {
            let discarded = 1.0 / cos_phi;
            assert!(
                discarded.abs() > 1.0,
                "discarded SNR root must lie outside the cosine range"
            );
        }
        let residual = ((s - 1.0) * (cos_phi * cos_phi + 1.0) + 2.0 * b * cos_phi).abs()
            / (1.0 + 2.0 * b + (s - 1.0).abs());
        (cos_phi, cos_phi.acos(), residual)
    } else {
        (0.0, FRAC_PI_2, 0.0)
    };
    assert!(cos_phi.abs() <= 1.0, "SNR root left the cosine range");
    let stats = dsjh_closed_forms(DsjhPoint::new(s, angle)?)?;
    Ok(OptimalPoint {
        s,
        angle,
        objective_value: stats.snr,
        companion_stats: companions([
            ("cos_phi", cos_phi),
            ("delta_x", stats.delta_x_sq.sqrt()),
            ("mean_kx", stats.mean_kx),
            ("quadratic_residual", residual),
        ]),
    })
}

/// Argmax of `objective` on [lo, hi]: a dense pass over `n` equally spaced
/// points locates the best cell, golden-section refinement narrows the two
/// neighbouring cells to an angle width of 1e-10, and a final three-point
/// parabolic fit at spacing 1e-5 pins the vertex.
///
/// The parabolic step matters: near a smooth maximum the objective is flat
/// to double precision over a plateau of half-width sqrt(2 eps |f| / |f''|),
/// about 2e-8 for objectives of order one, so interval methods alone stall
/// there while the wider-spaced fit still sees curvature far above the
/// noise. The refinement assumes the objective is unimodal on the bracket
/// the dense pass selects; the dense pass itself is global. Any non-finite
/// objective value is an error.
const PARABOLIC_SPACING: f64 = 1e-5;

pub fn argmax_scan<F>(objective: F, lo: f64, hi: f64, n: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::Domain(format!(
            "scan interval must be finite with lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 3 {
        return Err(Error::Domain(format!(
            "scan needs at least three points, got {n}"
        )));
    }
    let eval = |x: f64| -> Result<f64> {
        let value = objective(x);
        if !value.is_finite() {
            return Err(Error::NonFinite(format!(
                "objective returned {value} at angle {x}"
            )));
        }
        Ok(value)
    };

    let step = (hi - lo) / (n - 1) as f64;
    let mut best_index = 0;
    let mut best_value = f64::NEG_INFINITY;
    for i in 0..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let value = eval(x)?;
        if value > best_value {
            best_value = value;
            best_index = i;
        }
    }

    let mut a = (lo + step * best_index.saturating_sub(1) as f64).max(lo);
    let mut b = (lo + step * (best_index + 1) as f64).min(hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > tolerances::GOLDEN_SECTION {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d)?;
        }
    }
    let m = 0.5 * (a + b);
    let h = PARABOLIC_SPACING.min(0.25 * (hi - lo));
    let x = if m - h > lo && m + h < hi {
        let f_lo = eval(m - h)?;
        let f_mid = eval(m)?;
        let f_hi = eval(m + h)?;
        let curvature = f_lo - 2.0 * f_mid + f_hi;
        let vertex = m + 0.5 * h * (f_lo - f_hi) / curvature;
        if curvature < 0.0 && (vertex - m).abs() <= h {
            vertex
        } else {
            m
        }
    } else {
        m
    };
    Ok((x, eval(x)?))
}

/// Bracketed hybrid root finder: secant steps accepted while they stay
/// strictly inside the current bracket, bisection otherwise, until the
/// residual drops to 1e-12. The caller guarantees f(a) and f(b) have
/// opposite signs.
fn find_root<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    assert!(
        fa * fb < 0.0,
        "root bracket must straddle a sign change"
    );
    for _ in 0..200 {
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if secant > a && secant < b {
            secant
        } else {
            0.5 * (a + b)
        };
        let fx = f(x);
        if fx.abs() <= tolerances::ROOT_RESIDUAL {
            return x;
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    unreachable!("root finder exhausted its iteration budget");
}
