//! Closed-form pointer statistics for post-selected weak measurements of an
//! involutory observable (A^2 = 1).
//!
//! Everything here is dimensionless: the coupling enters only through
//! s = 2 g^2 <p^2>, momenta as u = g p, positions as v = q / g. Converting
//! physical units into these combinations is the caller's job.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian_oracle;

/// Complex weak value <psi_f|A|psi_i> / <psi_f|psi_i>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue {
    pub re: f64,
    pub im: f64,
}

impl WeakValue {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// |A_w|^2, the modulus square that drives every normalization below.
    pub fn modulus_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// A coupling strength together with the weak value realized there.
///
/// Construction validates the physical domain (s > 0, finite weak value);
/// the statistics functions below are then total on valid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPoint {
    s: f64,
    a_w: WeakValue,
}

impl MeasurementPoint {
    pub fn new(s: f64, a_w: WeakValue) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Domain(format!(
                "coupling strength s must be positive and finite, got {s}"
            )));
        }
        if !(a_w.re.is_finite() && a_w.im.is_finite()) {
            return Err(Error::Domain("weak value must be finite".into()));
        }
        Ok(Self { s, a_w })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn weak_value(&self) -> WeakValue {
        self.a_w
    }
}

/// Post-selected pointer statistics in dimensionless units.
///
/// `mean_q` and `var_q` describe the pointer position v = q/g; `mean_p` and
/// `var_p` its conjugate u = g p. `z` is the normalization of the
/// conditional state relative to the squared overlap, so the post-selection
/// probability is |<psi_f|psi_i>|^2 z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerStats {
    pub z: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
}

/// Exact post-selected statistics for a non-orthogonal weak measurement.
pub fn moments_nonorthogonal(pt: MeasurementPoint) -> PointerStats {
    let s = pt.s;
    let WeakValue { re, im } = pt.a_w;
    let beta = pt.a_w.modulus_sq();
    // expm1 keeps z accurate deep into the weak regime where e^(-s) - 1
    // cancels.
    let z = 1.0 + 0.5 * (1.0 - beta) * f64::exp_m1(-s);
    let mean_q = re / z;
    let mean_p = s * (-s).exp() * im / z;
    let var_q = 0.5 / s + 0.5 * (1.0 + beta) / z - mean_q * mean_q;
    let var_p = 0.5 * s - 0.5 * s * s * (-s).exp() * (1.0 - beta) / z - mean_p * mean_p;
    PointerStats {
        z,
        mean_q,
        mean_p,
        var_q,
        var_p,
    }
}

/// Post-selected momentum density in u = g p.
///
/// Written as |cos u - i A_w sin u|^2 times the initial Gaussian over z, so
/// the value is manifestly non-negative and eigenstate post-selections
/// (A_w = +/-1) reproduce the initial density to machine precision.
pub fn density_p_nonorthogonal(pt: MeasurementPoint, u: f64) -> f64 {
    let WeakValue { re, im } = pt.a_w;
    let z = moments_nonorthogonal(pt).z;
    let (sin_u, cos_u) = u.sin_cos();
    let amp_re = cos_u + im * sin_u;
    let amp_im = re * sin_u;
    let gauss = (-u * u / pt.s).exp() / (std::f64::consts::PI * pt.s).sqrt();
    (amp_re * amp_re + amp_im * amp_im) * gauss / z
}

/// Post-selected position density in v = q / g.
///
/// The position wave is an interference of two Gaussians displaced to the
/// eigenvalues v = +/-1 with amplitudes (1 +/- A_w)/2; evaluating the
/// modulus square of that superposition keeps the density non-negative and
/// free of the cosh overflow the expanded form would hit.
pub fn density_q_nonorthogonal(pt: MeasurementPoint, v: f64) -> f64 {
    let s = pt.s;
    let z = moments_nonorthogonal(pt).z;
    let plus = Complex64::new(1.0 + pt.a_w.re, pt.a_w.im) * 0.5;
    let minus = Complex64::new(1.0 - pt.a_w.re, -pt.a_w.im) * 0.5;
    let half_minus = (-0.5 * s * (v - 1.0) * (v - 1.0)).exp();
    let half_plus = (-0.5 * s * (v + 1.0) * (v + 1.0)).exp();
    let amp = plus * half_minus + minus * half_plus;
    amp.norm_sqr() * (s / std::f64::consts::PI).sqrt() / z
}

/// First-order approximate pointer shifts of Wu-Li type.
///
/// `a2_w` is the weak value of A^2 (exactly 1 + 0i for the involutory
/// observables the rest of the crate handles, but the formula accepts the
/// general value) and `anti_qp` the initial expectation of the
/// anticommutator {q, p}, which vanishes for the real Gaussian detector.
/// Returns (delta_q, delta_p) in the same dimensionless units as
/// [`PointerStats`].
pub fn wu_li_shifts(pt: MeasurementPoint, a2_w: WeakValue, anti_qp: f64) -> (f64, f64) {
    let WeakValue { re, im } = pt.a_w;
    let beta = pt.a_w.modulus_sq();
    let denom = 1.0 + 0.5 * pt.s * (beta - a2_w.re);
    let delta_q = (re + im * anti_qp) / denom;
    let delta_p = pt.s * im / denom;
    (delta_q, delta_p)
}

/// Weak value of A^n in an orthogonal post-selection, for A^2 = 1:
/// 1/(n + 1) for even n, 0 for odd n.
pub fn orthogonal_weak_value(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        1.0 / (n as f64 + 1.0)
    } else {
        0.0
    }
}

/// Orthogonal-case pointer statistics, dual-reported.
///
/// The `_closed` fields evaluate the commonly quoted closed-form
/// expressions verbatim. Those expressions disagree with their own defining
/// series and with direct wavefunction simulation (their shared denominator
/// 4 - 4e^(-s) - 3s even changes sign near s = 0.583), so the series and
/// grid values are carried alongside: `z_o_series` sums the defining series
/// and `var_p_grid` / `var_q_grid` come from the simulated post-selected
/// wave. Nothing is adjudicated here; discrepancies are the caller's to
/// report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalStats {
    pub z_o_closed: f64,
    pub z_o_series: f64,
    /// Identically zero: the post-selected densities are even in both
    /// variables.
    pub mean_q: f64,
    /// Identically zero, as `mean_q`.
    pub mean_p: f64,
    pub var_p_closed: f64,
    pub var_q_closed: f64,
    pub var_p_grid: f64,
    pub var_q_grid: f64,
}

/// Number of series terms used for the `z_o_series` field. The terms have
/// magnitude s^j / (j + 1)!, so sixty terms are converged to double
/// precision for s up to about fifteen and the sum reports
/// non-convergence honestly beyond that.
const ORTHOGONAL_SERIES_TERMS: usize = 60;

pub fn moments_orthogonal(s: f64) -> Result<OrthogonalStats> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    let em = (-s).exp();
    let quoted_denominator = 4.0 - 4.0 * em - 3.0 * s;
    let z_o_closed = 4.0 * (-f64::exp_m1(-s)) / s - 3.0;
    let z_o_series = gaussian_oracle::series_z_orthogonal(s, ORTHOGONAL_SERIES_TERMS)?;
    let var_p_closed = 0.5 * s * (1.0 + (2.0 * s - 1.0) * em) / quoted_denominator;
    let var_q_closed = 0.5 / s * (1.0 - em + 4.0 * s) / quoted_denominator;
    let grid = gaussian_oracle::grid::orthogonal_grid_reference(s)?;
    Ok(OrthogonalStats {
        z_o_closed,
        z_o_series,
        mean_q: 0.0,
        mean_p: 0.0,
        var_p_closed,
        var_q_closed,
        var_p_grid: grid.var_u,
        var_q_grid: grid.var_v,
    })
}

/// Which expression of an orthogonal-case density to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityForm {
    /// The commonly quoted closed form, verbatim: not normalized, negative
    /// wherever its denominator 4 - 4e^(-s) - 3s is.
    Closed,
    /// The same interference shape rescaled to unit integral; matches the
    /// wavefunction simulation pointwise.
    Normalized,
}

/// Orthogonal-case momentum density in u.
///
/// The shape is (1 - cos 2u) times the initial Gaussian: a dark fringe at
/// u = 0 regardless of form. Note the quoted closed form differs from the
/// normalized one by more than the normalization defect; its integral is
/// (1 - e^(-s)) / (2 (4 - 4e^(-s) - 3s)), which is not 1 for any s.
pub fn density_p_orthogonal(s: f64, u: f64, form: DensityForm) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    let sin_u = u.sin();
    let shape = 2.0 * sin_u * sin_u;
    let gauss = (-u * u / s).exp() / (std::f64::consts::PI * s).sqrt();
    let value = match form {
        DensityForm::Closed => shape * gauss / (2.0 * (4.0 - 4.0 * (-s).exp() - 3.0 * s)),
        DensityForm::Normalized => shape * gauss / (-f64::exp_m1(-s)),
    };
    Ok(value)
}

/// Orthogonal-case position density in v.
///
/// The sinh^2 times Gaussian shape decomposes exactly into Gaussians at
/// v = -1, 0, +1; evaluated here as the square of a difference of two half
/// Gaussians, which is overflow-safe and manifestly non-negative.
pub fn density_q_orthogonal(s: f64, v: f64, form: DensityForm) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    let half_minus = (-0.5 * s * (v - 1.0) * (v - 1.0)).exp();
    let half_plus = (-0.5 * s * (v + 1.0) * (v + 1.0)).exp();
    let diff = (half_minus - half_plus) * std::f64::consts::FRAC_1_SQRT_2;
    let shape = diff * diff * (s / std::f64::consts::PI).sqrt();
    let value = match form {
        DensityForm::Closed => shape / (4.0 - 4.0 * (-s).exp() - 3.0 * s),
        DensityForm::Normalized => shape / (-f64::exp_m1(-s)),
    };
    Ok(value)
}

#[cfg(test)]
// Frozen reference values keep every digit their oracle printed, not the
// shortest float spelling.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::tolerances;

    fn pt(s: f64, re: f64, im: f64) -> MeasurementPoint {
        MeasurementPoint::new(s, WeakValue::new(re, im)).unwrap()
    }

    fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
        assert!(
            (got - want).abs() <= tol * want.abs().max(1.0),
            "{what}: got {got:.17e}, want {want:.17e}"
        );
    }

    #[test]
    fn construction_enforces_the_domain() {
        assert!(MeasurementPoint::new(0.0, WeakValue::new(1.0, 0.0)).is_err());
        assert!(MeasurementPoint::new(-1.0, WeakValue::new(1.0, 0.0)).is_err());
        assert!(MeasurementPoint::new(f64::NAN, WeakValue::new(1.0, 0.0)).is_err());
        assert!(MeasurementPoint::new(1.0, WeakValue::new(f64::INFINITY, 0.0)).is_err());
        assert!(MeasurementPoint::new(1e-6, WeakValue::new(1e6, -1e6)).is_ok());
    }

    // Reference values computed with 40-digit arithmetic from the same
    // closed forms, then rounded once to f64.
    #[test]
    fn statistics_match_high_precision_references() {
        let cases = [
            (
                pt(0.5, 0.5, 0.0),
                [
                    0.852_448_997_392_237_53,
                    0.586_545_355_240_690_01,
                    0.0,
                    1.389_146_240_296_435_3,
                    0.183_295_423_512_715_63,
                ],
            ),
            (
                pt(1.0, 0.3, 0.4),
                [
                    0.762_954_790_439_290_87,
                    0.393_208_095_367_311_70,
                    0.192_870_899_183_751_77,
                    1.164_570_925_752_843_8,
                    0.281_984_348_263_283_78,
                ],
            ),
            (
                pt(1.0, 0.0, 2.0),
                [
                    1.948_180_838_242_836_5,
                    0.0,
                    0.377_664_571_943_179_07,
                    1.783_248_428_957_384_3,
                    0.640_617_900_056_359_62,
                ],
            ),
            (
                pt(0.01, 2.0, -1.0),
                [
                    1.019_900_332_501_663_9,
                    1.960_975_927_024_454_8,
                    -0.009_707_319_452_683_410_7,
                    49.096_037_304_167_262,
                    0.005_099_914_338_097_222_5,
                ],
            ),
            (
                pt(10.0, 0.7, 0.2),
                [
                    0.765_010_668_983_494_18,
                    0.915_019_918_519_728_71,
                    1.186_909_715_202_008_4e-4,
                    0.212_724_602_522_995_41,
                    4.998_605_366_997_090_9,
                ],
            ),
        ];
        for (point, want) in cases {
            let got = moments_nonorthogonal(point);
            assert_close(got.z, want[0], 1e-15, "z");
            assert_close(got.mean_q, want[1], 1e-15, "mean_q");
            assert_close(got.mean_p, want[2], 1e-15, "mean_p");
            assert_close(got.var_q, want[3], 1e-14, "var_q");
            assert_close(got.var_p, want[4], 1e-14, "var_p");
        }
    }

    #[test]
    fn strong_coupling_pins_the_pointer_mean() {
        let stats = moments_nonorthogonal(pt(50.0, 0.5, 0.0));
        let limit = 2.0 * 0.5 / (1.0 + 0.25);
        assert!((stats.mean_q - limit).abs() < tolerances::STRONG_LIMIT);
        assert_close(stats.z, 0.625, 1e-12, "z at s = 50");
        assert_close(stats.var_q, 0.37, 1e-12, "var_q at s = 50");
        assert_close(stats.var_p, 25.0, 1e-12, "var_p at s = 50");
    }

    #[test]
    fn weak_coupling_recovers_the_weak_value_at_linear_order() {
        for s in [1e-4, 1e-3, 1e-2] {
            let stats = moments_nonorthogonal(pt(s, 0.3, 0.4));
            // mean_q - Re A_w and mean_p are both O(s); the ratios stay
            // bounded as s shrinks.
            assert!((stats.mean_q - 0.3).abs() / s < 1.0);
            assert!(stats.mean_p.abs() / s < 1.0);
        }
    }

    #[test]
    fn densities_match_high_precision_references() {
        let a = pt(1.0, 0.3, 0.4);
        assert_close(
            density_p_nonorthogonal(a, 0.7),
            0.490_588_500_014_426_21,
            1e-14,
            "density_p",
        );
        assert_close(
            density_q_nonorthogonal(a, 0.7),
            0.381_748_303_164_857_47,
            1e-14,
            "density_q",
        );
        let b = pt(0.5, 0.5, 0.0);
        assert_close(
            density_p_nonorthogonal(b, -1.2),
            0.018_309_568_654_387_812,
            1e-14,
            "density_p",
        );
        assert_close(
            density_q_nonorthogonal(b, -1.2),
            0.103_891_318_581_968_83,
            1e-14,
            "density_q",
        );
    }

    #[test]
    fn density_moments_reproduce_the_statistics() {
        let point = pt(1.0, 0.3, 0.4);
        let stats = moments_nonorthogonal(point);
        let sigma_v = (0.5 / point.s()).sqrt();
        let p_curve = crate::curve::Curve::tabulate(
            |u| density_p_nonorthogonal(point, u),
            -13.0 * (0.5 * point.s()).sqrt(),
            13.0 * (0.5 * point.s()).sqrt(),
            4001,
        )
        .unwrap();
        let q_curve = crate::curve::Curve::tabulate(
            |v| density_q_nonorthogonal(point, v),
            -1.0 - 13.0 * sigma_v,
            1.0 + 13.0 * sigma_v,
            4001,
        )
        .unwrap();
        assert!((p_curve.integral() - 1.0).abs() < tolerances::ORACLE);
        assert!((q_curve.integral() - 1.0).abs() < tolerances::ORACLE);
        assert!((p_curve.moment(1) - stats.mean_p).abs() < tolerances::ORACLE);
        assert!((q_curve.moment(1) - stats.mean_q).abs() < tolerances::ORACLE);
        let p_m2 = stats.var_p + stats.mean_p * stats.mean_p;
        let q_m2 = stats.var_q + stats.mean_q * stats.mean_q;
        assert!((p_curve.moment(2) - p_m2).abs() < tolerances::ORACLE);
        assert!((q_curve.moment(2) - q_m2).abs() < tolerances::ORACLE);
    }

    #[test]
    fn eigenstate_post_selection_is_transparent_in_momentum() {
        for re in [1.0, -1.0] {
            let point = pt(0.7, re, 0.0);
            for u in [-2.5f64, -0.3, 0.0, 0.4, 1.9] {
                let gauss = (-u * u / 0.7).exp() / (std::f64::consts::PI * 0.7).sqrt();
                let d = density_p_nonorthogonal(point, u);
                assert!((d - gauss).abs() < tolerances::EIGENSTATE_ABS);
            }
        }
    }

    #[test]
    fn wu_li_shifts_track_the_exact_statistics_when_weak() {
        let point = pt(1e-3, 0.3, 0.4);
        let exact = moments_nonorthogonal(point);
        let (dq, dp) = wu_li_shifts(point, WeakValue::new(1.0, 0.0), 0.0);
        assert_close(dq, 0.300_112_542_203_326_25, 1e-14, "delta_q");
        assert_close(dp, 4.001_500_562_711_016_6e-4, 1e-14, "delta_p");
        assert!((dq - exact.mean_q).abs() / exact.mean_q.abs() < tolerances::WU_LI_WEAK);
        assert!((dp - exact.mean_p).abs() / exact.mean_p.abs() < tolerances::WU_LI_WEAK);
    }

    #[test]
    fn wu_li_shifts_degenerate_cases() {
        let (dq, dp) = wu_li_shifts(pt(0.8, 0.6, 0.0), WeakValue::new(1.0, 0.0), 0.0);
        assert_eq!(dp, 0.0);
        assert!(dq.is_finite());
        let (dq1, _) = wu_li_shifts(pt(2.0, 1.0, 0.0), WeakValue::new(1.0, 0.0), 0.0);
        assert_eq!(dq1, 1.0);
    }

    #[test]
    fn orthogonal_weak_values_are_the_harmonic_sequence_on_even_orders() {
        assert_eq!(orthogonal_weak_value(0), 1.0);
        assert_eq!(orthogonal_weak_value(1), 0.0);
        assert_eq!(orthogonal_weak_value(4), 0.2);
        assert_eq!(orthogonal_weak_value(7), 0.0);
        assert_eq!(orthogonal_weak_value(10), 1.0 / 11.0);
    }

    #[test]
    fn orthogonal_stats_dual_report_matches_references() {
        let o = moments_orthogonal(1.0).unwrap();
        assert_close(o.z_o_closed, -0.471_517_764_685_769_29, 1e-13, "z_o_closed");
        assert_close(o.z_o_series, 0.632_120_558_828_557_68, 1e-13, "z_o_series");
        assert_close(
            o.var_p_closed,
            -1.450_506_792_764_244_9,
            1e-13,
            "var_p_closed",
        );
        assert_close(
            o.var_q_closed,
            -4.911_925_812_504_130_8,
            1e-13,
            "var_q_closed",
        );
        assert_close(o.var_p_grid, 1.081_976_706_869_326_4, 1e-8, "var_p_grid");
        assert_close(o.var_q_grid, 2.081_976_706_869_326_4, 1e-8, "var_q_grid");
        assert_eq!(o.mean_q, 0.0);
        assert_eq!(o.mean_p, 0.0);

        let o = moments_orthogonal(0.5).unwrap();
        assert_close(o.z_o_closed, 0.147_754_722_298_932_61, 1e-12, "z_o_closed");
        assert_close(o.z_o_series, 0.786_938_680_574_733_15, 1e-13, "z_o_series");
        assert_close(o.var_p_grid, 0.635_373_520_634_199_57, 1e-8, "var_p_grid");
        assert_close(o.var_q_grid, 3.541_494_082_536_798_3, 1e-8, "var_q_grid");
    }

    #[test]
    fn orthogonal_densities_match_references_and_normalization() {
        assert_close(
            density_p_orthogonal(1.0, 0.7, DensityForm::Closed).unwrap(),
            -0.304_220_164_329_427_62,
            1e-13,
            "closed p",
        );
        assert_close(
            density_p_orthogonal(1.0, 0.7, DensityForm::Normalized).unwrap(),
            0.453_853_967_739_258_43,
            1e-14,
            "normalized p",
        );
        assert_close(
            density_q_orthogonal(1.0, 0.7, DensityForm::Closed).unwrap(),
            -0.310_359_638_209_250_77,
            1e-13,
            "closed q",
        );
        assert_close(
            density_q_orthogonal(1.0, 0.7, DensityForm::Normalized).unwrap(),
            0.231_506_602_361_275_24,
            1e-14,
            "normalized q",
        );
        for s in [0.2f64, 1.0, 3.0] {
            let sigma_u = (0.5 * s).sqrt();
            let p = crate::curve::Curve::tabulate(
                |u| density_p_orthogonal(s, u, DensityForm::Normalized).unwrap(),
                -13.0 * sigma_u,
                13.0 * sigma_u,
                4001,
            )
            .unwrap();
            let sigma_v = (0.5 / s).sqrt();
            let q = crate::curve::Curve::tabulate(
                |v| density_q_orthogonal(s, v, DensityForm::Normalized).unwrap(),
                -1.0 - 13.0 * sigma_v,
                1.0 + 13.0 * sigma_v,
                4001,
            )
            .unwrap();
            assert!((p.integral() - 1.0).abs() < tolerances::UNIT_INTEGRAL);
            assert!((q.integral() - 1.0).abs() < tolerances::UNIT_INTEGRAL);
        }
    }

    #[test]
    fn orthogonal_densities_vanish_at_the_dark_fringe() {
        for s in [0.3, 1.0, 5.0] {
            for form in [DensityForm::Closed, DensityForm::Normalized] {
                assert_eq!(density_p_orthogonal(s, 0.0, form).unwrap(), 0.0);
                assert_eq!(density_q_orthogonal(s, 0.0, form).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn quoted_closed_form_momentum_density_goes_negative() {
        let v = density_p_orthogonal(1.0, std::f64::consts::FRAC_PI_2, DensityForm::Closed)
            .unwrap();
        assert!(v < 0.0);
    }

    #[test]
    fn orthogonal_operations_reject_non_positive_s() {
        assert!(moments_orthogonal(0.0).is_err());
        assert!(density_p_orthogonal(-1.0, 0.3, DensityForm::Normalized).is_err());
        assert!(density_q_orthogonal(f64::NAN, 0.3, DensityForm::Closed).is_err());
    }

    #[test]
    fn densities_survive_extreme_arguments_without_overflow() {
        let point = pt(40.0, 0.9, -0.2);
        for v in [-60.0, -5.0, 5.0, 60.0] {
            let d = density_q_nonorthogonal(point, v);
            assert!(d.is_finite() && d >= 0.0);
        }
        for u in [-300.0, 300.0] {
            let d = density_p_nonorthogonal(point, u);
            assert!(d.is_finite() && d >= 0.0);
        }
    }
}
