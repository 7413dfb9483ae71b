//! Numerical tolerances used throughout the crate.
//!
//! Every bound states what limits it, so a reviewer can tell a genuine
//! regression from an accidental tolerance bump. Tests that compare against
//! these constants should cite them rather than repeating magic numbers.

/// Agreement between two closed-form evaluations of the same quantity.
/// Well-conditioned double-precision formulas leave three to four guard
/// digits beyond this.
pub const CLOSED_FORM: f64 = 1e-12;

/// Scaled residual between closed forms and the grid simulation. Limited by
/// trapezoid quadrature and the discrete transform on the default grid, not
/// by the formulas.
pub const ORACLE: f64 = 1e-8;

/// Floor in the denominator of [`scaled_residual`]. With the `ORACLE`
/// threshold this makes the comparison relative above 0.01 in magnitude and
/// absolute at 1e-10 below it, which is where relative error stops meaning
/// anything.
pub const RESIDUAL_FLOOR: f64 = 1e-2;

/// Truncated series against closed forms at sixty terms and s <= 5. The
/// factorial tail is far smaller; the bound covers accumulated rounding in
/// the alternating sums.
pub const SERIES: f64 = 1e-10;

/// Series truncation: stop once the next term drops below this fraction of
/// the running sum.
pub const SERIES_STOP: f64 = 1e-15;

/// Series guard: if iteration ends while the last term still exceeds this
/// fraction of the sum, the evaluation is reported as non-convergent rather
/// than returned.
pub const SERIES_GUARD: f64 = 1e-12;

/// Unit-integral check for probability densities under trapezoid quadrature
/// on the ranges the crate emits.
pub const UNIT_INTEGRAL: f64 = 1e-9;

/// Wave-grid norm and transform unitarity (norm preservation, round trip).
pub const GRID_NORM: f64 = 1e-10;

/// Pointwise transparency of eigenstate post-selections: the post-selected
/// momentum density must reproduce the initial Gaussian to machine noise.
pub const EIGENSTATE_ABS: f64 = 1e-14;

/// Strong-coupling limit checks at s = 50; e^(-50) is far below this.
pub const STRONG_LIMIT: f64 = 1e-10;

/// State norms and hermiticity at setup construction, together with the
/// involution A^2 = 1.
pub const SETUP_UNIT: f64 = 1e-12;

/// Squared-overlap threshold below which a post-selection is treated as
/// orthogonal.
pub const ORTHOGONAL_OVERLAP_SQ: f64 = 1e-12;

/// Post-selection probabilities below this are degenerate: both amplitudes
/// vanished. Physically reachable probabilities in scope stay far above the
/// subnormal range.
pub const DEGENERATE_PROBABILITY: f64 = 1e-300;

/// Agreement between analytically optimal angles and dense-scan argmaxima.
pub const ANGLE_ARGMAX: f64 = 1e-8;

/// Golden-section refinement width in angle.
pub const GOLDEN_SECTION: f64 = 1e-10;

/// Residual of root equations (quadratics in cos, the global-maximum
/// transcendental) at the returned root.
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Relative residual bound for the Hermite identity suite. Both sides of
/// the order-24 binomial sums reach 1e18, so the bound is relative; see
/// `hermite_identity_residuals`.
pub const HERMITE_IDENTITIES: f64 = 1e-9;

/// Truncation threshold for the generating-function series in the Hermite
/// suite (factorial decay).
pub const GENERATING_STOP: f64 = 1e-14;

/// How far a curve handed to the sampler may be from unit integral.
pub const SAMPLER_UNIT_INTEGRAL: f64 = 1e-6;

/// Negative curve values larger than this fraction of the curve maximum are
/// rejected; smaller ones are float noise and are clamped to zero.
pub const CURVE_NEGATIVE_NOISE: f64 = 1e-12;

/// Wu-Li approximate shifts against exact statistics at s = 1e-3. The
/// approximation is accurate to O(s^2) for the position shift and O(s) for
/// the momentum shift, so 5e-3 relative holds with margin at this s.
pub const WU_LI_WEAK: f64 = 5e-3;

/// One-percent Kolmogorov-Smirnov critical coefficient,
/// sqrt(ln(2/0.01)/2); the critical value at sample size n is this over
/// sqrt(n).
pub const KS_COEFF_1PCT: f64 = 1.627_623_630_718_729_3;

/// Residual of `a` against reference `b`, relative above
/// [`RESIDUAL_FLOOR`] in magnitude and absolute below it.
pub fn scaled_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(RESIDUAL_FLOOR)
}
