//! Independent numerical routes to the pointer statistics.
//!
//! Two oracles live here. [`grid`] simulates the post-selected pointer
//! wavefunction on a momentum grid and moves between conjugate spaces with
//! a unitary transform; [`series`] sums the defining operator expansions
//! term by term out of the Gaussian moments below. Neither route shares
//! arithmetic with the closed forms in [`crate::weak_core`], which is what
//! makes three-way agreement evidence instead of tautology.

pub mod grid;
pub mod hermite;
pub mod series;

pub use grid::{
    initial_wave, oracle_report, orthogonal_grid_reference, postselect_wave, to_momentum_space,
    to_position_space, GridSpec, OracleReport, OrthogonalGridRef, SpaceTag, WaveGrid,
};
pub use hermite::{hermite, hermite_identity_residuals, MAX_HERMITE_ORDER};
pub use series::{series_moments, series_z, series_z_orthogonal, MAX_SERIES_TERMS};

use crate::error::{Error, Result};

/// Central moment <u^n> of the detector momentum distribution, whose
/// variance is s/2. Odd moments vanish; even ones are (n-1)!! (s/2)^(n/2),
/// accumulated as a product of (2j-1)(s/2) pairs so neither factor
/// overflows on its own. Callers guarantee s > 0.
pub fn gaussian_moment_p(n: u32, s: f64) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let half = 0.5 * s;
    let mut acc = 1.0;
    for j in 1..=(n / 2) {
        acc *= (2 * j - 1) as f64 * half;
    }
    acc
}

/// Which symmetrized mixed moment of the detector state to evaluate.
///
/// All three families are Weyl-ordered expectations in the initial real
/// Gaussian, where <q> = <p> = 0 and the symmetrized <{q, p}> vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedMomentKind {
    /// Symmetrized <q p^n>: zero at every order for the real Gaussian.
    QpSym,
    /// Symmetrized <q^2 p^(2n) + p^(2n) q^2>; commutator cross terms
    /// outweigh the product of squares, making every order negative.
    Q2P2nSym,
    /// Symmetrized <q^2 p^(2n+1)>: zero at every order.
    Q2POddSym,
}

/// Evaluate a [`MixedMomentKind`] family member. The even family needs
/// n >= 1; order zero has no momentum factor to entangle with q^2 and is
/// reported as undefined rather than silently extrapolated.
pub fn mixed_gaussian_moment(kind: MixedMomentKind, n: u32, s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    match kind {
        MixedMomentKind::QpSym | MixedMomentKind::Q2POddSym => Ok(0.0),
        MixedMomentKind::Q2P2nSym => {
            if n == 0 {
                return Err(Error::MomentUndefined(
                    "symmetrized <q^2 p^0> has no mixed content at order zero".into(),
                ));
            }
            let half = 0.5 * s;
            // -((2n-1)/2) (2n-1)!! (s/2)^(n-1), built up pairwise like
            // gaussian_moment_p.
            let mut acc = -0.5 * (2 * n - 1) as f64;
            for j in 1..n {
                acc *= (2 * j + 1) as f64 * half;
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_moments_follow_the_double_factorial_ladder() {
        assert_eq!(gaussian_moment_p(0, 3.0), 1.0);
        assert_eq!(gaussian_moment_p(2, 3.0), 1.5);
        assert_eq!(gaussian_moment_p(4, 2.0), 3.0);
        assert_eq!(gaussian_moment_p(6, 1.0), 1.875);
        assert_eq!(gaussian_moment_p(8, 0.5), 0.41015625);
        for n in [1, 3, 9, 41] {
            assert_eq!(gaussian_moment_p(n, 0.7), 0.0);
        }
    }

    #[test]
    fn moment_ratio_matches_the_recurrence() {
        // m_{2k+2} / m_{2k} = (2k+1) s/2; checking ratios exercises the
        // pairing order of the accumulation.
        for k in 1u32..20 {
            let s = 0.37;
            let lo = gaussian_moment_p(2 * k, s);
            let hi = gaussian_moment_p(2 * k + 2, s);
            let ratio = hi / lo;
            let want = (2 * k + 1) as f64 * 0.5 * s;
            assert!((ratio - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn high_even_moments_stay_finite_for_moderate_s() {
        let m = gaussian_moment_p(160, 20.0);
        assert!(m.is_finite() && m > 0.0);
    }

    #[test]
    fn vanishing_mixed_families_are_zero_at_all_orders() {
        for n in [0, 1, 2, 7, 30] {
            assert_eq!(
                mixed_gaussian_moment(MixedMomentKind::QpSym, n, 1.3).unwrap(),
                0.0
            );
            assert_eq!(
                mixed_gaussian_moment(MixedMomentKind::Q2POddSym, n, 0.2).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn even_mixed_moments_match_references() {
        let m = |n, s| mixed_gaussian_moment(MixedMomentKind::Q2P2nSym, n, s).unwrap();
        assert_eq!(m(1, 0.1), -0.5);
        assert_eq!(m(1, 5.0), -0.5);
        assert_eq!(m(2, 1.0), -2.25);
        assert_eq!(m(3, 2.0), -37.5);
    }

    #[test]
    fn order_zero_even_mixed_moment_is_undefined() {
        let err = mixed_gaussian_moment(MixedMomentKind::Q2P2nSym, 0, 1.0).unwrap_err();
        assert!(matches!(err, Error::MomentUndefined(_)));
    }

    #[test]
    fn mixed_moments_reject_bad_s() {
        assert!(mixed_gaussian_moment(MixedMomentKind::QpSym, 1, 0.0).is_err());
        assert!(mixed_gaussian_moment(MixedMomentKind::Q2P2nSym, 1, f64::NAN).is_err());
    }
}
