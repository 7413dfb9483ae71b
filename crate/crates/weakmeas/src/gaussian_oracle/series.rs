//! Truncated operator-expansion route to the post-selected statistics.
//!
//! Every quantity here is assembled term by term from the raw Gaussian
//! moment ladders in the parent module, with the expansion coefficients
//! carried by recurrence. Nothing is simplified analytically along the
//! way, so agreement with the closed forms is evidence, not tautology.

use crate::error::{Error, Result};
use crate::tolerances;
use crate::weak_core::{orthogonal_weak_value, MeasurementPoint, PointerStats};

use super::{gaussian_moment_p, mixed_gaussian_moment, MixedMomentKind};

/// Hard ceiling on the expansion order. The factorial coefficients stay
/// representable in f64 through this order; not far beyond it they leave
/// the exponent range entirely.
pub const MAX_SERIES_TERMS: usize = 80;

fn validate_terms(n_terms: usize) -> Result<()> {
    if n_terms == 0 || n_terms > MAX_SERIES_TERMS {
        return Err(Error::Domain(format!(
            "series length must lie in 1..={MAX_SERIES_TERMS}, got {n_terms}"
        )));
    }
    Ok(())
}

/// Sum `terms` onto `init`, stopping early once two consecutive terms are
/// negligible against the running total. A truncation that still carries
/// a non-negligible final term is reported as non-convergence rather than
/// returned as a silently wrong number.
fn sum_terms<I>(init: f64, terms: I) -> Result<f64>
where
    I: IntoIterator<Item = f64>,
{
    let mut acc = init;
    let mut consecutive_small = 0usize;
    let mut last = 0.0f64;
    let mut count = 0usize;
    for term in terms {
        count += 1;
        if !term.is_finite() {
            return Err(Error::SeriesNonConvergence {
                terms: count,
                last_ratio: f64::INFINITY,
            });
        }
        acc += term;
        last = term;
        if last.abs() <= tolerances::SERIES_STOP * acc.abs().max(1.0) {
            consecutive_small += 1;
            if consecutive_small >= 2 {
                return Ok(acc);
            }
        } else {
            consecutive_small = 0;
        }
    }
    if last.abs() <= tolerances::SERIES_GUARD * acc.abs().max(1.0) {
        Ok(acc)
    } else {
        Err(Error::SeriesNonConvergence {
            terms: count,
            last_ratio: last.abs() / acc.abs().max(1.0),
        })
    }
}

/// Terms of the even norm sum: (1 - beta)/2 (-4)^n m_2n / (2n)! for
/// n = 1..=n_terms. The shared prefactor is folded into each term so a
/// unit-modulus weak value zeroes the whole sum identically instead of
/// leaving a 0 * divergent ambiguity at large s.
fn even_norm_terms(s: f64, beta: f64, n_terms: usize) -> Vec<f64> {
    let weight = 0.5 * (1.0 - beta);
    let mut coeff = 1.0;
    let mut terms = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        coeff *= -4.0 / ((2 * n - 1) as f64 * (2 * n) as f64);
        terms.push(weight * coeff * gaussian_moment_p(2 * n as u32, s));
    }
    terms
}

/// Imaginary-part norm sum: 2 Im A_w (-1)^n 2^2n m_(2n+1) / (2n+1)! for
/// n = 0..n_terms. Every odd moment vanishes, so each term is exactly
/// zero; the sum is kept so the expansion stays the one being tested.
fn odd_norm_terms(s: f64, im: f64, n_terms: usize) -> Vec<f64> {
    let mut coeff = 2.0;
    let mut terms = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        if n > 0 {
            coeff *= -4.0 / ((2 * n) as f64 * (2 * n + 1) as f64);
        }
        terms.push(im * coeff * gaussian_moment_p(2 * n as u32 + 1, s));
    }
    terms
}

/// Truncated series for the post-selection norm z.
pub fn series_z(pt: MeasurementPoint, n_terms: usize) -> Result<f64> {
    validate_terms(n_terms)?;
    let s = pt.s();
    let w = pt.weak_value();
    let even = sum_terms(1.0, even_norm_terms(s, w.modulus_sq(), n_terms))?;
    let odd = sum_terms(0.0, odd_norm_terms(s, w.im, n_terms))?;
    Ok(even + odd)
}

/// Terms of z <u>': 2 Im A_w (-4)^n m_(2n+2) / (2n+1)! for n = 0..n_terms.
fn mean_u_terms(s: f64, im: f64, n_terms: usize) -> Vec<f64> {
    let mut coeff = 2.0;
    let mut terms = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        if n > 0 {
            coeff *= -4.0 / ((2 * n) as f64 * (2 * n + 1) as f64);
        }
        terms.push(im * coeff * gaussian_moment_p(2 * n as u32 + 2, s));
    }
    terms
}

/// Terms of z <u^2>' beyond the free m_2: (1 - beta)/2 (-4)^n m_(2n+2) / (2n)!.
fn second_u_terms(s: f64, beta: f64, n_terms: usize) -> Vec<f64> {
    let weight = 0.5 * (1.0 - beta);
    let mut coeff = 1.0;
    let mut terms = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        coeff *= -4.0 / ((2 * n - 1) as f64 * (2 * n) as f64);
        terms.push(weight * coeff * gaussian_moment_p(2 * n as u32 + 2, s));
    }
    terms
}

/// Terms of z <v^2>' beyond order one: (1 - beta)/4 (-4)^n times the
/// bracket [ <q^2 p^2n + p^2n q^2>_sym + n (2n - 1) m_(2n-2) ] / (2n)!.
fn second_v_terms(s: f64, beta: f64, n_terms: usize) -> Result<Vec<f64>> {
    let weight = 0.25 * (1.0 - beta);
    let mut coeff = -4.0 / 2.0;
    let mut terms = Vec::with_capacity(n_terms.saturating_sub(1));
    for n in 2..=n_terms {
        coeff *= -4.0 / ((2 * n - 1) as f64 * (2 * n) as f64);
        let mixed = mixed_gaussian_moment(MixedMomentKind::Q2P2nSym, n as u32, s)?;
        let echo = (n * (2 * n - 1)) as f64 * gaussian_moment_p(2 * n as u32 - 2, s);
        terms.push(weight * coeff * (mixed + echo));
    }
    Ok(terms)
}

/// Truncated series for all five pointer statistics.
///
/// The mean of v and the odd-moment companions of the second-moment sums
/// are built entirely from expectations that vanish identically for the
/// real centered Gaussian (odd m_k, and the symmetrized mixed families),
/// so those contributions enter as their exact zeroes rather than as
/// materialized sums of zeros.
pub fn series_moments(pt: MeasurementPoint, n_terms: usize) -> Result<PointerStats> {
    validate_terms(n_terms)?;
    let s = pt.s();
    let w = pt.weak_value();
    let beta = w.modulus_sq();

    let z = series_z(pt, n_terms)?;
    let z_mean_u = sum_terms(0.0, mean_u_terms(s, w.im, n_terms))?;
    let z_mean_v = w.re + w.im * mixed_gaussian_moment(MixedMomentKind::QpSym, 1, s)?;
    let z_second_u = sum_terms(
        gaussian_moment_p(2, s),
        second_u_terms(s, beta, n_terms),
    )?;
    let order_one_v = 0.5
        * (2.0 * beta - (1.0 - beta) * mixed_gaussian_moment(MixedMomentKind::Q2P2nSym, 1, s)?);
    let z_second_v = sum_terms(0.5 / s + order_one_v, second_v_terms(s, beta, n_terms)?)?;

    let mean_p = z_mean_u / z;
    let mean_q = z_mean_v / z;
    Ok(PointerStats {
        z,
        mean_q,
        mean_p,
        var_q: z_second_v / z - mean_q * mean_q,
        var_p: z_second_u / z - mean_p * mean_p,
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Signed alternating pairing of the orthogonal weak-value ladder at
/// order 2j: sum over k of (-1)^k C(2j, k) <A^(2j-k)>_ow <A^k>_ow.
fn orthogonal_pairing(j: usize) -> f64 {
    let n = 2 * j;
    let mut acc = 0.0;
    for r in 0..=j {
        acc += binomial(n, 2 * r)
            * orthogonal_weak_value((n - 2 * r) as u32)
            * orthogonal_weak_value(2 * r as u32);
    }
    acc
}

fn orthogonal_norm_terms(s: f64, n_terms: usize) -> Vec<f64> {
    let mut factor = 1.0;
    let mut terms = Vec::with_capacity(n_terms);
    for j in 0..n_terms {
        if j > 0 {
            factor *= -1.0 / ((2 * j - 1) as f64 * (2 * j) as f64);
        }
        let moment_ratio = gaussian_moment_p(2 * j as u32 + 2, s) / (0.5 * s);
        terms.push(factor * moment_ratio * orthogonal_pairing(j));
    }
    terms
}

/// Truncated series for the orthogonal post-selection norm z_o, built on
/// the ladder <A^n>_ow instead of powers of a single weak value.
pub fn series_z_orthogonal(s: f64, n_terms: usize) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "coupling strength s must be positive and finite, got {s}"
        )));
    }
    validate_terms(n_terms)?;
    sum_terms(0.0, orthogonal_norm_terms(s, n_terms))
}
