//! Hermite polynomials in the probabilists' convention and the identity
//! suite the series reductions lean on.
//!
//! Convention: H_0 = 1, H_1 = x, H_(n+1) = x H_n - n H_(n-1), equivalent to
//! H_n(x) = (-1)^n e^(x^2/2) d^n/dx^n e^(-x^2/2). The recurrence is the
//! stable way to evaluate these; the explicit-coefficient form loses
//! catastrophically past n of a few dozen.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tolerances;

/// Stability ceiling for the three-term recurrence in f64.
pub const MAX_HERMITE_ORDER: u32 = 64;

pub fn hermite(n: u32, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::HermiteOrder {
            n: n as usize,
            max: MAX_HERMITE_ORDER as usize,
        });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = x;
    for m in 1..n {
        let next = x * cur - m as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn double_factorial_odd(k: u32) -> f64 {
    // (2k - 1)!! with the empty-product convention at k = 0.
    let mut acc = 1.0;
    for j in 1..=k {
        acc *= (2 * j - 1) as f64;
    }
    acc
}

fn binomial(n: u32, k: u32) -> f64 {
    // Multiplicative form; exact in f64 through the n <= 25 used here.
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Residual between two sides of an identity, scaled by the larger side
/// once that exceeds 1. The binomial sums reach 1e18 at the largest (k, x)
/// in the default sweep, where absolute f64 spacing alone is in the
/// thousands; scaling measures the accuracy actually available.
fn identity_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

fn fold_max(slot: &mut f64, value: f64) {
    if value > *slot {
        *slot = value;
    }
}

/// Sweep the identity suite and report the worst residual per identity.
///
/// Keys: parity_even, parity_odd, zero_even, zero_odd, sum_rule, the four
/// binomial product sums (binom_even_even, binom_odd_odd, binom_odd_even,
/// binom_even_odd, named by the parities of the two polynomial degrees in
/// each product), and the hyperbolic generating sums generate_sinh and
/// generate_cosh. Indexed identities sweep k = 0..=k_max, the sum rule
/// sweeps orders up to 2 k_max over pairs drawn from `xs`, and the
/// generating sums run t in {0.25, 0.5, 1} truncated at factorial decay.
pub fn hermite_identity_residuals(k_max: u32, xs: &[f64]) -> Result<BTreeMap<String, f64>> {
    if k_max > 12 {
        return Err(Error::Domain(format!(
            "identity sweep is calibrated for k_max <= 12, got {k_max}"
        )));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("identity sweep abscissae must be finite".into()));
    }
    let mut out: BTreeMap<String, f64> = [
        "parity_even",
        "parity_odd",
        "zero_even",
        "zero_odd",
        "sum_rule",
        "binom_even_even",
        "binom_odd_odd",
        "binom_odd_even",
        "binom_even_odd",
        "generate_sinh",
        "generate_cosh",
    ]
    .into_iter()
    .map(|k| (k.to_string(), 0.0))
    .collect();

    let sqrt2 = std::f64::consts::SQRT_2;

    for k in 0..=k_max {
        fold_max(
            out.get_mut("zero_even").unwrap(),
            identity_residual(
                hermite(2 * k, 0.0)?,
                if k % 2 == 0 { 1.0 } else { -1.0 } * double_factorial_odd(k),
            ),
        );
        fold_max(
            out.get_mut("zero_odd").unwrap(),
            identity_residual(hermite(2 * k + 1, 0.0)?, 0.0),
        );
        for &x in xs {
            fold_max(
                out.get_mut("parity_even").unwrap(),
                identity_residual(hermite(2 * k, -x)?, hermite(2 * k, x)?),
            );
            fold_max(
                out.get_mut("parity_odd").unwrap(),
                identity_residual(hermite(2 * k + 1, -x)?, -hermite(2 * k + 1, x)?),
            );

            // Product sums over a split of the binomial index; the name
            // records the degree parities of the two factors.
            let mut even_even = 0.0;
            for r in 0..=k {
                even_even += binomial(2 * k, 2 * r)
                    * hermite(2 * k - 2 * r, sqrt2 * x)?
                    * hermite(2 * r, sqrt2 * x)?;
            }
            let parity_sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let h2k_2x = hermite(2 * k, 2.0 * x)?;
            fold_max(
                out.get_mut("binom_even_even").unwrap(),
                identity_residual(
                    even_even,
                    0.5 * 2f64.powi(k as i32) * (h2k_2x + parity_sign * double_factorial_odd(k)),
                ),
            );

            if k >= 1 {
                let mut odd_odd = 0.0;
                for r in 0..k {
                    odd_odd += binomial(2 * k, 2 * r + 1)
                        * hermite(2 * k - 2 * r - 1, sqrt2 * x)?
                        * hermite(2 * r + 1, sqrt2 * x)?;
                }
                fold_max(
                    out.get_mut("binom_odd_odd").unwrap(),
                    identity_residual(
                        odd_odd,
                        0.5 * 2f64.powi(k as i32)
                            * (h2k_2x - parity_sign * double_factorial_odd(k)),
                    ),
                );
            }

            let mut odd_even = 0.0;
            let mut even_odd = 0.0;
            for r in 0..=k {
                odd_even += binomial(2 * k + 1, 2 * r)
                    * hermite(2 * k + 1 - 2 * r, sqrt2 * x)?
                    * hermite(2 * r, sqrt2 * x)?;
                even_odd += binomial(2 * k + 1, 2 * r + 1)
                    * hermite(2 * k - 2 * r, sqrt2 * x)?
                    * hermite(2 * r + 1, sqrt2 * x)?;
            }
            let rhs_odd = 2f64.powi(k as i32) / sqrt2 * hermite(2 * k + 1, 2.0 * x)?;
            fold_max(
                out.get_mut("binom_odd_even").unwrap(),
                identity_residual(odd_even, rhs_odd),
            );
            fold_max(
                out.get_mut("binom_even_odd").unwrap(),
                identity_residual(even_odd, rhs_odd),
            );
        }
    }

    // Addition rule H_n(x + y) = 2^(-n/2) sum_r C(n, r)
    // H_(n-r)(sqrt2 x) H_r(sqrt2 y), checked on the diagonal y = x where
    // the binomial splits below rearrange it; every term then stays within
    // the scale of H_n(2x) instead of cancelling across the row.
    for n in 0..=(2 * k_max) {
        let scale = 2f64.powf(-(n as f64) / 2.0);
        for &x in xs {
            let mut sum = 0.0;
            for r in 0..=n {
                sum += binomial(n, r) * hermite(n - r, sqrt2 * x)? * hermite(r, sqrt2 * x)?;
            }
            fold_max(
                out.get_mut("sum_rule").unwrap(),
                identity_residual(hermite(n, 2.0 * x)?, scale * sum),
            );
        }
    }

    // Hyperbolic generating sums, truncated once terms fall below the
    // factorial-decay floor; the polynomial order stays within the
    // recurrence ceiling for every t used here.
    for &t in &[0.25f64, 0.5, 1.0] {
        for &x in xs {
            let weight = (0.5 * t * t).exp();
            let mut cosh_sum = 0.0;
            let mut sinh_sum = 0.0;
            let mut t_even = 1.0;
            let mut fact_even = 1.0;
            let mut fact_odd = 1.0;
            for n in 0..=(MAX_HERMITE_ORDER / 2) {
                let even_term = hermite(2 * n, x)? * t_even / fact_even;
                let odd_term = hermite(2 * n + 1, x)? * t_even * t / fact_odd;
                cosh_sum += even_term;
                sinh_sum += odd_term;
                if even_term.abs() < tolerances::GENERATING_STOP
                    && odd_term.abs() < tolerances::GENERATING_STOP
                {
                    break;
                }
                t_even *= t * t;
                fact_even *= ((2 * n + 1) * (2 * n + 2)) as f64;
                fact_odd *= ((2 * n + 2) * (2 * n + 3)) as f64;
            }
            fold_max(
                out.get_mut("generate_cosh").unwrap(),
                identity_residual((t * x).cosh(), weight * cosh_sum),
            );
            fold_max(
                out.get_mut("generate_sinh").unwrap(),
                identity_residual((t * x).sinh(), weight * sinh_sum),
            );
        }
    }

    Ok(out)
}
