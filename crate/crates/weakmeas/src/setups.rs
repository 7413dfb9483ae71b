//! Concrete two-level measurement geometries: the AAV spin-1/2 sequence
//! and the simplified DSJH Sagnac interferometer, with their closed-form
//! pointer responses and the variable correspondences that map them onto
//! the generic statistics in [`crate::weak_core`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;
use crate::weak_core::WeakValue;

/// A pre-selected state, a post-selected state, and an involutory
/// observable on a two-level system.
///
/// Construction validates unit norms, Hermiticity, and A^2 = 1, all within
/// 1e-12; every consumer of a `TwoLevelSetup` relies on those invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelSetup {
    pre: [Complex64; 2],
    post: [Complex64; 2],
    observable: [[Complex64; 2]; 2],
}

impl TwoLevelSetup {
    pub fn new(
        pre: [Complex64; 2],
        post: [Complex64; 2],
        observable: [[Complex64; 2]; 2],
    ) -> Result<Self> {
        for (name, state) in [("pre", &pre), ("post", &post)] {
            let norm = (state[0].norm_sqr() + state[1].norm_sqr()).sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > tolerances::SETUP_UNIT {
                return Err(Error::Domain(format!(
                    "{name}-selected state must have unit norm, got {norm}"
                )));
            }
        }
        let a = &observable;
        let hermitian = (a[0][1] - a[1][0].conj()).norm() <= tolerances::SETUP_UNIT
            && a[0][0].im.abs() <= tolerances::SETUP_UNIT
            && a[1][1].im.abs() <= tolerances::SETUP_UNIT;
        if !hermitian {
            return Err(Error::Domain("observable must be Hermitian".into()));
        }
        for i in 0..2 {
            for j in 0..2 {
                let entry = a[i][0] * a[0][j] + a[i][1] * a[1][j];
                let want = if i == j { 1.0 } else { 0.0 };
                if (entry - want).norm() > tolerances::SETUP_UNIT {
                    return Err(Error::Domain(
                        "observable must square to the identity".into(),
                    ));
                }
            }
        }
        Ok(Self {
            pre,
            post,
            observable,
        })
    }

    /// <post|pre>.
    pub fn overlap(&self) -> Complex64 {
        self.post[0].conj() * self.pre[0] + self.post[1].conj() * self.pre[1]
    }

    /// <post|A|pre>.
    pub fn transition(&self) -> Complex64 {
        let a_pre = [
            self.observable[0][0] * self.pre[0] + self.observable[0][1] * self.pre[1],
            self.observable[1][0] * self.pre[0] + self.observable[1][1] * self.pre[1],
        ];
        self.post[0].conj() * a_pre[0] + self.post[1].conj() * a_pre[1]
    }
}

/// Outcome of inspecting a setup's post-selection geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PostSelection {
    Regular {
        overlap: Complex64,
        weak_value: WeakValue,
    },
    /// The post-selected state is orthogonal to the pre-selected one; the
    /// transition amplitude <post|A|pre> is all that survives.
    Orthogonal { transition: Complex64 },
}

/// Classify a setup and extract its weak value when one exists.
///
/// A setup where the overlap and the transition amplitude both vanish has
/// no post-selected statistics at all (nothing survives either branch of
/// the evolution), which is the degenerate error case.
pub fn weak_value_of(setup: &TwoLevelSetup) -> Result<PostSelection> {
    let overlap = setup.overlap();
    let transition = setup.transition();
    let overlap_sq = overlap.norm_sqr();
    if overlap_sq < tolerances::ORTHOGONAL_OVERLAP_SQ {
        if transition.norm_sqr() < tolerances::ORTHOGONAL_OVERLAP_SQ {
            return Err(Error::DegeneratePostSelection {
                probability: overlap_sq,
            });
        }
        return Ok(PostSelection::Orthogonal { transition });
    }
    Ok(PostSelection::Regular {
        overlap,
        weak_value: WeakValue::from_complex(transition / overlap),
    })
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Spin-1/2 setup: pre-selection at angle alpha, post-selection on the
/// +x eigenstate, observable sigma_z.
///
/// The pre-state amplitudes are the signed combinations
/// (cos(alpha/2) +/- sin(alpha/2))/sqrt(2): the signed branch is the one
/// that yields the weak value tan(alpha/2) for every alpha and an overlap
/// cos(alpha/2) that genuinely vanishes at alpha = pi. Taking absolute
/// values there instead would destroy both properties past alpha = pi/2.
/// `alpha` must be finite.
pub fn aav_setup(alpha: f64) -> TwoLevelSetup {
    let (sin_half, cos_half) = (0.5 * alpha).sin_cos();
    let pre = [
        Complex64::new((cos_half + sin_half) * FRAC_1_SQRT_2, 0.0),
        Complex64::new((cos_half - sin_half) * FRAC_1_SQRT_2, 0.0),
    ];
    let post = [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ];
    let observable = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ];
    TwoLevelSetup::new(pre, post, observable).expect("trigonometric construction is unit and involutory")
}

/// Sagnac which-path setup: Soleil-Babinet phase phi between the two
/// propagation directions, dark-port post-selection.
///
/// The clockwise path sits in component 0 (observable eigenvalue +1) and
/// the relative phases are fixed so the weak value comes out as the pure
/// imaginary -i cot(phi/2); the opposite sign convention, equally
/// consistent with the ket layout alone, would flip the sign of every
/// pointer deflection. `phi` must be finite.
pub fn dsjh_setup(phi: f64) -> TwoLevelSetup {
    let half = Complex64::from_polar(FRAC_1_SQRT_2, 0.5 * phi);
    let pre = [half, Complex64::new(0.0, 1.0) * half.conj()];
    let post = [
        Complex64::new(0.0, FRAC_1_SQRT_2),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ];
    let observable = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ];
    TwoLevelSetup::new(pre, post, observable).expect("phase construction is unit and involutory")
}

/// Two-level setup realizing a prescribed regular weak value exactly.
///
/// The observable is sigma_z and the post-selection is the +x eigenstate,
/// so a pre-state proportional to (1 + w, 1 - w) makes the transition to
/// overlap ratio collapse to w with no trigonometry in between. The
/// post-selection probability is 1/(1 + |w|^2); moduli large enough to
/// push that below the orthogonality threshold are rejected, so the
/// classification of the returned setup always lands on the regular
/// branch.
pub fn setup_with_weak_value(w: WeakValue) -> Result<TwoLevelSetup> {
    let wc = w.as_complex();
    if !(wc.re.is_finite() && wc.im.is_finite()) {
        return Err(Error::Domain(format!(
            "weak value must be finite, got {} + {}i",
            wc.re, wc.im
        )));
    }
    if w.modulus_sq() >= 0.1 / tolerances::ORTHOGONAL_OVERLAP_SQ {
        return Err(Error::Domain(format!(
            "weak value modulus {:.3e} is too large to realize with a \
             non-orthogonal post-selection",
            w.modulus_sq().sqrt()
        )));
    }
    let plus = Complex64::new(1.0, 0.0) + wc;
    let minus = Complex64::new(1.0, 0.0) - wc;
    // |1 + w|^2 + |1 - w|^2 = 2(1 + |w|^2) >= 2, so the norm never vanishes.
    let norm = (plus.norm_sqr() + minus.norm_sqr()).sqrt();
    let pre = [plus / norm, minus / norm];
    let post = [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ];
    let observable = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ];
    TwoLevelSetup::new(pre, post, observable)
}

/// A coupling strength and pre-selection angle for the spin-1/2 setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AavPoint {
    s: f64,
    alpha: f64,
}

impl AavPoint {
    pub fn new(s: f64, alpha: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Domain(format!(
                "coupling strength s must be positive and finite, got {s}"
            )));
        }
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 2.0 * std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "pre-selection angle must lie in (0, 2 pi), got {alpha}"
            )));
        }
        Ok(Self { s, alpha })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn require_non_orthogonal(&self) -> Result<()> {
        let overlap_sq = (0.5 * self.alpha).cos().powi(2);
        if overlap_sq < tolerances::ORTHOGONAL_OVERLAP_SQ {
            return Err(Error::Domain(format!(
                "post-selection is orthogonal at alpha = {} (overlap cos(alpha/2) vanishes)",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// A coupling strength and Soleil-Babinet phase for the Sagnac setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsjhPoint {
    s: f64,
    phi: f64,
}

impl DsjhPoint {
    pub fn new(s: f64, phi: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Domain(format!(
                "coupling strength s must be positive and finite, got {s}"
            )));
        }
        if !(phi.is_finite() && phi > 0.0 && phi < 2.0 * std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "Soleil-Babinet phase must lie in (0, 2 pi), got {phi}"
            )));
        }
        Ok(Self { s, phi })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    fn require_non_orthogonal(&self) -> Result<()> {
        let overlap_sq = (0.5 * self.phi).sin().powi(2);
        if overlap_sq < tolerances::ORTHOGONAL_OVERLAP_SQ {
            return Err(Error::Domain(format!(
                "dark port is orthogonal at phi = {} (overlap sin(phi/2) vanishes)",
                self.phi
            )));
        }
        Ok(())
    }
}

/// Closed-form pointer statistics of the spin-1/2 setup. The pointer here
/// is the momentum p_z, so under the generic correspondence `mean_pz`
/// plays mean_q, `delta_pz_sq` plays var_q, and `delta_z_sq` plays var_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AavStats {
    pub z: f64,
    /// <p_z>'/g.
    pub mean_pz: f64,
    /// (Delta p_z)^2 / g^2.
    pub delta_pz_sq: f64,
    /// g^2 (Delta z)^2.
    pub delta_z_sq: f64,
    /// Single-shot <p_z>'/Delta p_z, signed like sin(alpha).
    pub snr: f64,
}

pub fn aav_closed_forms(pt: AavPoint) -> Result<AavStats> {
    pt.require_non_orthogonal()?;
    let s = pt.s;
    let em = (-s).exp();
    let (sin_a, cos_a) = pt.alpha.sin_cos();
    let denom = 1.0 + em * cos_a;
    let z = denom / (1.0 + cos_a);
    let mean_pz = sin_a / denom;
    let delta_pz_sq = 0.5 / s + cos_a * (cos_a + em) / (denom * denom);
    let delta_z_sq = 0.5 * s - s * s * em * cos_a / denom;
    let snr =
        (2.0 * s).sqrt() * sin_a / (denom * denom + 2.0 * s * cos_a * (cos_a + em)).sqrt();
    Ok(AavStats {
        z,
        mean_pz,
        delta_pz_sq,
        delta_z_sq,
        snr,
    })
}

/// Post-selected density of the spin-1/2 pointer momentum, x = p_z/g.
///
/// Algebraically this is the hyperbolic bracket
/// (cos a + cosh(2sx) + sin a sinh(2sx)) e^(-s) Gaussian / (1 + e^(-s)cos a),
/// but evaluated as a square of two displaced Gaussians so it cannot go
/// negative by rounding and cannot overflow at large s x.
pub fn aav_density(pt: AavPoint, x: f64) -> Result<f64> {
    pt.require_non_orthogonal()?;
    let s = pt.s;
    let (sin_half, cos_half) = (0.5 * pt.alpha).sin_cos();
    let r_minus = (-0.5 * s * (x - 1.0) * (x - 1.0)).exp();
    let r_plus = (-0.5 * s * (x + 1.0) * (x + 1.0)).exp();
    let amp = (cos_half + sin_half) * r_minus + (cos_half - sin_half) * r_plus;
    let denom = 1.0 + (-s).exp() * pt.alpha.cos();
    Ok(0.5 * amp * amp * (s / std::f64::consts::PI).sqrt() / denom)
}

/// Closed-form pointer statistics of the Sagnac setup. The pointer is the
/// beam displacement x; under the generic correspondence (p -> x,
/// q -> -p, g -> k) `mean_kx` plays mean_p, `delta_x_sq` plays var_p, and
/// `delta_p_sq` plays var_q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsjhStats {
    pub z: f64,
    /// k <x>'.
    pub mean_kx: f64,
    /// k^2 (Delta x)^2.
    pub delta_x_sq: f64,
    /// (Delta p)^2 / k^2.
    pub delta_p_sq: f64,
    /// Single-shot |<x>'|/Delta x on phi in (0, pi), signed like sin(phi).
    pub snr: f64,
}

pub fn dsjh_closed_forms(pt: DsjhPoint) -> Result<DsjhStats> {
    pt.require_non_orthogonal()?;
    let s = pt.s;
    let em = (-s).exp();
    let (sin_p, cos_p) = pt.phi.sin_cos();
    let denom = 1.0 - em * cos_p;
    let z = denom / (1.0 - cos_p);
    let mean_kx = -s * em * sin_p / denom;
    let delta_x_sq = 0.5 * s + s * s * em * (cos_p - em) / (denom * denom);
    let delta_p_sq = 0.5 / s + 1.0 / denom;
    let snr = (2.0 * s).sqrt() * em * sin_p
        / (denom * denom + 2.0 * s * em * (cos_p - em)).sqrt();
    Ok(DsjhStats {
        z,
        mean_kx,
        delta_x_sq,
        delta_p_sq,
        snr,
    })
}

/// Post-selected density of the beam displacement in the dimensionless
/// variable kx: a shifted interference fringe (1 - cos(2kx - phi)) under
/// the initial Gaussian.
pub fn dsjh_density(pt: DsjhPoint, kx: f64) -> Result<f64> {
    pt.require_non_orthogonal()?;
    let s = pt.s;
    let fringe = 1.0 - (2.0 * kx - pt.phi).cos();
    let gauss = (-kx * kx / s).exp() / (std::f64::consts::PI * s).sqrt();
    let denom = 1.0 - (-s).exp() * pt.phi.cos();
    Ok(fringe * gauss / denom)
}

/// Deflection amplification relative to the unamplified mirror deflection
/// delta, for light of transverse momentum kick k: |<x>'| / delta with
/// <x>' = mean_kx / k.
pub fn dsjh_amplification(pt: DsjhPoint, k: f64, delta: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain(format!(
            "momentum kick k must be positive and finite, got {k}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Domain(format!(
            "unamplified deflection delta must be positive and finite, got {delta}"
        )));
    }
    let stats = dsjh_closed_forms(pt)?;
    Ok(stats.mean_kx.abs() / (k * delta))
}
