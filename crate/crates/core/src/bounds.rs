//! Gradient-norm bounds from information-content features.
//!
//! For an isotropic unit direction `δ`, the projection `∇C·δ` divided by
//! `‖∇C‖_W` has CDF
//!
//! ```text
//! Φ_m(t) = ½ (1 + sgn(t) · I(t²; 1/2, (m-1)/2)),   t ∈ [-1, 1]
//! ```
//!
//! Inverting `Φ_m` turns the pair-probability guarantees implied by a high
//! MIC (`H_M`) or a low SIC (`H(ε_S) ≤ η`) into bounds on `‖∇C‖_W`:
//!
//! ```text
//! -ε_M / Φ_m⁻¹(2q) ≤ ‖∇C‖_W ≤ -ε_M / Φ_m⁻¹((1-2q)/2)
//! ‖∇C‖_W ≤ -ε_S / Φ_m⁻¹(3η/2)
//! ```
//!
//! where `q ∈ (0, 1/6]` solves `H_M = 4h(q) + 2h(1/2 - 2q)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ic::{h, IcFeatures};
use crate::real::{count, lit, Real};
use crate::special::{erfc, reg_incomplete_beta};

/// `2h(1/2) = log₆ 2`, the MIC below which the two-sided bound is void.
pub fn mic_threshold<F: Real>() -> F {
    lit::<F>(2.0) * h(lit::<F>(0.5))
}

/// Parameters of the projection distribution: dimension `m` and, optionally,
/// a hypothesised `‖∇C‖_W` used to convert raw ε values into ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCdfParams<F: Real> {
    pub m: usize,
    pub scale: Option<F>,
}

impl<F: Real> BetaCdfParams<F> {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("projection CDF needs m >= 2, got {m}")));
        }
        Ok(Self { m, scale: None })
    }

    pub fn with_scale(mut self, scale: F) -> Result<Self> {
        if !(scale > F::zero()) {
            return Err(Error::invalid("gradient-norm scale must be positive"));
        }
        self.scale = Some(scale);
        Ok(self)
    }

    /// `Φ_m(ε / scale)`; `ε` is read as a ratio when no scale is set.
    pub fn cdf(&self, epsilon: F) -> Result<F> {
        let t = match self.scale {
            Some(s) => epsilon / s,
            None => epsilon,
        };
        phi_m(t, self.m)
    }

    fn beta_b(&self) -> F {
        count::<F>(self.m - 1) / lit(2.0)
    }
}

/// `Φ_m(t)`, with `t` clamped to `[-1, 1]`.
pub fn phi_m<F: Real>(t: F, m: usize) -> Result<F> {
    let params = BetaCdfParams::<F>::new(m)?;
    if t.is_nan() {
        return Err(Error::invalid("Φ_m argument is NaN"));
    }
    if t <= -F::one() {
        return Ok(F::zero());
    }
    if t >= F::one() {
        return Ok(F::one());
    }
    if t == F::zero() {
        return Ok(lit(0.5));
    }
    let i = reg_incomplete_beta(t * t, lit(0.5), params.beta_b())?;
    let half = lit::<F>(0.5);
    Ok(if t > F::zero() {
        half * (F::one() + i)
    } else {
        half * (F::one() - i)
    })
}

/// `Φ_m⁻¹(p)` by bisection on `[-1, 1]`.
pub fn phi_m_inverse<F: Real>(p: F, m: usize) -> Result<F> {
    BetaCdfParams::<F>::new(m)?;
    if !(p > F::zero() && p < F::one()) {
        return Err(Error::invalid(format!("Φ_m⁻¹ needs p in (0, 1), got {p}")));
    }
    let half = lit::<F>(0.5);
    if p == half {
        return Ok(F::zero());
    }
    if p > half {
        return Ok(-phi_m_inverse(F::one() - p, m)?);
    }
    let (mut lo, mut hi) = (-F::one(), F::zero());
    for _ in 0..200 {
        let mid = half * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi_m(mid, m)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(half * (lo + hi))
}

/// Root `q ∈ (0, 1/6]` of `4h(x) + 2h(1/2 - 2x) = H`.
///
/// The left side increases strictly on `[0, 1/6]` from `2h(1/2)` to `1`,
/// so the root on that branch is unique.
pub fn solve_q<F: Real>(h_value: F) -> Result<F> {
    let threshold = mic_threshold::<F>();
    let slack = lit::<F>(64.0) * F::eps();
    if h_value.is_nan() || h_value <= threshold || h_value > F::one() + slack {
        return Err(Error::Inapplicable(format!(
            "H = {h_value} outside (2h(1/2), 1] = ({threshold}, 1]"
        )));
    }
    let sixth = F::one() / lit(6.0);
    if h_value >= F::one() {
        return Ok(sixth);
    }
    let f = |x: F| lit::<F>(4.0) * h(x) + lit::<F>(2.0) * h(lit::<F>(0.5) - lit::<F>(2.0) * x);
    let (mut lo, mut hi) = (F::zero(), sixth);
    let half = lit::<F>(0.5);
    for _ in 0..300 {
        let mid = half * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < h_value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // keep whichever end has the smaller residual
    let q = if (f(lo) - h_value).abs() <= (f(hi) - h_value).abs() && lo > F::zero() {
        lo
    } else {
        hi
    };
    Ok(q)
}

/// Two-sided bound on `‖∇C‖_W` from the MIC.
pub fn bounds_from_mic<F: Real>(eps_max: F, h_max: F, m: usize) -> Result<(F, F)> {
    if !(eps_max > F::zero()) {
        return Err(Error::Inapplicable(format!(
            "MIC bound needs ε_M > 0, got {eps_max}"
        )));
    }
    let q = solve_q(h_max)?;
    let two_q = lit::<F>(2.0) * q;
    let lower = -eps_max / phi_m_inverse(two_q, m)?;
    let upper = -eps_max / phi_m_inverse((F::one() - two_q) / lit(2.0), m)?;
    Ok((lower, upper))
}

/// Upper bound on `‖∇C‖_W` from the SIC.
pub fn bound_from_sic<F: Real>(eps_sensitivity: F, eta: F, m: usize) -> Result<F> {
    let sixth = F::one() / lit(6.0);
    if !(eta > F::zero() && eta <= sixth) {
        return Err(Error::invalid(format!("η = {eta} outside (0, 1/6]")));
    }
    if !(eps_sensitivity > F::zero()) {
        return Err(Error::invalid(format!("ε_S must be positive, got {eps_sensitivity}")));
    }
    Ok(-eps_sensitivity / phi_m_inverse(lit::<F>(1.5) * eta, m)?)
}

/// Standard normal CDF at `t·√m`, the large-`m` limit of `Φ_m(t)`.
pub fn gaussian_phi<F: Real>(t: F, m: usize) -> Result<F> {
    if m < 1 {
        return Err(Error::invalid("gaussian_phi needs m >= 1"));
    }
    let z = t * count::<F>(m).sqrt();
    Ok(lit::<F>(0.5) * erfc(-z / lit::<F>(2.0).sqrt()))
}

/// Inputs the bounds were computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct BoundInputs<F: Real> {
    pub eps_m: F,
    pub h_m: F,
    pub eps_s: F,
    pub eta: F,
    pub m: usize,
}

/// Bounds on `‖∇C‖_W`. The MIC entries are `None` when the MIC hypothesis
/// fails; the SIC bound is always present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct GradientBounds<F: Real> {
    pub lower_mic: Option<F>,
    pub upper_mic: Option<F>,
    pub upper_sic: F,
    pub q: Option<F>,
    pub applicable_mic: bool,
    #[serde(skip)]
    pub inputs: BoundInputs<F>,
}

impl<F: Real> GradientBounds<F> {
    /// Whether `value` lies inside the MIC interval (false when inapplicable).
    pub fn mic_contains(&self, value: F) -> bool {
        match (self.lower_mic, self.upper_mic) {
            (Some(lo), Some(hi)) => lo <= value && value <= hi,
            _ => false,
        }
    }
}

/// Evaluates both bounds for a set of features.
pub fn gradient_bounds<F: Real>(features: &IcFeatures<F>) -> Result<GradientBounds<F>> {
    let m = features.m;
    let inputs = BoundInputs {
        eps_m: features.eps_max,
        h_m: features.h_max,
        eps_s: features.eps_sensitivity,
        eta: features.eta,
        m,
    };
    let upper_sic = bound_from_sic(features.eps_sensitivity, features.eta, m)?;
    let mic = bounds_from_mic(features.eps_max, features.h_max, m);
    let (lower_mic, upper_mic, q, applicable) = match mic {
        Ok((lo, hi)) => (Some(lo), Some(hi), Some(solve_q(features.h_max)?), true),
        Err(Error::Inapplicable(_)) => (None, None, None, false),
        Err(e) => return Err(e),
    };
    Ok(GradientBounds {
        lower_mic,
        upper_mic,
        upper_sic,
        q,
        applicable_mic: applicable,
        inputs,
    })
}
