//! Cost-function contract, parameter-space sampling and random walks.
//!
//! The parameter space is the torus `[0, 2π)^m`. Walk coordinates are kept
//! unwrapped so step lengths stay exact; periodic cost functions reduce
//! coordinates themselves inside [`CostFunction::evaluate`].

mod analytic;
mod sampling;
mod walk;

pub use analytic::{AnalyticKind, AnalyticLandscape};
pub use sampling::{isotropic_direction, lhs_sample, uniform_point};
pub use walk::{
    finite_difference_gradient, random_walk, walk_over_sample, WalkConfig, WalkRecord,
    DEFAULT_FD_STEP, DEFAULT_STEP_SIZE,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::real::{lit, Real};

/// A scalar landscape over `m` real parameters.
///
/// Implementations must be deterministic and safe to evaluate from several
/// threads at once.
pub trait CostFunction<F: Real>: Send + Sync {
    /// Number of parameters `m`.
    fn dimension(&self) -> usize;

    /// Cost at `theta`. `theta` may lie outside `[0, 2π)`.
    fn evaluate(&self, theta: &[F]) -> Result<F>;

    /// Short identifier recorded in dataset manifests.
    fn id(&self) -> String {
        "cost".to_string()
    }
}

impl<F: Real, C: CostFunction<F> + ?Sized> CostFunction<F> for &C {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn evaluate(&self, theta: &[F]) -> Result<F> {
        (**self).evaluate(theta)
    }
    fn id(&self) -> String {
        (**self).id()
    }
}

impl<F: Real, C: CostFunction<F> + ?Sized> CostFunction<F> for Box<C> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn evaluate(&self, theta: &[F]) -> Result<F> {
        (**self).evaluate(theta)
    }
    fn id(&self) -> String {
        (**self).id()
    }
}

/// A point θ in parameter space, in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ParameterPoint<F: Real> {
    pub coords: Vec<F>,
}

impl<F: Real> ParameterPoint<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Self { coords }
    }

    pub fn zeros(m: usize) -> Self {
        Self {
            coords: vec![F::zero(); m],
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates reduced onto `[0, 2π)`.
    pub fn reduced(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|&x| wrap_angle(x)).collect(),
        }
    }
}

impl<F: Real> From<Vec<F>> for ParameterPoint<F> {
    fn from(coords: Vec<F>) -> Self {
        Self { coords }
    }
}

/// Reduces an angle onto `[0, 2π)`.
pub fn wrap_angle<F: Real>(x: F) -> F {
    let two_pi = lit::<F>(2.0) * F::PI();
    let r = x % two_pi;
    let r = if r < F::zero() { r + two_pi } else { r };
    // `-tiny + 2π` can round up to exactly 2π.
    if r >= two_pi {
        F::zero()
    } else {
        r
    }
}

pub(crate) fn euclidean_distance<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<F>()
        .sqrt()
}
