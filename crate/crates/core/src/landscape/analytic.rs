use serde::{Deserialize, Serialize};

use super::CostFunction;
use crate::error::{Error, Result};
use crate::real::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticKind {
    /// `C(θ) = g·θ + c`. Not periodic; coordinates are used unwrapped.
    Linear,
    /// `C(θ) = Σ a_k cos θ_k + c`.
    SeparableCosine,
    /// `C(θ) = c`.
    Constant,
}

/// Closed-form landscapes with exact gradients, used as oracles.
///
/// The dimension is the length of `coefficients` for every kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AnalyticLandscape<F: Real> {
    pub kind: AnalyticKind,
    pub coefficients: Vec<F>,
    #[serde(default)]
    pub offset: F,
}

impl<F: Real> AnalyticLandscape<F> {
    pub fn new(kind: AnalyticKind, coefficients: Vec<F>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("analytic landscape needs at least one coefficient"));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("analytic landscape coefficients must be finite"));
        }
        Ok(Self {
            kind,
            coefficients,
            offset: F::zero(),
        })
    }

    pub fn linear(g: Vec<F>) -> Result<Self> {
        Self::new(AnalyticKind::Linear, g)
    }

    pub fn separable_cosine(a: Vec<F>) -> Result<Self> {
        Self::new(AnalyticKind::SeparableCosine, a)
    }

    pub fn constant(m: usize, value: F) -> Result<Self> {
        let mut l = Self::new(AnalyticKind::Constant, vec![F::zero(); m])?;
        l.offset = value;
        Ok(l)
    }

    pub fn exact_gradient(&self, theta: &[F]) -> Vec<F> {
        match self.kind {
            AnalyticKind::Linear => self.coefficients.clone(),
            AnalyticKind::SeparableCosine => self
                .coefficients
                .iter()
                .zip(theta)
                .map(|(&a, &t)| -a * t.sin())
                .collect(),
            AnalyticKind::Constant => vec![F::zero(); self.coefficients.len()],
        }
    }

    /// `E‖∇C‖²` under the uniform distribution on the torus.
    pub fn exact_average_sq_norm(&self) -> F {
        match self.kind {
            AnalyticKind::Linear => self.coefficients.iter().map(|&g| g * g).sum(),
            AnalyticKind::SeparableCosine => {
                self.coefficients.iter().map(|&a| a * a).sum::<F>() / lit(2.0)
            }
            AnalyticKind::Constant => F::zero(),
        }
    }
}

impl<F: Real> CostFunction<F> for AnalyticLandscape<F> {
    fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    fn evaluate(&self, theta: &[F]) -> Result<F> {
        if theta.len() != self.coefficients.len() {
            return Err(Error::invalid(format!(
                "expected {} parameters, got {}",
                self.coefficients.len(),
                theta.len()
            )));
        }
        let body = match self.kind {
            AnalyticKind::Linear => self
                .coefficients
                .iter()
                .zip(theta)
                .map(|(&g, &t)| g * t)
                .sum(),
            // cos is periodic, so reducing first changes nothing but rounding
            AnalyticKind::SeparableCosine => self
                .coefficients
                .iter()
                .zip(theta)
                .map(|(&a, &t)| a * t.cos())
                .sum(),
            AnalyticKind::Constant => F::zero(),
        };
        Ok(body + self.offset)
    }

    fn id(&self) -> String {
        match self.kind {
            AnalyticKind::Linear => format!("linear-m{}", self.coefficients.len()),
            AnalyticKind::SeparableCosine => format!("separable-cosine-m{}", self.coefficients.len()),
            AnalyticKind::Constant => format!("constant-m{}", self.coefficients.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn average_norms_are_closed_form() {
        let lin = AnalyticLandscape::linear(vec![3.0, 4.0]).unwrap();
        assert_eq!(lin.exact_average_sq_norm(), 25.0);
        let cos = AnalyticLandscape::separable_cosine(vec![1.0, 2.0]).unwrap();
        assert_eq!(cos.exact_average_sq_norm(), 2.5);
        let c = AnalyticLandscape::constant(4, 1.5).unwrap();
        assert_eq!(c.exact_average_sq_norm(), 0.0);
        assert_eq!(c.evaluate(&[9.0; 4]).unwrap(), 1.5);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let lin = AnalyticLandscape::linear(vec![1.0, 1.0]).unwrap();
        assert!(lin.evaluate(&[0.0]).is_err());
        assert!(AnalyticLandscape::<f64>::linear(vec![]).is_err());
    }
}
