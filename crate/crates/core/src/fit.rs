//! Least-squares fits of scaling pre-factors.
//!
//! Global cost: `log₂ f(n) = αn + β`. Local cost: `1/f(x) = αx² + βx + γ`
//! along qubits or layers, always reported next to the linear fit so the
//! two R² values can be compared.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{count, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Linear,
    Quadratic,
}

impl Model {
    pub fn degree(self) -> usize {
        match self {
            Model::Linear => 1,
            Model::Quadratic => 2,
        }
    }

    fn from_degree(degree: usize) -> Result<Self> {
        match degree {
            1 => Ok(Model::Linear),
            2 => Ok(Model::Quadratic),
            d => Err(Error::invalid(format!("polynomial degree must be 1 or 2, got {d}"))),
        }
    }
}

/// Transform applied to the statistic before fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Log2,
    Reciprocal,
    Identity,
}

impl Transform {
    pub fn apply<F: Real>(self, y: F) -> Result<F> {
        if !(y.is_finite()) {
            return Err(Error::invalid(format!("statistic {y} is not finite")));
        }
        match self {
            Transform::Identity => Ok(y),
            Transform::Log2 | Transform::Reciprocal if !(y > F::zero()) => Err(Error::invalid(
                format!("statistic must be positive for {self:?} transform, got {y}"),
            )),
            Transform::Log2 => Ok(y.log2()),
            Transform::Reciprocal => Ok(y.recip()),
        }
    }

    /// Standard deviation of the transformed value (first-order propagation).
    pub fn propagate_spread<F: Real>(self, y: F, spread: F) -> F {
        match self {
            Transform::Identity => spread,
            Transform::Log2 => spread / (y * F::LN_2()),
            Transform::Reciprocal => spread / (y * y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FitResult<F: Real> {
    pub model: Model,
    pub transform: Transform,
    /// Highest power first: `(α, β)` or `(α, β, γ)`.
    pub coefficients: Vec<F>,
    pub rss: F,
    pub r_squared: F,
    pub points: usize,
}

impl<F: Real> FitResult<F> {
    pub fn predict(&self, x: F) -> F {
        self.coefficients.iter().fold(F::zero(), |acc, &c| acc * x + c)
    }
}

/// Ordinary least squares polynomial fit via the normal equations.
pub fn ols_polyfit<F: Real>(xs: &[F], ys: &[F], degree: usize) -> Result<FitResult<F>> {
    weighted_polyfit(xs, ys, None, degree)
}

/// Weighted least squares; `None` weights every point equally.
pub fn weighted_polyfit<F: Real>(
    xs: &[F],
    ys: &[F],
    weights: Option<&[F]>,
    degree: usize,
) -> Result<FitResult<F>> {
    let model = Model::from_degree(degree)?;
    if xs.len() != ys.len() {
        return Err(Error::invalid(format!(
            "{} x values but {} y values",
            xs.len(),
            ys.len()
        )));
    }
    if let Some(w) = weights {
        if w.len() != xs.len() {
            return Err(Error::invalid("weight count does not match point count"));
        }
        if w.iter().any(|&wi| !(wi > F::zero()) || !wi.is_finite()) {
            return Err(Error::invalid("weights must be positive and finite"));
        }
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::invalid("fit data must be finite"));
    }
    let mut distinct: Vec<F> = xs.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    distinct.dedup();
    if distinct.len() < degree + 1 {
        return Err(Error::invalid(format!(
            "degree-{degree} fit needs {} distinct x values, got {}",
            degree + 1,
            distinct.len()
        )));
    }

    let k = degree + 1;
    let weight = |i: usize| weights.map_or(F::one(), |w| w[i]);
    let mut a = vec![vec![F::zero(); k]; k];
    let mut rhs = vec![F::zero(); k];
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        let w = weight(i);
        let mut powers = vec![F::one(); 2 * degree + 1];
        for p in 1..powers.len() {
            powers[p] = powers[p - 1] * x;
        }
        for r in 0..k {
            rhs[r] += w * powers[r] * y;
            for c in 0..k {
                a[r][c] += w * powers[r + c];
            }
        }
    }
    // ascending powers: c0 + c1 x + c2 x²
    let ascending = solve_linear(a, rhs)?;
    let coefficients: Vec<F> = ascending.iter().rev().copied().collect();

    let total_w: F = (0..xs.len()).map(weight).sum();
    let mean = ys.iter().enumerate().map(|(i, &y)| weight(i) * y).sum::<F>() / total_w;
    let mut rss = F::zero();
    let mut tss = F::zero();
    let fit = FitResult {
        model,
        transform: Transform::Identity,
        coefficients,
        rss: F::zero(),
        r_squared: F::zero(),
        points: xs.len(),
    };
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        let w = weight(i);
        let r = y - fit.predict(x);
        rss += w * r * r;
        tss += w * (y - mean) * (y - mean);
    }
    let r_squared = if tss > F::zero() {
        F::one() - rss / tss
    } else if rss <= F::eps() {
        F::one()
    } else {
        F::neg_infinity()
    };
    Ok(FitResult {
        rss,
        r_squared,
        ..fit
    })
}

/// Gaussian elimination with partial pivoting.
fn solve_linear<F: Real>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Result<Vec<F>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(F::zero(), |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("non-empty range");
        if a[pivot][col].abs() <= scale * F::eps() * lit(16.0) {
            return Err(Error::invalid("normal equations are rank deficient"));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[row][c] -= factor * v;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }
    let mut x = vec![F::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Axis along which a local-cost slice varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Qubits,
    Layers,
}

/// A `(axis value, statistic)` pair with an optional spread for weighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePoint<F: Real> {
    pub x: F,
    pub statistic: F,
    pub spread: Option<F>,
}

impl<F: Real> SlicePoint<F> {
    pub fn new(x: F, statistic: F) -> Self {
        Self {
            x,
            statistic,
            spread: None,
        }
    }
}

fn transformed<F: Real>(
    points: &[SlicePoint<F>],
    transform: Transform,
    weighted: bool,
) -> Result<(Vec<F>, Vec<F>, Option<Vec<F>>)> {
    let xs = points.iter().map(|p| p.x).collect();
    let ys = points
        .iter()
        .map(|p| transform.apply(p.statistic))
        .collect::<Result<Vec<_>>>()?;
    let weights = if weighted {
        let w = points
            .iter()
            .map(|p| {
                let s = p
                    .spread
                    .ok_or_else(|| Error::invalid("weighted fit needs a spread for every point"))?;
                let sy = transform.propagate_spread(p.statistic, s);
                if !(sy > F::zero()) || !sy.is_finite() {
                    return Err(Error::invalid(format!(
                        "weighted fit needs positive spreads, got {s} at x = {}",
                        p.x
                    )));
                }
                Ok((sy * sy).recip())
            })
            .collect::<Result<Vec<_>>>()?;
        Some(w)
    } else {
        None
    };
    Ok((xs, ys, weights))
}

/// Linear fit of `log₂(statistic)` against qubit count.
pub fn fit_global_qubit_scaling<F: Real>(
    points: &[SlicePoint<F>],
    weighted: bool,
) -> Result<FitResult<F>> {
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "global qubit scaling needs >= 3 qubit values, got {}",
            points.len()
        )));
    }
    let (xs, ys, w) = transformed(points, Transform::Log2, weighted)?;
    let mut fit = weighted_polyfit(&xs, &ys, w.as_deref(), 1)?;
    fit.transform = Transform::Log2;
    Ok(fit)
}

/// Quadratic and linear fits of `1/statistic` along one axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LocalFit<F: Real> {
    pub axis: Axis,
    pub quadratic: FitResult<F>,
    pub linear: FitResult<F>,
}

pub fn fit_local_scaling<F: Real>(
    points: &[SlicePoint<F>],
    axis: Axis,
    weighted: bool,
) -> Result<LocalFit<F>> {
    if points.len() < 4 {
        return Err(Error::invalid(format!(
            "local scaling along {axis:?} needs >= 4 axis values, got {}",
            points.len()
        )));
    }
    let (xs, ys, w) = transformed(points, Transform::Reciprocal, weighted)?;
    let mut quadratic = weighted_polyfit(&xs, &ys, w.as_deref(), 2)?;
    let mut linear = weighted_polyfit(&xs, &ys, w.as_deref(), 1)?;
    quadratic.transform = Transform::Reciprocal;
    linear.transform = Transform::Reciprocal;
    Ok(LocalFit {
        axis,
        quadratic,
        linear,
    })
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub fn median<F: Real>(values: &[F]) -> Option<F> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / lit(2.0)
    })
}

/// Sample standard deviation (`n - 1` denominator); zero for one value.
pub fn std_dev<F: Real>(values: &[F]) -> Option<F> {
    match values.len() {
        0 => None,
        1 => Some(F::zero()),
        n => {
            let mean = values.iter().copied().sum::<F>() / count(n);
            let ss: F = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
            Some((ss / count(n - 1)).sqrt())
        }
    }
}
