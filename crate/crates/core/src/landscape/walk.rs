use serde::{Deserialize, Serialize};

use super::{euclidean_distance, isotropic_direction, uniform_point, CostFunction, ParameterPoint};
use crate::error::{Error, Result};
use crate::real::{lit, Real};
use crate::rng;

pub const DEFAULT_STEP_SIZE: f64 = 0.1;
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Settings for one isotropic fixed-step walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct WalkConfig<F: Real> {
    /// Step length `d` in radians.
    pub step_size: F,
    /// Number of steps `S`; the walk visits `S + 1` points.
    pub num_steps: usize,
    pub seed: u64,
    /// Starting point; uniform on the torus when absent.
    pub start: Option<ParameterPoint<F>>,
}

impl<F: Real> WalkConfig<F> {
    pub fn new(step_size: F, num_steps: usize, seed: u64) -> Self {
        Self {
            step_size,
            num_steps,
            seed,
            start: None,
        }
    }

    pub fn with_start(mut self, start: ParameterPoint<F>) -> Self {
        self.start = Some(start);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > F::zero()) || !self.step_size.is_finite() {
            return Err(Error::invalid("walk step size must be positive and finite"));
        }
        if self.num_steps < 2 {
            return Err(Error::invalid("walk needs at least 2 steps"));
        }
        Ok(())
    }
}

/// Points, costs and finite-size directional derivatives along a walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct WalkRecord<F: Real> {
    pub points: Vec<ParameterPoint<F>>,
    pub costs: Vec<F>,
    /// `ΔC_i = (C(θ_{i+1}) - C(θ_i)) / ‖θ_{i+1} - θ_i‖`.
    pub deltas: Vec<F>,
    pub step_norms: Vec<F>,
}

impl<F: Real> WalkRecord<F> {
    /// Builds a record from costs and step norms alone (the points are not
    /// needed for information-content analysis).
    pub fn from_costs(costs: Vec<F>, step_norms: Vec<F>) -> Result<Self> {
        if costs.len() != step_norms.len() + 1 {
            return Err(Error::invalid(format!(
                "walk has {} costs but {} step norms",
                costs.len(),
                step_norms.len()
            )));
        }
        if step_norms.iter().any(|&n| !(n > F::zero())) {
            return Err(Error::invalid("walk step norms must be positive"));
        }
        let deltas = costs
            .windows(2)
            .zip(&step_norms)
            .map(|(w, &n)| (w[1] - w[0]) / n)
            .collect();
        Ok(Self {
            points: Vec::new(),
            costs,
            deltas,
            step_norms,
        })
    }

    /// Builds a record directly from a delta sequence, with unit steps.
    pub fn from_deltas(deltas: Vec<F>) -> Self {
        let mut costs = Vec::with_capacity(deltas.len() + 1);
        let mut c = F::zero();
        costs.push(c);
        for &d in &deltas {
            c += d;
            costs.push(c);
        }
        Self {
            points: Vec::new(),
            costs,
            step_norms: vec![F::one(); deltas.len()],
            deltas,
        }
    }

    pub fn num_steps(&self) -> usize {
        self.deltas.len()
    }

    /// `max_i |ΔC_i|`.
    pub fn max_abs_delta(&self) -> F {
        self.deltas.iter().fold(F::zero(), |acc, d| acc.max(d.abs()))
    }
}

/// Isotropic fixed-step random walk: `θ_{i+1} = θ_i + d·δ_i` with `δ_i`
/// uniform on the unit sphere.
///
/// Coordinates are stored unwrapped; the step norm is measured before any
/// reduction so it equals `d` up to rounding.
pub fn random_walk<F, C>(cost: &C, config: &WalkConfig<F>) -> Result<WalkRecord<F>>
where
    F: Real,
    C: CostFunction<F> + ?Sized,
{
    config.validate()?;
    let m = cost.dimension();
    let mut rng = rng::stream(config.seed);
    let start = match &config.start {
        Some(p) if p.dimension() != m => {
            return Err(Error::invalid(format!(
                "walk start has {} coordinates, cost expects {m}",
                p.dimension()
            )))
        }
        Some(p) => p.clone(),
        None => uniform_point(m, &mut rng),
    };

    let s = config.num_steps;
    let mut points = Vec::with_capacity(s + 1);
    let mut costs = Vec::with_capacity(s + 1);
    let mut deltas = Vec::with_capacity(s);
    let mut step_norms = Vec::with_capacity(s);

    let c0 = eval_at(cost, &start.coords, 0)?;
    points.push(start);
    costs.push(c0);
    for i in 0..s {
        let dir: Vec<F> = isotropic_direction(m, &mut rng);
        let cur = &points[i].coords;
        let next: Vec<F> = cur
            .iter()
            .zip(&dir)
            .map(|(&x, &u)| x + config.step_size * u)
            .collect();
        let norm = euclidean_distance(&next, cur);
        let c = eval_at(cost, &next, i + 1)?;
        deltas.push((c - costs[i]) / norm);
        step_norms.push(norm);
        costs.push(c);
        points.push(ParameterPoint::new(next));
    }
    Ok(WalkRecord {
        points,
        costs,
        deltas,
        step_norms,
    })
}

/// Walk over a fixed sample (e.g. a Latin hypercube design) by a greedy
/// nearest-neighbour tour starting at the first point. Step lengths vary.
pub fn walk_over_sample<F, C>(cost: &C, sample: &[ParameterPoint<F>]) -> Result<WalkRecord<F>>
where
    F: Real,
    C: CostFunction<F> + ?Sized,
{
    if sample.len() < 3 {
        return Err(Error::invalid("walk over sample needs at least 3 points"));
    }
    let m = cost.dimension();
    if let Some(p) = sample.iter().find(|p| p.dimension() != m) {
        return Err(Error::invalid(format!(
            "sample point has {} coordinates, cost expects {m}",
            p.dimension()
        )));
    }
    let mut visited = vec![false; sample.len()];
    let mut order = Vec::with_capacity(sample.len());
    let mut cur = 0;
    visited[0] = true;
    order.push(0);
    for _ in 1..sample.len() {
        let next = (0..sample.len())
            .filter(|&j| !visited[j])
            .map(|j| (j, euclidean_distance(&sample[cur].coords, &sample[j].coords)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(j, _)| j)
            .expect("unvisited point remains");
        visited[next] = true;
        order.push(next);
        cur = next;
    }

    let points: Vec<ParameterPoint<F>> = order.iter().map(|&j| sample[j].clone()).collect();
    let mut costs = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        costs.push(eval_at(cost, &p.coords, i)?);
    }
    let step_norms: Vec<F> = points
        .windows(2)
        .map(|w| euclidean_distance(&w[1].coords, &w[0].coords))
        .collect();
    if step_norms.iter().any(|&n| !(n > F::zero())) {
        return Err(Error::invalid("sample contains duplicate points"));
    }
    let mut rec = WalkRecord::from_costs(costs, step_norms)?;
    rec.points = points;
    Ok(rec)
}

/// Central finite differences `(C(θ + h e_k) - C(θ - h e_k)) / 2h`.
pub fn finite_difference_gradient<F, C>(cost: &C, theta: &[F], h: F) -> Result<Vec<F>>
where
    F: Real,
    C: CostFunction<F> + ?Sized,
{
    if !(h > F::zero()) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let mut probe = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for k in 0..theta.len() {
        probe[k] = theta[k] + h;
        let up = cost.evaluate(&probe)?;
        probe[k] = theta[k] - h;
        let down = cost.evaluate(&probe)?;
        probe[k] = theta[k];
        grad.push((up - down) / (lit::<F>(2.0) * h));
    }
    Ok(grad)
}

fn eval_at<F: Real, C: CostFunction<F> + ?Sized>(cost: &C, theta: &[F], step: usize) -> Result<F> {
    cost.evaluate(theta).map_err(|e| Error::CostEvaluation {
        step,
        source: Box::new(e),
    })
}
