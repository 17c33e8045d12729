use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ParameterPoint;
use crate::error::{Error, Result};
use crate::real::{count, lit, Real};
use crate::rng;

/// Latin hypercube sample of `samples` points in `[0, 2π)^m`.
///
/// Each axis is cut into `samples` equal bins and every bin holds exactly
/// one point; the position inside a bin is uniform.
pub fn lhs_sample<F: Real>(m: usize, samples: usize, seed: u64) -> Result<Vec<ParameterPoint<F>>> {
    if m < 1 {
        return Err(Error::invalid("lhs_sample: dimension must be >= 1"));
    }
    if samples < 2 {
        return Err(Error::invalid("lhs_sample: need at least 2 samples"));
    }
    let mut rng = rng::stream(seed);
    let two_pi = lit::<F>(2.0) * F::PI();
    let width = two_pi / count::<F>(samples);
    let mut points = vec![ParameterPoint::zeros(m); samples];
    let mut bins: Vec<usize> = (0..samples).collect();
    for axis in 0..m {
        bins.shuffle(&mut rng);
        for (point, &bin) in points.iter_mut().zip(&bins) {
            let u: f64 = rng.random();
            let x = (count::<F>(bin) + lit(u)) * width;
            // guard the open upper edge against rounding
            point.coords[axis] = if x >= two_pi { count::<F>(bin) * width } else { x };
        }
    }
    Ok(points)
}

/// Uniform direction on the unit sphere in `m` dimensions, obtained by
/// normalising a standard Gaussian draw.
pub fn isotropic_direction<F: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<F> {
    assert!(m >= 1, "isotropic_direction: dimension must be >= 1");
    loop {
        let x: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            let v: Vec<F> = x.iter().map(|&xi| lit::<F>(xi)).collect();
            let n = v.iter().map(|&c| c * c).sum::<F>().sqrt();
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// Uniform point in `[0, 2π)^m`.
pub fn uniform_point<F: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> ParameterPoint<F> {
    let two_pi = 2.0 * std::f64::consts::PI;
    ParameterPoint::new((0..m).map(|_| lit(rng.random::<f64>() * two_pi)).collect())
}
