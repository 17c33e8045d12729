mod support;

use iclandscape::fit::{
    fit_global_qubit_scaling, fit_local_scaling, median, ols_polyfit, std_dev, weighted_polyfit,
    Axis, Model, SlicePoint, Transform,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rss(coef: &[f64], xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let p = coef.iter().fold(0.0, |acc, c| acc * x + c);
            (y - p) * (y - p)
        })
        .sum()
}

/// Zooming grid search over the coefficient box around `start`.
fn grid_search(xs: &[f64], ys: &[f64], k: usize, start: Vec<f64>) -> Vec<f64> {
    let mut centre = start;
    let mut width = 10.0;
    let steps = 10i32;
    for _ in 0..60 {
        let mut best = (rss(&centre, xs, ys), centre.clone());
        let total = (2 * steps + 1).pow(k as u32);
        for idx in 0..total {
            let mut rem = idx;
            let cand: Vec<f64> = centre
                .iter()
                .map(|&c| {
                    let off = (rem % (2 * steps + 1)) as i32 - steps;
                    rem /= 2 * steps + 1;
                    c + width * off as f64 / steps as f64
                })
                .collect();
            let r = rss(&cand, xs, ys);
            if r < best.0 {
                best = (r, cand);
            }
        }
        centre = best.1;
        width *= 0.5;
    }
    centre
}

#[test]
fn exact_polynomials_are_recovered() {
    let xs: Vec<f64> = (1..=5).map(|x| x as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x * x + 3.0 * x + 1.0).collect();
    let f = ols_polyfit(&xs, &ys, 2).unwrap();
    for (c, w) in f.coefficients.iter().zip([2.0, 3.0, 1.0]) {
        assert!((c - w).abs() < 1e-10);
    }
    assert!((f.r_squared - 1.0).abs() < 1e-12);
    assert_eq!(f.model, Model::Quadratic);
    let ys: Vec<f64> = xs.iter().map(|x| -x + 4.0).collect();
    let f = ols_polyfit(&xs, &ys, 1).unwrap();
    assert!((f.coefficients[0] + 1.0).abs() < 1e-12 && (f.coefficients[1] - 4.0).abs() < 1e-12);
    assert!((f.predict(10.0) + 6.0).abs() < 1e-10);
}

#[test]
fn noisy_line_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xs: Vec<f64> = (0..30).map(|i| i as f64 * 0.7 - 4.0).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| 1.3 * x - 0.4 + rng.random_range(-0.5..0.5))
        .collect();
    let (slope, intercept) = support::simple_regression(&xs, &ys);
    let f = ols_polyfit(&xs, &ys, 1).unwrap();
    assert!((f.coefficients[0] - slope).abs() < 1e-12);
    assert!((f.coefficients[1] - intercept).abs() < 1e-12);
    assert!((f.rss - rss(&[slope, intercept], &xs, &ys)).abs() < 1e-10);
}

#[test]
fn normal_equations_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for degree in [1usize, 2] {
        let xs: Vec<f64> = (0..7).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 0.8 * x * x - 1.5 * x + 2.0 + rng.random_range(-0.3..0.3))
            .collect();
        let f = ols_polyfit(&xs, &ys, degree).unwrap();
        let g = grid_search(&xs, &ys, degree + 1, vec![0.0; degree + 1]);
        for (a, b) in f.coefficients.iter().zip(&g) {
            assert!((a - b).abs() < 1e-6, "degree {degree}: {a} vs {b}");
        }
    }
}

#[test]
fn rank_deficient_inputs_are_rejected() {
    assert!(ols_polyfit(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], 1).is_err());
    assert!(ols_polyfit(&[1.0, 2.0], &[1.0, 2.0], 2).is_err());
    assert!(ols_polyfit(&[1.0, 2.0, 3.0], &[1.0, 2.0], 1).is_err());
    assert!(ols_polyfit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 3).is_err());
}

#[test]
fn global_scaling_of_exact_powers() {
    let pts: Vec<SlicePoint<f64>> = (2..=10)
        .map(|n| SlicePoint::new(n as f64, 2f64.powi(-n - 2)))
        .collect();
    let f = fit_global_qubit_scaling(&pts, false).unwrap();
    assert_eq!(f.transform, Transform::Log2);
    assert!((f.coefficients[0] + 1.0).abs() < 1e-12);
    assert!((f.coefficients[1] + 2.0).abs() < 1e-12);
    let bad = [SlicePoint::new(2.0, 1.0), SlicePoint::new(3.0, 0.0), SlicePoint::new(4.0, 1.0)];
    assert!(fit_global_qubit_scaling(&bad, false).is_err());
    assert!(fit_global_qubit_scaling(&pts[..2], false).is_err());
}

#[test]
fn local_scaling_of_exact_reciprocals() {
    let pts: Vec<SlicePoint<f64>> = (2..=10)
        .map(|n| {
            let n = n as f64;
            SlicePoint::new(n, 1.0 / (n * n + 2.0 * n + 3.0))
        })
        .collect();
    let f = fit_local_scaling(&pts, Axis::Qubits, false).unwrap();
    for (c, w) in f.quadratic.coefficients.iter().zip([1.0, 2.0, 3.0]) {
        assert!((c - w).abs() < 1e-9);
    }
    assert!(f.quadratic.r_squared >= f.linear.r_squared);
    assert!(fit_local_scaling(&pts[..3], Axis::Layers, false).is_err());
}

/// Synthetic scans generated from the published pre-factors come back out.
#[test]
fn published_prefactors_round_trip() {
    let pts: Vec<SlicePoint<f64>> = (4..=14)
        .map(|n| SlicePoint::new(n as f64, 2f64.powf(-1.06 * n as f64 - 2.10)))
        .collect();
    let f = fit_global_qubit_scaling(&pts, false).unwrap();
    assert!((f.coefficients[0] + 1.06).abs() < 1e-10);
    assert!((f.coefficients[1] + 2.10).abs() < 1e-10);

    let pts: Vec<SlicePoint<f64>> = (4..=14)
        .map(|n| {
            let n = n as f64;
            SlicePoint::new(n, 1.0 / (-0.55 * n * n + 25.63 * n - 57.50))
        })
        .collect();
    let f = fit_local_scaling(&pts, Axis::Qubits, false).unwrap();
    for (c, w) in f.quadratic.coefficients.iter().zip([-0.55, 25.63, -57.50]) {
        assert!((c - w).abs() < 1e-8, "{c} vs {w}");
    }
}

#[test]
fn weighting_downplays_noisy_points() {
    let xs = [1.0_f64, 2.0, 3.0, 4.0];
    let ys = [1.0, 2.0, 3.0, 10.0];
    let flat = weighted_polyfit(&xs, &ys, Some(&[1.0; 4]), 1).unwrap();
    let plain = ols_polyfit(&xs, &ys, 1).unwrap();
    assert!((flat.coefficients[0] - plain.coefficients[0]).abs() < 1e-12);
    let w = weighted_polyfit(&xs, &ys, Some(&[1.0, 1.0, 1.0, 1e-9]), 1).unwrap();
    assert!((w.coefficients[0] - 1.0).abs() < 1e-6);
    let no_spread = [SlicePoint::new(1.0, 1.0); 3];
    assert!(fit_global_qubit_scaling(&no_spread, true).is_err());
}

#[test]
fn median_and_spread() {
    assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
    assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
    assert_eq!(median::<f64>(&[]), None);
    assert_eq!(std_dev(&[5.0]), Some(0.0));
    assert!((std_dev(&[1.0, 2.0, 3.0, 4.0]).unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
}

proptest! {
    #[test]
    fn fits_ignore_point_order(
        ys in prop::collection::vec(0.01f64..5.0, 6),
        perm_seed in any::<u64>(),
    ) {
        let xs: Vec<f64> = (0..6).map(|i| i as f64 + 1.0).collect();
        let mut idx: Vec<usize> = (0..6).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.random_range(0..=i));
        }
        let xs2: Vec<f64> = idx.iter().map(|&i| xs[i]).collect();
        let ys2: Vec<f64> = idx.iter().map(|&i| ys[i]).collect();
        for degree in [1, 2] {
            let a = ols_polyfit(&xs, &ys, degree).unwrap();
            let b = ols_polyfit(&xs2, &ys2, degree).unwrap();
            for (p, q) in a.coefficients.iter().zip(&b.coefficients) {
                prop_assert!((p - q).abs() < 1e-9 * (1.0 + p.abs()));
            }
        }
    }

    #[test]
    fn quadratic_never_fits_worse(ys in prop::collection::vec(0.01f64..5.0, 4..10)) {
        let pts: Vec<SlicePoint<f64>> = ys
            .iter()
            .enumerate()
            .map(|(i, &y)| SlicePoint::new(i as f64, y))
            .collect();
        let f = fit_local_scaling(&pts, Axis::Layers, false).unwrap();
        prop_assert!(f.quadratic.rss <= f.linear.rss * (1.0 + 1e-9) + 1e-12);
    }
}
