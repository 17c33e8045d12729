use iclandscape::bounds::{mic_threshold, solve_q};
use iclandscape::ic::{
    extract_features, ic_curve, ic_curve_from_deltas, information_content, pair_probabilities,
    symbolize, EpsilonGrid, IcCurve, Symbol,
};
use iclandscape::landscape::{random_walk, AnalyticLandscape, WalkConfig};
use proptest::prelude::*;

fn h6(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * p.ln() / 6f64.ln()
    }
}

#[test]
fn constant_landscape_has_no_information() {
    let c = AnalyticLandscape::constant(3, 1.0).unwrap();
    let w = random_walk(&c, &WalkConfig::new(0.1, 40, 0)).unwrap();
    let curve = ic_curve(&w, &EpsilonGrid::default()).unwrap();
    assert!(curve.entries.iter().all(|e| e.h == 0.0));
    let f = extract_features(&curve, 0.05, 3).unwrap();
    assert_eq!(f.h_max, 0.0);
    assert_eq!(f.eps_sensitivity, curve.entries[1].epsilon);
}

#[test]
fn linear_landscape_varies_then_saturates() {
    let c = AnalyticLandscape::linear((1..=10).map(|k| k as f64 / 10.0).collect()).unwrap();
    let w = random_walk(&c, &WalkConfig::new(0.1, 500, 3)).unwrap();
    let curve = ic_curve(&w, &EpsilonGrid::Explicit(vec![0.0, 100.0])).unwrap();
    assert!(curve.entries[0].h > 0.0);
    assert_eq!(curve.entries[1].h, 0.0);
}

#[test]
fn alternating_deltas_give_log6_2() {
    let deltas: Vec<f64> = (0..101).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let curve = ic_curve_from_deltas(&deltas, &EpsilonGrid::Explicit(vec![0.5])).unwrap();
    assert!((curve.entries[0].h - 2f64.ln() / 6f64.ln()).abs() < 1e-14);
}

#[test]
fn uniform_pairs_reach_one() {
    // each unequal pair appears once: + - . + . - +
    let seq = symbolize(&[1.0, -1.0, 0.0, 1.0, 0.0, -1.0, 1.0], 0.5);
    let pp = pair_probabilities(&seq).unwrap();
    let want: f64 = pp.unequal::<f64>().iter().map(|&p| h6(p)).sum();
    let got: f64 = information_content(&pp);
    assert!((got - want).abs() < 1e-15);
    assert!((got - 1.0).abs() < 1e-14, "{got}");
}

#[test]
fn features_from_synthetic_curves() {
    let c = IcCurve::from_pairs(&[(0.1, 0.2), (1.0, 0.8), (10.0, 0.0)]).unwrap();
    let f = extract_features(&c, 0.05, 4).unwrap();
    assert_eq!((f.eps_max, f.eps_sensitivity), (1.0, 10.0));
    assert_eq!(f.eps_max_sqrt_m, 2.0);
    let tie = IcCurve::from_pairs(&[(0.1, 0.5), (1.0, 0.5), (10.0, 0.0)]).unwrap();
    assert_eq!(extract_features(&tie, 0.05, 4).unwrap().eps_max, 0.1);
    let never = IcCurve::from_pairs(&[(0.1, 0.5), (1.0, 0.5)]).unwrap();
    assert!(extract_features(&never, 0.05, 4).is_err());
    assert!(extract_features(&c, 0.2, 4).is_err());
}

#[test]
fn empty_walks_are_rejected() {
    assert!(ic_curve_from_deltas::<f64>(&[], &EpsilonGrid::default()).is_err());
}

fn walk_deltas(m: usize, seed: u64) -> Vec<f64> {
    let a: Vec<f64> = (0..m).map(|k| 0.5 + 0.1 * k as f64).collect();
    let c = AnalyticLandscape::separable_cosine(a).unwrap();
    random_walk(&c, &WalkConfig::new(0.2, 2000, seed)).unwrap().deltas
}

/// Root in `[0, 1/6]` of `4h(x) + 2h(min(cap, 1/2 - 2x)) = H` by bisection.
fn four_smallest_floor(h_value: f64, cap: f64) -> f64 {
    let g = |x: f64| 4.0 * h6(x) + 2.0 * h6(cap.min(0.5 - 2.0 * x));
    if h_value <= g(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0 / 6.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < h_value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `(H, sum of the four smallest unequal-pair probabilities, p_⊙⊙)` at every
/// grid ε of several seeded walks.
fn walk_pair_stats() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for seed in 0..10 {
        let deltas = walk_deltas(6, seed);
        let curve = ic_curve_from_deltas(&deltas, &EpsilonGrid::default()).unwrap();
        for e in &curve.entries {
            let pp = pair_probabilities(&symbolize(&deltas, e.epsilon)).unwrap();
            out.push((e.h, pp.smallest_four_sum::<f64>(), pp.p_dot_dot::<f64>()));
        }
    }
    out
}

/// With the two largest terms capped at `h(1/e)`, the maximum of `h`, the
/// four-smallest floor holds for every `H`.
#[test]
fn four_smallest_floor_holds_on_walk_data() {
    let cap = (-1.0f64).exp();
    let mut checked = 0;
    for (h, p4, _) in walk_pair_stats() {
        let x = four_smallest_floor(h, cap);
        assert!(p4 >= 4.0 * x - 1e-12, "H {h}: p4 {p4} < {}", 4.0 * x);
        checked += (x > 0.0) as u32;
    }
    assert!(checked > 0);
}

/// The literal floor with `q = solve_q(H)` coincides with the capped one once
/// `1/2 - 2q <= 1/e`, i.e. for `H >= 4h(q*) + 2h(1/e)` with `q* = (1/2 - 1/e)/2`.
#[test]
fn literal_floor_holds_at_high_information_content() {
    let cap = (-1.0f64).exp();
    let q_star = (0.5 - cap) / 2.0;
    let h_star = 4.0 * h6(q_star) + 2.0 * h6(cap);
    assert!((solve_q(h_star).unwrap() - q_star).abs() < 1e-9);
    for k in 0..=50 {
        let h = h_star + (1.0 - h_star) * k as f64 / 50.0;
        let q: f64 = solve_q(h).unwrap();
        let capped = 4.0 * h6(q) + 2.0 * h6(cap.min(0.5 - 2.0 * q));
        assert!((capped - h).abs() < 1e-12, "H {h}");
    }
    let mut checked = 0;
    for (h, p4, _) in walk_pair_stats() {
        if h >= h_star {
            assert!(p4 >= 4.0 * solve_q(h).unwrap() - 1e-12);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

/// Below that level the literal floor does not hold: at ε = 0 a walk has
/// no ⊙ symbols, only `+−` and `−+` are non-zero, and `2h(p)` exceeds
/// `2h(1/2)` for `p` near 1/4.
#[test]
fn literal_floor_fails_just_above_the_threshold() {
    let violation = walk_pair_stats()
        .into_iter()
        .find(|&(h, p4, _)| h > mic_threshold::<f64>() && p4 < 4.0 * solve_q(h).unwrap());
    let (h, p4, _) = violation.expect("walk data with H > 2h(1/2) and p4 < 4q");
    assert!(h < 0.5 && p4 == 0.0, "H {h} p4 {p4}");
}

#[test]
fn dot_pairs_dominate_at_low_information_content() {
    let mut checked = 0;
    for (h, _, dd) in walk_pair_stats() {
        for eta in [0.01, 0.05, 1.0 / 6.0] {
            if h <= eta {
                assert!(dd >= 1.0 - 3.0 * eta - 1e-12, "H {h} p_dd {dd}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

proptest! {
    #[test]
    fn negating_deltas_keeps_h(deltas in prop::collection::vec(-2.0f64..2.0, 2..60), eps in 0.0f64..1.5) {
        let grid = EpsilonGrid::Explicit(vec![eps]);
        let neg: Vec<f64> = deltas.iter().map(|d| -d).collect();
        let a = ic_curve_from_deltas(&deltas, &grid).unwrap().entries[0].h;
        let b = ic_curve_from_deltas(&neg, &grid).unwrap().entries[0].h;
        prop_assert!((a - b).abs() < 1e-14);
        prop_assert!((-1e-15..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn saturation_past_the_largest_delta(deltas in prop::collection::vec(-2.0f64..2.0, 2..60), k in 1.0f64..10.0) {
        let top = deltas.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let seq = symbolize(&deltas, top * k);
        let pp = pair_probabilities(&seq).unwrap();
        prop_assert_eq!(pp.p_dot_dot::<f64>(), 1.0);
        prop_assert_eq!(information_content::<f64>(&pp), 0.0);
    }

    #[test]
    fn probabilities_sum_to_one(deltas in prop::collection::vec(-2.0f64..2.0, 2..60), eps in 0.0f64..1.0) {
        let pp = pair_probabilities(&symbolize(&deltas, eps)).unwrap();
        let total: f64 = Symbol::ALL
            .iter()
            .flat_map(|&a| Symbol::ALL.iter().map(move |&b| (a, b)))
            .map(|(a, b)| pp.p::<f64>(a, b))
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(pp.pair_count() as usize, deltas.len() - 1);
    }
}
