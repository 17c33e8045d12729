use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::Serialize;

use crate::bounds::{gaussian_phi, gradient_bounds, phi_m, phi_m_inverse, solve_q};
use crate::ic::{extract_features, h, ic_curve, EpsilonGrid, DEFAULT_ETA};
use crate::landscape::{random_walk, AnalyticLandscape, WalkConfig};
use crate::rng;
use crate::special::reg_incomplete_beta;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCheck {
    pub suite: &'static str,
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<ValidationCheck>,
}

fn below(suite: &'static str, check: impl Into<String>, value: f64, threshold: f64) -> ValidationCheck {
    ValidationCheck {
        suite,
        check: check.into(),
        value,
        threshold,
        passed: value < threshold,
    }
}

fn at_least(suite: &'static str, check: impl Into<String>, value: f64, threshold: f64) -> ValidationCheck {
    ValidationCheck {
        suite,
        check: check.into(),
        value,
        threshold,
        passed: value >= threshold,
    }
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Squared normalized walk slopes `(ΔC/‖g‖)²` on a random linear landscape.
pub fn linear_slope_squares(m: usize, steps: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(rng::derive_seed(seed, &[m as u64]));
    let g: Vec<f64> = (0..m).map(|_| r.random_range(-1.0..1.0)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cost = AnalyticLandscape::linear(g).expect("non-empty");
    let walk = random_walk(&cost, &WalkConfig::new(0.1, steps, seed)).expect("valid walk");
    walk.deltas.iter().map(|d| (d / norm) * (d / norm)).collect()
}

fn ks_suite(out: &mut Vec<ValidationCheck>) {
    for m in [3usize, 10, 50] {
        let mut sample = linear_slope_squares(m, 100_000, 1);
        let b = (m as f64 - 1.0) / 2.0;
        let d = ks_distance(&mut sample, |x| {
            reg_incomplete_beta(x.clamp(0.0, 1.0), 0.5, b).expect("valid beta arguments")
        });
        out.push(below("projection-ks", format!("m={m} S=1e5"), d, 0.01));
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
/// The interval is first cut into `panels` pieces so narrow peaks are seen.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, panels: usize) -> f64 {
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == panels { b } else { lo + width };
            let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson(f, lo, hi, flo, fmid, fhi, whole, tol / panels as f64, 24)
        })
        .sum()
}

/// `I(x; a, b)` by quadrature after `x = sin²φ`, which leaves a bounded
/// integrand `2 sin^{2a-1}φ cos^{2b-1}φ` for `a, b ≥ 1/2`.
pub fn beta_by_quadrature(x: f64, a: f64, b: f64) -> f64 {
    let f = move |phi: f64| 2.0 * phi.sin().powf(2.0 * a - 1.0) * phi.cos().powf(2.0 * b - 1.0);
    let upper = x.sqrt().asin();
    let rough = adaptive_simpson(&f, 0.0, FRAC_PI_2, f64::INFINITY, 1024);
    let tol = 1e-12 * rough;
    let total = adaptive_simpson(&f, 0.0, FRAC_PI_2, tol, 1024);
    // integrate the shorter side and complement, to keep relative error small
    if upper <= FRAC_PI_2 / 2.0 {
        adaptive_simpson(&f, 0.0, upper, tol, 1024) / total
    } else {
        1.0 - adaptive_simpson(&f, upper, FRAC_PI_2, tol, 1024) / total
    }
}

fn beta_suite(out: &mut Vec<ValidationCheck>) {
    let xs = [1e-3, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for a in [0.5, 1.0, 1.5, 3.0, 7.5] {
        for m in [2usize, 3, 10, 50, 500] {
            let b = (m as f64 - 1.0) / 2.0;
            for &x in &xs {
                let got = reg_incomplete_beta(x, a, b).expect("valid beta arguments");
                worst = worst.max((got - beta_by_quadrature(x, a, b)).abs());
                points += 1;
            }
        }
    }
    out.push(below(
        "special-functions",
        format!("reg_incomplete_beta vs quadrature, {points} points"),
        worst,
        1e-10,
    ));

    let mut worst: f64 = 0.0;
    for m in [2usize, 10, 100] {
        for k in 1..100 {
            let p = k as f64 / 100.0;
            let t = phi_m_inverse(p, m).expect("p inside (0, 1)");
            worst = worst.max((phi_m(t, m).expect("valid m") - p).abs());
        }
    }
    out.push(below("special-functions", "phi_m round trip", worst, 1e-9));

    let mut worst: f64 = 0.0;
    let mut monotone = true;
    let mut prev = 0.0;
    for k in 39..=100 {
        let target = k as f64 / 100.0;
        let q: f64 = solve_q(target).expect("H inside the MIC range");
        worst = worst.max((4.0 * h(q) + 2.0 * h(0.5 - 2.0 * q) - target).abs());
        monotone &= q >= prev;
        prev = q;
    }
    out.push(below("special-functions", "solve_q residual", worst, 1e-12));
    out.push(below(
        "special-functions",
        "solve_q(1) - 1/6",
        (solve_q(1.0_f64).expect("H = 1 valid") - 1.0 / 6.0).abs(),
        1e-12,
    ));
    out.push(at_least(
        "special-functions",
        "solve_q nondecreasing in H",
        monotone as u8 as f64,
        1.0,
    ));
}

/// Fractions of seeded separable-cosine walks whose MIC interval contains
/// the true norm and whose SIC bound holds.
pub fn containment_rates(m: usize, seeds: u64, step_size: f64) -> (f64, f64) {
    let a: Vec<f64> = (0..m).map(|k| 0.5 + 0.05 * k as f64).collect();
    let cost = AnalyticLandscape::separable_cosine(a).expect("non-empty");
    let truth = cost.exact_average_sq_norm().sqrt();
    let (mut mic, mut sic) = (0u32, 0u32);
    for seed in 0..seeds {
        let walk = random_walk(&cost, &WalkConfig::new(step_size, 50 * m - 2, seed))
            .expect("valid walk");
        let curve = ic_curve(&walk, &EpsilonGrid::default()).expect("valid grid");
        let f = extract_features(&curve, DEFAULT_ETA, m).expect("grid reaches H <= η");
        let b = gradient_bounds(&f).expect("valid features");
        mic += b.mic_contains(truth) as u32;
        sic += (b.upper_sic >= truth) as u32;
    }
    (mic as f64 / seeds as f64, sic as f64 / seeds as f64)
}

fn containment_suite(out: &mut Vec<ValidationCheck>) {
    let (mic, sic) = containment_rates(20, 50, 0.1);
    out.push(at_least("containment", "MIC interval holds, m=20, 50 seeds", mic, 0.9));
    out.push(at_least("containment", "SIC bound holds, m=20, 50 seeds", sic, 0.95));
}

/// `sup_t |Φ_m(t) − Φ_G(t, m)|` over a 2001-point grid on `[-1, 1]`.
pub fn gaussian_gap(m: usize) -> f64 {
    (0..=2000)
        .map(|i| {
            let t = -1.0 + i as f64 / 1000.0;
            let exact: f64 = phi_m(t, m).expect("valid m");
            let gauss: f64 = gaussian_phi(t, m).expect("valid m");
            (exact - gauss).abs()
        })
        .fold(0.0, f64::max)
}

fn gaussian_suite(out: &mut Vec<ValidationCheck>) {
    let gaps: Vec<f64> = [10usize, 100, 1000].iter().map(|&m| gaussian_gap(m)).collect();
    out.push(below("gaussian-limit", "sup gap at m=1000", gaps[2], 0.01));
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    out.push(at_least(
        "gaussian-limit",
        format!("gap decreasing over m=10,100,1000 ({:.3e}, {:.3e}, {:.3e})", gaps[0], gaps[1], gaps[2]),
        decreasing as u8 as f64,
        1.0,
    ));
}

/// Runs every validation suite.
pub fn cmd_validate() -> ValidationReport {
    let mut checks = Vec::new();
    ks_suite(&mut checks);
    beta_suite(&mut checks);
    containment_suite(&mut checks);
    gaussian_suite(&mut checks);
    ValidationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
