//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| c(if i == j { 1.0 } else { 0.0 })).collect())
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![c(0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `op` on qubit `q` of an `n`-qubit register, little-endian: qubit 0 is the
/// rightmost Kronecker factor.
pub fn embed(op: &Matrix, q: usize, n: usize) -> Matrix {
    let mut out = identity(1);
    for k in (0..n).rev() {
        let f = if k == q { op.clone() } else { identity(2) };
        out = kron(&out, &f);
    }
    out
}

pub fn ry(theta: f64) -> Matrix {
    let (s, co) = (theta / 2.0).sin_cos();
    vec![vec![c(co), c(-s)], vec![c(s), c(co)]]
}

pub fn cz(a: usize, b: usize, n: usize) -> Matrix {
    let mut m = identity(1 << n);
    for (i, row) in m.iter_mut().enumerate() {
        if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 {
            row[i] = c(-1.0);
        }
    }
    m
}

/// Full unitary of the brick ansatz with `sublayers` rotation/CZ sublayers,
/// built as a dense matrix product.
pub fn dense_unitary(n: usize, sublayers: usize, theta: &[f64]) -> Matrix {
    let mut u = identity(1 << n);
    for s in 0..sublayers {
        for q in 0..n {
            u = matmul(&embed(&ry(theta[s * n + q]), q, n), &u);
        }
        let start = s % 2;
        let mut q = start;
        while q + 1 < n {
            u = matmul(&cz(q, q + 1, n), &u);
            q += 2;
        }
    }
    u
}

/// `⟨0|U† O U|0⟩` with `O` = `(1/n) Σ (1 − Z_i)` (local) or `|0…0⟩⟨0…0|`.
pub fn dense_cost(n: usize, sublayers: usize, theta: &[f64], local: bool) -> f64 {
    let u = dense_unitary(n, sublayers, theta);
    let dim = 1 << n;
    let psi: Vec<Complex64> = (0..dim).map(|i| u[i][0]).collect();
    let z = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]];
    let obs = if local {
        let mut o = vec![vec![c(0.0); dim]; dim];
        for q in 0..n {
            let zq = embed(&z, q, n);
            for i in 0..dim {
                for j in 0..dim {
                    let id = if i == j { 1.0 } else { 0.0 };
                    o[i][j] += (c(id) - zq[i][j]) / n as f64;
                }
            }
        }
        o
    } else {
        let mut o = vec![vec![c(0.0); dim]; dim];
        o[0][0] = c(1.0);
        o
    };
    let mut acc = c(0.0);
    for i in 0..dim {
        for j in 0..dim {
            acc += psi[i].conj() * obs[i][j] * psi[j];
        }
    }
    acc.re
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut k = K15_WEIGHTS[7] * f(mid);
    let mut g = G7_WEIGHTS[3] * f(mid);
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let s = f(mid - dx) + f(mid + dx);
        k += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * s;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature to absolute tolerance `tol`.
pub fn gauss_kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth - 1) + rec(f, m, b, tol / 2.0, depth - 1)
    }
    let panels = 64;
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * w;
            let hi = if i + 1 == panels { b } else { lo + w };
            rec(f, lo, hi, tol / panels as f64, 16)
        })
        .sum()
}

/// `I(x; a, b)` through `x = sin²φ` and Gauss–Kronrod, for `a, b ≥ 1/2`.
pub fn beta_oracle(x: f64, a: f64, b: f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let f = move |phi: f64| phi.sin().powf(2.0 * a - 1.0) * phi.cos().powf(2.0 * b - 1.0);
    let upper = x.sqrt().asin();
    let rough = gauss_kronrod(&f, 0.0, FRAC_PI_2, f64::INFINITY);
    let tol = 1e-13 * rough;
    let total = gauss_kronrod(&f, 0.0, FRAC_PI_2, tol);
    if upper <= FRAC_PI_2 / 2.0 {
        gauss_kronrod(&f, 0.0, upper, tol) / total
    } else {
        1.0 - gauss_kronrod(&f, upper, FRAC_PI_2, tol) / total
    }
}

/// Simple-regression slope and intercept in closed form.
pub fn simple_regression(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
