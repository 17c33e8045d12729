//! Special functions: log-gamma, error function and the regularized
//! incomplete beta function. Only elementary functions from the platform
//! are used.

use crate::error::{Error, Result};
use crate::real::{count, lit, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<F: Real>(x: F) -> F {
    if x < lit(0.5) {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (F::PI() / (F::PI() * x).sin()).abs().ln() - ln_gamma(F::one() - x);
    }
    let x = x - F::one();
    let mut acc = lit::<F>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += lit::<F>(c) / (x + count(i));
    }
    let t = x + lit(LANCZOS_G + 0.5);
    lit::<F>(0.5) * (lit::<F>(2.0) * F::PI()).ln() + (x + lit(0.5)) * t.ln() - t + acc.ln()
}

/// `ln B(a, b)`.
pub fn ln_beta<F: Real>(a: F, b: F) -> F {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Error function.
pub fn erf<F: Real>(x: F) -> F {
    if x < F::zero() {
        return -erf(-x);
    }
    if x < lit(3.0) {
        erf_series(x)
    } else {
        F::one() - erfc_continued_fraction(x)
    }
}

/// Complementary error function, accurate in both tails.
pub fn erfc<F: Real>(x: F) -> F {
    if x < F::zero() {
        lit::<F>(2.0) - erfc(-x)
    } else if x < lit(3.0) {
        F::one() - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

// erf(x) = 2/√π · e^{-x²} Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1)); all terms positive.
fn erf_series<F: Real>(x: F) -> F {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0usize;
    loop {
        n += 1;
        term *= lit::<F>(2.0) * x2 / count::<F>(2 * n + 1);
        sum += term;
        if term <= sum * F::eps() || n > 500 {
            break;
        }
    }
    lit::<F>(2.0) / F::PI().sqrt() * (-x2).exp() * sum
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), x > 0.
fn erfc_continued_fraction<F: Real>(x: F) -> F {
    let tiny = F::min_positive_value() / F::eps();
    let mut f = x;
    let mut c = x;
    let mut d = F::zero();
    for k in 1..500 {
        let a = count::<F>(k) / lit(2.0);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f *= delta;
        if (delta - F::one()).abs() < F::eps() {
            break;
        }
    }
    (-x * x).exp() / F::PI().sqrt() / f
}

/// Regularized incomplete beta function `I(x; a, b)`.
///
/// Continued fraction (modified Lentz), evaluated on the side of the
/// symmetry `I(x; a, b) = 1 - I(1-x; b, a)` where it converges fastest.
pub fn reg_incomplete_beta<F: Real>(x: F, a: F, b: F) -> Result<F> {
    if !(a > F::zero()) || !(b > F::zero()) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!(
            "incomplete beta needs a, b > 0 (got a = {a}, b = {b})"
        )));
    }
    if !(x >= F::zero() && x <= F::one()) {
        return Err(Error::invalid(format!("incomplete beta needs x in [0, 1], got {x}")));
    }
    if x == F::zero() {
        return Ok(F::zero());
    }
    if x == F::one() {
        return Ok(F::one());
    }
    let ln_front = a * x.ln() + b * (F::one() - x).ln() - ln_beta(a, b);
    let front = ln_front.exp();
    let value = if x < (a + F::one()) / (a + b + lit(2.0)) {
        front * beta_continued_fraction(x, a, b)? / a
    } else {
        F::one() - front * beta_continued_fraction(F::one() - x, b, a)? / b
    };
    Ok(value.max(F::zero()).min(F::one()))
}

fn beta_continued_fraction<F: Real>(x: F, a: F, b: F) -> Result<F> {
    const MAX_ITER: usize = 10_000;
    let tiny = F::min_positive_value() / F::eps();
    let one = F::one();
    let two = lit::<F>(2.0);
    let qab = a + b;
    let qap = a + one;
    let qam = a - one;

    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = d.recip();
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = count::<F>(m);
        let m2 = two * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h *= del;
        if (del - one).abs() <= F::eps() {
            return Ok(h);
        }
    }
    Err(Error::Internal(format!(
        "incomplete beta continued fraction did not converge (x = {x}, a = {a}, b = {b})"
    )))
}
