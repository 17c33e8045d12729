//! Information content of a walk: symbolisation, pair statistics, the
//! `H(ε)` curve and its MIC/SIC features.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::WalkRecord;
use crate::real::{count, lit, Real};

/// Default sensitivity threshold η.
pub const DEFAULT_ETA: f64 = 0.05;
/// Log-spaced points in the default ε grid (plus ε = 0).
pub const DEFAULT_GRID_POINTS: usize = 200;
pub const DEFAULT_GRID_MIN_FACTOR: f64 = 1e-8;
pub const DEFAULT_GRID_MAX_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Minus,
    Dot,
    Plus,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Minus, Symbol::Dot, Symbol::Plus];

    fn index(self) -> usize {
        match self {
            Symbol::Minus => 0,
            Symbol::Dot => 1,
            Symbol::Plus => 2,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Minus => '-',
            Symbol::Dot => '.',
            Symbol::Plus => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '-' => Some(Symbol::Minus),
            '.' | '⊙' | '0' => Some(Symbol::Dot),
            '+' => Some(Symbol::Plus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSequence<F: Real> {
    pub symbols: Vec<Symbol>,
    pub epsilon: F,
}

impl<F: Real> SymbolSequence<F> {
    /// Parses `+`, `-` and `.` (or `⊙`) characters.
    pub fn parse(s: &str, epsilon: F) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| Symbol::from_char(c).ok_or_else(|| Error::invalid(format!("bad symbol `{c}`"))))
            .collect::<Result<_>>()?;
        Ok(Self { symbols, epsilon })
    }

    pub fn to_string_lossy(&self) -> String {
        self.symbols.iter().map(|s| s.as_char()).collect()
    }
}

/// Maps each delta onto `-` (below `-ε`), `⊙` (`|ΔC| ≤ ε`) or `+` (above `ε`).
pub fn symbolize<F: Real>(deltas: &[F], epsilon: F) -> SymbolSequence<F> {
    let symbols = deltas
        .iter()
        .map(|&d| {
            if d < -epsilon {
                Symbol::Minus
            } else if d > epsilon {
                Symbol::Plus
            } else {
                Symbol::Dot
            }
        })
        .collect();
    SymbolSequence { symbols, epsilon }
}

/// Exact counts of consecutive ordered symbol pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairProbabilities {
    counts: [[u64; 3]; 3],
    pair_count: u64,
}

impl PairProbabilities {
    pub fn count(&self, a: Symbol, b: Symbol) -> u64 {
        self.counts[a.index()][b.index()]
    }

    pub fn pair_count(&self) -> u64 {
        self.pair_count
    }

    /// `p_ab = count(ab) / (S - 1)`, one rounding from the exact ratio.
    pub fn p<F: Real>(&self, a: Symbol, b: Symbol) -> F {
        let num = F::from_u64(self.count(a, b)).expect("count fits scalar");
        let den = F::from_u64(self.pair_count).expect("count fits scalar");
        num / den
    }

    /// The six ordered pairs of distinct symbols, in the order
    /// `+-, -+, +⊙, ⊙+, -⊙, ⊙-`.
    pub fn unequal<F: Real>(&self) -> [F; 6] {
        use Symbol::*;
        [
            self.p(Plus, Minus),
            self.p(Minus, Plus),
            self.p(Plus, Dot),
            self.p(Dot, Plus),
            self.p(Minus, Dot),
            self.p(Dot, Minus),
        ]
    }

    pub fn p_dot_dot<F: Real>(&self) -> F {
        self.p(Symbol::Dot, Symbol::Dot)
    }

    pub fn p_plus_plus<F: Real>(&self) -> F {
        self.p(Symbol::Plus, Symbol::Plus)
    }

    pub fn p_minus_minus<F: Real>(&self) -> F {
        self.p(Symbol::Minus, Symbol::Minus)
    }

    /// Sum of the four smallest unequal-pair probabilities.
    pub fn smallest_four_sum<F: Real>(&self) -> F {
        let mut u = self.unequal::<F>();
        u.sort_by(|a, b| a.partial_cmp(b).expect("finite probabilities"));
        u[..4].iter().copied().sum()
    }
}

pub fn pair_probabilities<F: Real>(seq: &SymbolSequence<F>) -> Result<PairProbabilities> {
    if seq.symbols.len() < 2 {
        return Err(Error::invalid("pair probabilities need at least 2 symbols"));
    }
    let mut counts = [[0u64; 3]; 3];
    for w in seq.symbols.windows(2) {
        counts[w[0].index()][w[1].index()] += 1;
    }
    Ok(PairProbabilities {
        counts,
        pair_count: (seq.symbols.len() - 1) as u64,
    })
}

/// `h(x) = -x log₆ x`, with `h(0) = 0`.
pub fn h<F: Real>(x: F) -> F {
    if x <= F::zero() {
        F::zero()
    } else {
        -x * x.ln() / lit::<F>(6.0).ln()
    }
}

/// `H = Σ_{a≠b} h(p_ab)` over the six unequal pairs; lies in `[0, 1]`.
pub fn information_content<F: Real>(pp: &PairProbabilities) -> F {
    pp.unequal::<F>().into_iter().map(h).sum()
}

/// Entry of an `H(ε)` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IcPoint<F: Real> {
    pub epsilon: F,
    #[serde(rename = "H")]
    pub h: F,
}

/// `H(ε)` sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IcCurve<F: Real> {
    pub entries: Vec<IcPoint<F>>,
}

impl<F: Real> IcCurve<F> {
    pub fn new(entries: Vec<IcPoint<F>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("IC curve is empty"));
        }
        if entries.windows(2).any(|w| !(w[0].epsilon < w[1].epsilon)) {
            return Err(Error::invalid("IC curve ε values must be strictly increasing"));
        }
        if entries.iter().any(|e| !(e.epsilon >= F::zero())) {
            return Err(Error::invalid("IC curve ε values must be non-negative"));
        }
        Ok(Self { entries })
    }

    pub fn from_pairs(pairs: &[(F, F)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(epsilon, h)| IcPoint { epsilon, h }).collect())
    }

    /// `epsilon,H` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,H\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.epsilon, e.h));
        }
        out
    }
}

/// `{0} ∪` log-spaced values in `[min_factor·ε_ref, max_factor·ε_ref]`.
///
/// A zero reference (flat walk) falls back to `ε_ref = 1`.
pub fn default_grid<F: Real>(eps_ref: F, points: usize, min_factor: F, max_factor: F) -> Vec<F> {
    let eps_ref = if eps_ref > F::zero() && eps_ref.is_finite() {
        eps_ref
    } else {
        F::one()
    };
    let lo = (min_factor * eps_ref).ln();
    let hi = (max_factor * eps_ref).ln();
    let mut grid = Vec::with_capacity(points + 1);
    grid.push(F::zero());
    for i in 0..points {
        let t = if points == 1 {
            F::zero()
        } else {
            count::<F>(i) / count::<F>(points - 1)
        };
        grid.push((lo + (hi - lo) * t).exp());
    }
    grid
}

/// Grid settings for [`ic_curve`].
#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonGrid<F: Real> {
    /// Default log grid relative to `max |ΔC|`.
    Relative {
        points: usize,
        min_factor: F,
        max_factor: F,
    },
    Explicit(Vec<F>),
}

impl<F: Real> Default for EpsilonGrid<F> {
    fn default() -> Self {
        EpsilonGrid::Relative {
            points: DEFAULT_GRID_POINTS,
            min_factor: lit(DEFAULT_GRID_MIN_FACTOR),
            max_factor: lit(DEFAULT_GRID_MAX_FACTOR),
        }
    }
}

/// `H(ε)` of the walk's deltas on every grid point.
pub fn ic_curve<F: Real>(walk: &WalkRecord<F>, grid: &EpsilonGrid<F>) -> Result<IcCurve<F>> {
    ic_curve_from_deltas(&walk.deltas, grid)
}

pub fn ic_curve_from_deltas<F: Real>(deltas: &[F], grid: &EpsilonGrid<F>) -> Result<IcCurve<F>> {
    if deltas.is_empty() {
        return Err(Error::invalid("walk has no deltas"));
    }
    if deltas.len() < 2 {
        return Err(Error::invalid("walk needs at least 2 steps"));
    }
    if deltas.iter().any(|d| !d.is_finite()) {
        return Err(Error::invalid("walk deltas must be finite"));
    }
    let eps_values = match grid {
        EpsilonGrid::Relative {
            points,
            min_factor,
            max_factor,
        } => {
            let eps_ref = deltas.iter().fold(F::zero(), |acc, d| acc.max(d.abs()));
            default_grid(eps_ref, *points, *min_factor, *max_factor)
        }
        EpsilonGrid::Explicit(v) => {
            let mut v = v.clone();
            v.sort_by(|a, b| a.partial_cmp(b).expect("finite ε"));
            v.dedup();
            v
        }
    };
    let entries = eps_values
        .into_iter()
        .map(|epsilon| {
            let seq = symbolize(deltas, epsilon);
            let pp = pair_probabilities(&seq)?;
            Ok(IcPoint {
                epsilon,
                h: information_content(&pp),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    IcCurve::new(entries)
}

/// MIC and SIC features of an `H(ε)` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IcFeatures<F: Real> {
    #[serde(rename = "H_M")]
    pub h_max: F,
    #[serde(rename = "eps_M")]
    pub eps_max: F,
    #[serde(rename = "eps_S")]
    pub eps_sensitivity: F,
    pub eta: F,
    pub m: usize,
    #[serde(rename = "eps_M_sqrt_m")]
    pub eps_max_sqrt_m: F,
    #[serde(rename = "eps_S_sqrt_m")]
    pub eps_sensitivity_sqrt_m: F,
}

/// Extracts `H_M = max H(ε)` (smallest attaining ε) and
/// `ε_S = min{ε > 0 : H(ε) ≤ η}`.
pub fn extract_features<F: Real>(curve: &IcCurve<F>, eta: F, m: usize) -> Result<IcFeatures<F>> {
    let sixth = F::one() / lit(6.0);
    if !(eta > F::zero() && eta <= sixth) {
        return Err(Error::invalid(format!("η = {eta} outside (0, 1/6]")));
    }
    if m < 1 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    let first = curve
        .entries
        .first()
        .ok_or_else(|| Error::invalid("IC curve is empty"))?;
    let mut best = *first;
    for e in &curve.entries[1..] {
        if e.h > best.h {
            best = *e;
        }
    }
    let eps_s = curve
        .entries
        .iter()
        .find(|e| e.epsilon > F::zero() && e.h <= eta)
        .map(|e| e.epsilon)
        .ok_or_else(|| {
            Error::Internal("no grid ε reaches H ≤ η; extend the grid past max |ΔC|".into())
        })?;
    let sqrt_m = count::<F>(m).sqrt();
    Ok(IcFeatures {
        h_max: best.h,
        eps_max: best.epsilon,
        eps_sensitivity: eps_s,
        eta,
        m,
        eps_max_sqrt_m: best.epsilon * sqrt_m,
        eps_sensitivity_sqrt_m: eps_s * sqrt_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol::*;

    fn seq(s: &str) -> SymbolSequence<f64> {
        SymbolSequence::parse(s, 0.0).unwrap()
    }

    #[test]
    fn symbolize_rule() {
        let s = symbolize(&[0.5, -0.5, 0.0], 0.1);
        assert_eq!(s.symbols, vec![Plus, Minus, Dot]);
        let s = symbolize(&[3.0, -2.0, 0.1], 3.0);
        assert!(s.symbols.iter().all(|&x| x == Dot));
        // |ΔC| = ε is a dot
        assert_eq!(symbolize(&[0.1], 0.1).symbols, vec![Dot]);
        assert_eq!(symbolize(&[-0.1], 0.1).symbols, vec![Dot]);
    }

    #[test]
    fn pair_counts_alternating() {
        let pp = pair_probabilities(&seq("+-+-")).unwrap();
        assert_eq!(pp.pair_count(), 3);
        assert!((pp.p::<f64>(Plus, Minus) - 2.0 / 3.0).abs() < 1e-15);
        assert!((pp.p::<f64>(Minus, Plus) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(pp.p::<f64>(Plus, Dot), 0.0);
    }

    #[test]
    fn pair_counts_all_dots() {
        let pp = pair_probabilities(&seq("....")).unwrap();
        assert_eq!(pp.p_dot_dot::<f64>(), 1.0);
        assert!(pp.unequal::<f64>().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn pair_counts_mixed() {
        let pp = pair_probabilities(&seq("+.-")).unwrap();
        assert_eq!(pp.p::<f64>(Plus, Dot), 0.5);
        assert_eq!(pp.p::<f64>(Dot, Minus), 0.5);
        let total: f64 = Symbol::ALL
            .iter()
            .flat_map(|&a| Symbol::ALL.iter().map(move |&b| (a, b)))
            .map(|(a, b)| pp.p::<f64>(a, b))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_probabilities_need_two_symbols() {
        assert!(pair_probabilities(&seq("+")).is_err());
    }

    #[test]
    fn information_content_closed_forms() {
        // uniform over the six unequal pairs: "+-.+.-+" has 6 distinct pairs
        let pp = pair_probabilities(&seq("+-.+.-+")).unwrap();
        assert!(pp.unequal::<f64>().iter().all(|&p| (p - 1.0 / 6.0).abs() < 1e-15));
        assert!((information_content::<f64>(&pp) - 1.0).abs() < 1e-12);

        let flat = pair_probabilities(&seq("....")).unwrap();
        assert_eq!(information_content::<f64>(&flat), 0.0);

        let alt = pair_probabilities(&seq("+-+")).unwrap();
        let expect = 2.0_f64.ln() / 6.0_f64.ln();
        assert!((information_content::<f64>(&alt) - expect).abs() < 1e-12);
        assert!((expect - 0.386853).abs() < 1e-6);
    }

    #[test]
    fn constant_walk_has_flat_curve() {
        let walk = WalkRecord::from_deltas(vec![0.0; 50]);
        let curve = ic_curve(&walk, &EpsilonGrid::default()).unwrap();
        assert_eq!(curve.entries.len(), DEFAULT_GRID_POINTS + 1);
        assert!(curve.entries.iter().all(|e| e.h == 0.0));
        let f = extract_features(&curve, 0.05, 4).unwrap();
        assert_eq!(f.h_max, 0.0);
        assert_eq!(f.eps_sensitivity, curve.entries[1].epsilon);
    }

    #[test]
    fn alternating_walk_curve() {
        // 101 deltas -> 100 pairs split evenly between +- and -+
        let deltas: Vec<f64> = (0..101).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let walk = WalkRecord::from_deltas(deltas);
        let curve = ic_curve(&walk, &EpsilonGrid::Explicit(vec![0.0, 0.5, 2.0])).unwrap();
        let log6_2 = 2.0_f64.ln() / 6.0_f64.ln();
        assert!((curve.entries[1].h - log6_2).abs() < 1e-12);
        assert_eq!(curve.entries[2].h, 0.0);
    }

    #[test]
    fn empty_walk_is_rejected() {
        assert!(ic_curve_from_deltas::<f64>(&[], &EpsilonGrid::default()).is_err());
    }

    #[test]
    fn features_from_synthetic_curve() {
        let curve = IcCurve::from_pairs(&[(0.1, 0.2), (1.0, 0.8), (10.0, 0.0)]).unwrap();
        let f = extract_features(&curve, 0.05, 4).unwrap();
        assert_eq!(f.eps_max, 1.0);
        assert_eq!(f.h_max, 0.8);
        assert_eq!(f.eps_sensitivity, 10.0);
        assert_eq!(f.eps_max_sqrt_m, 2.0);
        assert_eq!(f.eps_sensitivity_sqrt_m, 20.0);
    }

    #[test]
    fn ties_report_smallest_epsilon() {
        let curve = IcCurve::from_pairs(&[(0.1, 0.5), (0.2, 0.7), (0.3, 0.7), (1.0, 0.0)]).unwrap();
        assert_eq!(extract_features(&curve, 0.05, 1).unwrap().eps_max, 0.2);
    }

    #[test]
    fn features_validate_inputs() {
        let curve = IcCurve::from_pairs(&[(0.1, 0.5), (1.0, 0.3)]).unwrap();
        assert!(extract_features(&curve, 0.0, 1).is_err());
        assert!(extract_features(&curve, 0.2, 1).is_err());
        assert!(matches!(extract_features(&curve, 0.05, 1), Err(Error::Internal(_))));
        assert!(IcCurve::from_pairs(&[(1.0, 0.1), (0.5, 0.2)]).is_err());
    }

    #[test]
    fn curve_csv_layout() {
        let curve = IcCurve::from_pairs(&[(0.0, 0.25), (0.5, 0.0)]).unwrap();
        assert_eq!(curve.to_csv(), "epsilon,H\n0,0.25\n0.5,0\n");
    }
}
