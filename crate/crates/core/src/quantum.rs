//! Exact statevector simulation of the alternating layered ansatz.
//!
//! Each layer applies `RY(θ) = exp(-iθY/2)` to every qubit, then a brick of
//! controlled-Z gates: pairs `(0,1), (2,3), …` on even layers and
//! `(1,2), (3,4), …` on odd layers. One parameter per qubit per layer, so
//! `m = n·L`, stored layer-major (`θ[ℓ·n + q]`).
//!
//! [`AnsatzLayout::Blocks`] counts layers the way the alternating-block
//! ansatz of Cerezo et al. does: one layer is a full block cover, i.e. two
//! consecutive brick sublayers (even pairs, then odd pairs), giving
//! `m = 2·n·L`.
//!
//! Qubit ordering is little-endian: qubit `q` is bit `q` of the amplitude
//! index. Gates are applied in place with stride arithmetic.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{wrap_angle, CostFunction};
use crate::real::{count, lit, Real};

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 16;

/// How a "layer" maps onto RY/CZ sublayers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsatzLayout {
    /// One rotation sublayer and one CZ brick per layer.
    #[default]
    Brick,
    /// Two sublayers per layer so every layer covers both brick offsets.
    Blocks,
}

impl AnsatzLayout {
    pub fn sublayers_per_layer(&self) -> usize {
        match self {
            Self::Brick => 1,
            Self::Blocks => 2,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Brick => "brick",
            Self::Blocks => "blocks",
        }
    }
}

impl std::str::FromStr for AnsatzLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "brick" => Ok(Self::Brick),
            "blocks" => Ok(Self::Blocks),
            other => Err(Error::invalid(format!("unknown ansatz layout `{other}`"))),
        }
    }
}

/// Circuit layout: qubit and layer counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub qubits: usize,
    pub layers: usize,
    #[serde(default)]
    pub layout: AnsatzLayout,
}

impl AnsatzSpec {
    pub fn new(qubits: usize, layers: usize) -> Result<Self> {
        Self::with_layout(qubits, layers, AnsatzLayout::Brick)
    }

    pub fn with_layout(qubits: usize, layers: usize, layout: AnsatzLayout) -> Result<Self> {
        let spec = Self {
            qubits,
            layers,
            layout,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Number of rotation + CZ sublayers actually applied.
    pub fn sublayers(&self) -> usize {
        self.layers * self.layout.sublayers_per_layer()
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&self.qubits) {
            return Err(Error::invalid(format!(
                "qubit count {} outside {MIN_QUBITS}..={MAX_QUBITS}",
                self.qubits
            )));
        }
        if self.layers < 1 {
            return Err(Error::invalid("ansatz needs at least one layer"));
        }
        Ok(())
    }

    /// Parameter count: `n·L` for bricks, `2·n·L` for blocks.
    pub fn num_params(&self) -> usize {
        self.qubits * self.sublayers()
    }

    /// Controlled-Z pairs applied after the rotations of `sublayer`.
    pub fn entangler_pairs(&self, sublayer: usize) -> impl Iterator<Item = (usize, usize)> {
        let n = self.qubits;
        (sublayer % 2..n.saturating_sub(1)).step_by(2).map(|q| (q, q + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableKind {
    /// `(1/n) Σ_i (1 - Z_i)`, expectation in `[0, 2]`.
    Local,
    /// `|0…0⟩⟨0…0|`, expectation in `[0, 1]`.
    Global,
}

impl ObservableKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObservableKind::Local => "local",
            ObservableKind::Global => "global",
        }
    }
}

impl std::str::FromStr for ObservableKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(ObservableKind::Local),
            "global" => Ok(ObservableKind::Global),
            other => Err(Error::invalid(format!("unknown observable `{other}`"))),
        }
    }
}

impl std::fmt::Display for ObservableKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservableSpec {
    pub kind: ObservableKind,
    pub qubits: usize,
}

impl ObservableSpec {
    pub fn new(kind: ObservableKind, qubits: usize) -> Self {
        Self { kind, qubits }
    }
}

/// Amplitudes of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<F: Real> {
    qubits: usize,
    amplitudes: Vec<Complex<F>>,
}

impl<F: Real> StateVector<F> {
    /// `|0…0⟩`.
    pub fn zero_state(qubits: usize) -> Self {
        let mut amplitudes = vec![Complex::new(F::zero(), F::zero()); 1 << qubits];
        amplitudes[0] = Complex::new(F::one(), F::zero());
        Self { qubits, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex<F>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("amplitude count {len} is not 2^n, n >= 1")));
        }
        Ok(Self {
            qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex<F>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> F {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<F>().sqrt()
    }

    /// Applies `exp(-iθY/2)` to `qubit`.
    pub fn apply_ry(&mut self, qubit: usize, theta: F) {
        let half = theta / lit(2.0);
        let (s, c) = half.sin_cos();
        let stride = 1usize << qubit;
        let dim = self.amplitudes.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + stride {
                let j = i + stride;
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[j];
                self.amplitudes[i] = a0 * c - a1 * s;
                self.amplitudes[j] = a0 * s + a1 * c;
            }
            base += stride << 1;
        }
    }

    /// Applies controlled-Z between two distinct qubits.
    pub fn apply_cz(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }
}

/// `U(θ)|0…0⟩` for the layered RY/CZ ansatz.
pub fn prepare_state<F: Real>(spec: &AnsatzSpec, theta: &[F]) -> Result<StateVector<F>> {
    spec.validate()?;
    if theta.len() != spec.num_params() {
        return Err(Error::invalid(format!(
            "ansatz {}x{} ({}) takes {} parameters, got {}",
            spec.qubits,
            spec.layers,
            spec.layout.as_str(),
            spec.num_params(),
            theta.len()
        )));
    }
    let mut state = StateVector::zero_state(spec.qubits);
    for (sublayer, angles) in theta.chunks(spec.qubits).enumerate() {
        for (q, &t) in angles.iter().enumerate() {
            state.apply_ry(q, t);
        }
        for (a, b) in spec.entangler_pairs(sublayer) {
            state.apply_cz(a, b);
        }
    }
    Ok(state)
}

/// Expectation value of the observable in `state`.
pub fn expectation<F: Real>(state: &StateVector<F>, obs: &ObservableSpec) -> Result<F> {
    if state.qubits() != obs.qubits {
        return Err(Error::invalid(format!(
            "observable on {} qubits applied to {}-qubit state",
            obs.qubits,
            state.qubits()
        )));
    }
    Ok(match obs.kind {
        ObservableKind::Global => state.amplitudes[0].norm_sqr(),
        ObservableKind::Local => {
            // (1 - Z_i) has eigenvalue 2 on |1⟩ and 0 on |0⟩
            let weighted: F = state
                .amplitudes
                .iter()
                .enumerate()
                .map(|(i, a)| a.norm_sqr() * count::<F>(i.count_ones() as usize))
                .sum();
            lit::<F>(2.0) * weighted / count::<F>(obs.qubits)
        }
    })
}

/// `C(θ) = ⟨0|U†(θ) O U(θ)|0⟩` as a [`CostFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumCost {
    pub ansatz: AnsatzSpec,
    pub observable: ObservableKind,
}

pub fn quantum_cost(spec: AnsatzSpec, obs: ObservableSpec) -> Result<QuantumCost> {
    spec.validate()?;
    if obs.qubits != spec.qubits {
        return Err(Error::invalid(format!(
            "observable on {} qubits, ansatz on {}",
            obs.qubits, spec.qubits
        )));
    }
    Ok(QuantumCost {
        ansatz: spec,
        observable: obs.kind,
    })
}

impl QuantumCost {
    pub fn observable_spec(&self) -> ObservableSpec {
        ObservableSpec::new(self.observable, self.ansatz.qubits)
    }
}

impl<F: Real> CostFunction<F> for QuantumCost {
    fn dimension(&self) -> usize {
        self.ansatz.num_params()
    }

    fn evaluate(&self, theta: &[F]) -> Result<F> {
        let reduced: Vec<F> = theta.iter().map(|&t| wrap_angle(t)).collect();
        let state = prepare_state(&self.ansatz, &reduced)?;
        expectation(&state, &self.observable_spec())
    }

    fn id(&self) -> String {
        let base = format!(
            "quantum-{}-n{}-l{}",
            self.observable, self.ansatz.qubits, self.ansatz.layers
        );
        match self.ansatz.layout {
            AnsatzLayout::Brick => base,
            AnsatzLayout::Blocks => format!("{base}-blocks"),
        }
    }
}

/// Exact gradient by the two-term shift rule; valid because every generator
/// `Y/2` has eigenvalues `±1/2`.
pub fn parameter_shift_gradient<F: Real>(
    spec: &AnsatzSpec,
    obs: &ObservableSpec,
    theta: &[F],
) -> Result<Vec<F>> {
    let cost = quantum_cost(*spec, *obs)?;
    if theta.len() != spec.num_params() {
        return Err(Error::invalid(format!(
            "expected {} parameters, got {}",
            spec.num_params(),
            theta.len()
        )));
    }
    let shift = F::FRAC_PI_2();
    let mut probe = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for k in 0..theta.len() {
        probe[k] = theta[k] + shift;
        let plus: F = cost.evaluate(&probe)?;
        probe[k] = theta[k] - shift;
        let minus: F = cost.evaluate(&probe)?;
        probe[k] = theta[k];
        grad.push((plus - minus) / lit(2.0));
    }
    Ok(grad)
}
