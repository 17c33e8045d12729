use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ic::{
    EpsilonGrid, DEFAULT_ETA, DEFAULT_GRID_MAX_FACTOR, DEFAULT_GRID_MIN_FACTOR,
    DEFAULT_GRID_POINTS,
};
use crate::landscape::{AnalyticKind, AnalyticLandscape, CostFunction, DEFAULT_STEP_SIZE};
use crate::quantum::{
    quantum_cost, AnsatzLayout, AnsatzSpec, ObservableKind, ObservableSpec, MAX_QUBITS,
    MIN_QUBITS,
};

/// Top-level experiment description. Every field has a default, so `{}` is
/// a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub landscape: LandscapeConfig,
    pub walk: WalkSettings,
    pub ic: IcSettings,
    pub scan: ScanSettings,
    pub fit: FitSettings,
    /// Directory receiving every output file.
    pub output: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            landscape: LandscapeConfig::default(),
            walk: WalkSettings::default(),
            ic: IcSettings::default(),
            scan: ScanSettings::default(),
            fit: FitSettings::default(),
            output: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum LandscapeConfig {
    Quantum {
        qubits: usize,
        layers: usize,
        observable: ObservableKind,
        #[serde(default)]
        layout: AnsatzLayout,
    },
    Analytic {
        kind: AnalyticKind,
        coefficients: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
}

impl Default for LandscapeConfig {
    fn default() -> Self {
        LandscapeConfig::Quantum {
            qubits: 4,
            layers: 4,
            observable: ObservableKind::Global,
            layout: AnsatzLayout::Brick,
        }
    }
}

impl LandscapeConfig {
    pub fn build(&self) -> Result<Box<dyn CostFunction<f64>>> {
        match self {
            LandscapeConfig::Quantum {
                qubits,
                layers,
                observable,
                layout,
            } => {
                let spec = AnsatzSpec::with_layout(*qubits, *layers, *layout)
                    .map_err(|e| Error::config("landscape", e.to_string()))?;
                let cost = quantum_cost(spec, ObservableSpec::new(*observable, *qubits))?;
                Ok(Box::new(cost))
            }
            LandscapeConfig::Analytic {
                kind,
                coefficients,
                offset,
            } => {
                let mut l = AnalyticLandscape::new(*kind, coefficients.clone())
                    .map_err(|e| Error::config("landscape.coefficients", e.to_string()))?;
                l.offset = *offset;
                Ok(Box::new(l))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkMode {
    /// Fixed-length steps in uniformly random directions.
    Isotropic,
    /// Nearest-neighbour tour through a Latin hypercube sample.
    WalkOverSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartName {
    Random,
    Zero,
}

/// Walk start: `"random"`, `"zero"` or an explicit coordinate list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Named(StartName),
    Point(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkSettings {
    pub mode: WalkMode,
    pub step_size: f64,
    /// Sample budget per parameter: `M = samples_per_param · m`, `S = M − 2`.
    pub samples_per_param: usize,
    /// Explicit step count; overrides `samples_per_param`.
    pub num_steps: Option<usize>,
    pub seed: u64,
    pub repetitions: usize,
    pub start: StartSpec,
    /// Also write `rep,step,theta_0..` files.
    pub dump_theta: bool,
}

impl Default for WalkSettings {
    fn default() -> Self {
        Self {
            mode: WalkMode::Isotropic,
            step_size: DEFAULT_STEP_SIZE,
            samples_per_param: 50,
            num_steps: None,
            seed: 0,
            repetitions: 5,
            start: StartSpec::Named(StartName::Random),
            dump_theta: false,
        }
    }
}

impl WalkSettings {
    /// Step count for an `m`-parameter landscape.
    pub fn steps_for(&self, m: usize) -> usize {
        self.num_steps
            .unwrap_or_else(|| (self.samples_per_param * m).saturating_sub(2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IcSettings {
    pub eta: f64,
    pub grid_points: usize,
    pub grid_min_factor: f64,
    pub grid_max_factor: f64,
    /// Explicit ε values; replaces the relative grid when set.
    pub epsilons: Option<Vec<f64>>,
}

impl Default for IcSettings {
    fn default() -> Self {
        Self {
            eta: DEFAULT_ETA,
            grid_points: DEFAULT_GRID_POINTS,
            grid_min_factor: DEFAULT_GRID_MIN_FACTOR,
            grid_max_factor: DEFAULT_GRID_MAX_FACTOR,
            epsilons: None,
        }
    }
}

impl IcSettings {
    pub fn grid(&self) -> EpsilonGrid<f64> {
        match &self.epsilons {
            Some(e) => EpsilonGrid::Explicit(e.clone()),
            None => EpsilonGrid::Relative {
                points: self.grid_points,
                min_factor: self.grid_min_factor,
                max_factor: self.grid_max_factor,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSettings {
    pub qubits: Vec<usize>,
    pub layers: Vec<usize>,
    pub observables: Vec<ObservableKind>,
    pub layout: AnsatzLayout,
    pub repetitions: usize,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            qubits: (2..=14).collect(),
            layers: (4..=16).collect(),
            observables: vec![ObservableKind::Local, ObservableKind::Global],
            layout: AnsatzLayout::Brick,
            repetitions: 5,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSettings {
    /// Weight points by `1/spread²` instead of ordinary least squares.
    pub weighted: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every field against the preconditions of the modules it feeds.
    pub fn validate(&self) -> Result<()> {
        match &self.landscape {
            LandscapeConfig::Quantum { qubits, layers, .. } => {
                if !(MIN_QUBITS..=MAX_QUBITS).contains(qubits) {
                    return Err(Error::config(
                        "landscape.qubits",
                        format!("must lie in {MIN_QUBITS}..={MAX_QUBITS}"),
                    ));
                }
                if *layers < 1 {
                    return Err(Error::config("landscape.layers", "must be >= 1"));
                }
            }
            LandscapeConfig::Analytic { coefficients, .. } => {
                if coefficients.is_empty() {
                    return Err(Error::config("landscape.coefficients", "must not be empty"));
                }
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::config("landscape.coefficients", "must be finite"));
                }
            }
        }
        let w = &self.walk;
        if !(w.step_size > 0.0 && w.step_size.is_finite()) {
            return Err(Error::config("walk.step_size", "must be positive and finite"));
        }
        if w.num_steps.is_none() && w.samples_per_param < 1 {
            return Err(Error::config("walk.samples_per_param", "must be >= 1"));
        }
        if matches!(w.num_steps, Some(s) if s < 2) {
            return Err(Error::config("walk.num_steps", "must be >= 2"));
        }
        if w.repetitions < 1 {
            return Err(Error::config("walk.repetitions", "must be >= 1"));
        }
        if let StartSpec::Point(p) = &w.start {
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::config("walk.start", "coordinates must be finite"));
            }
        }
        let ic = &self.ic;
        if !(ic.eta > 0.0 && ic.eta <= 1.0 / 6.0) {
            return Err(Error::config("ic.eta", "must lie in (0, 1/6]"));
        }
        match &ic.epsilons {
            Some(e) => {
                if e.is_empty() || e.windows(2).any(|w| !(w[1] > w[0])) || e[0] < 0.0 {
                    return Err(Error::config(
                        "ic.epsilons",
                        "must be non-empty, non-negative and strictly increasing",
                    ));
                }
            }
            None => {
                if ic.grid_points < 2 {
                    return Err(Error::config("ic.grid_points", "must be >= 2"));
                }
                if !(ic.grid_min_factor > 0.0 && ic.grid_min_factor < ic.grid_max_factor) {
                    return Err(Error::config(
                        "ic.grid_min_factor",
                        "must be positive and below grid_max_factor",
                    ));
                }
                if ic.grid_max_factor <= 1.0 {
                    return Err(Error::config(
                        "ic.grid_max_factor",
                        "must exceed 1 so the grid passes max |ΔC|",
                    ));
                }
            }
        }
        let s = &self.scan;
        if let Some(i) = s
            .qubits
            .iter()
            .position(|n| !(MIN_QUBITS..=MAX_QUBITS).contains(n))
        {
            return Err(Error::config(
                format!("scan.qubits[{i}]"),
                format!("must lie in {MIN_QUBITS}..={MAX_QUBITS}"),
            ));
        }
        if let Some(i) = s.layers.iter().position(|&l| l < 1) {
            return Err(Error::config(format!("scan.layers[{i}]"), "must be >= 1"));
        }
        if s.repetitions < 1 {
            return Err(Error::config("scan.repetitions", "must be >= 1"));
        }
        if s.jobs == Some(0) {
            return Err(Error::config("scan.jobs", "must be >= 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_default() {
        let cfg = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.scan.qubits, (2..=14).collect::<Vec<_>>());
        assert_eq!(cfg.scan.layers, (4..=16).collect::<Vec<_>>());
        assert_eq!(cfg.scan.repetitions, 5);
    }

    #[test]
    fn printed_defaults_round_trip() {
        let text = ExperimentConfig::default().to_json_pretty();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn errors_carry_field_paths() {
        let err = ExperimentConfig::from_json(r#"{"walk": {"step_size": "big"}}"#).unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "walk.step_size"),
            other => panic!("unexpected {other}"),
        }
        let err = ExperimentConfig::from_json(r#"{"scan": {"qubits": [2, 40]}}"#).unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "scan.qubits[1]"),
            other => panic!("unexpected {other}"),
        }
        let err = ExperimentConfig::from_json(r#"{"walk": {"stepsize": 1}}"#).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn landscapes_parse() {
        let cfg = ExperimentConfig::from_json(
            r#"{"landscape": {"type": "analytic", "kind": "separable-cosine", "coefficients": [1, 2]},
                "walk": {"start": "zero", "num_steps": 10}}"#,
        )
        .unwrap();
        assert_eq!(cfg.landscape.build().unwrap().dimension(), 2);
        assert_eq!(cfg.walk.steps_for(2), 10);
        let cfg = ExperimentConfig::from_json(
            r#"{"landscape": {"type": "quantum", "qubits": 3, "layers": 2, "observable": "local", "layout": "blocks"},
                "walk": {"start": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]}}"#,
        )
        .unwrap();
        let cost = cfg.landscape.build().unwrap();
        assert_eq!(cost.dimension(), 12);
        assert_eq!(cost.id(), "quantum-local-n3-l2-blocks");
        assert_eq!(cfg.walk.steps_for(12), 598);
    }
}
