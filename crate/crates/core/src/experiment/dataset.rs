use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, StartName, StartSpec, WalkMode};
use crate::error::{Error, Result};
use crate::landscape::{
    lhs_sample, random_walk, walk_over_sample, CostFunction, ParameterPoint, WalkConfig,
    WalkRecord,
};
use crate::rng::derive_seed;

pub const WALK_HEADER: [&str; 4] = ["rep", "step", "cost", "step_norm"];

/// JSON sidecar describing one walk file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkManifest {
    pub m: usize,
    /// Fixed step length; absent for walks over a sample.
    pub d: Option<f64>,
    #[serde(rename = "S")]
    pub s: usize,
    pub seed: u64,
    pub cost_id: String,
}

/// Costs and step norms of one repetition as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub rep: usize,
    pub costs: Vec<f64>,
    pub step_norms: Vec<f64>,
}

impl WalkTrace {
    pub fn to_record(&self) -> Result<WalkRecord<f64>> {
        WalkRecord::from_costs(self.costs.clone(), self.step_norms.clone())
    }
}

/// Walk, manifest and optional θ dump paths for repetition `rep`.
pub fn walk_paths(dir: &Path, rep: usize) -> (PathBuf, PathBuf, PathBuf) {
    (
        dir.join(format!("walk_rep{rep}.csv")),
        dir.join(format!("walk_rep{rep}.json")),
        dir.join(format!("walk_rep{rep}_theta.csv")),
    )
}

/// Seed of repetition `rep` of a single-landscape experiment.
pub fn repetition_seed(master: u64, rep: usize) -> u64 {
    derive_seed(master, &[rep as u64])
}

/// Runs one walk as described by the config.
pub fn run_walk(
    cfg: &ExperimentConfig,
    cost: &dyn CostFunction<f64>,
    seed: u64,
) -> Result<WalkRecord<f64>> {
    let m = cost.dimension();
    let s = cfg.walk.steps_for(m);
    match cfg.walk.mode {
        WalkMode::Isotropic => {
            let mut wc = WalkConfig::new(cfg.walk.step_size, s, seed);
            match &cfg.walk.start {
                StartSpec::Named(StartName::Random) => {}
                StartSpec::Named(StartName::Zero) => wc = wc.with_start(ParameterPoint::zeros(m)),
                StartSpec::Point(p) => {
                    if p.len() != m {
                        return Err(Error::config(
                            "walk.start",
                            format!("has {} coordinates, landscape has {m}", p.len()),
                        ));
                    }
                    wc = wc.with_start(ParameterPoint::new(p.clone()));
                }
            }
            random_walk(cost, &wc)
        }
        WalkMode::WalkOverSample => {
            let sample = lhs_sample(m, s + 1, seed)?;
            walk_over_sample(cost, &sample)
        }
    }
}

pub fn write_walk_csv(path: &Path, rep: usize, walk: &WalkRecord<f64>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(WALK_HEADER).map_err(|e| csv_io(path, e))?;
    for (i, c) in walk.costs.iter().enumerate() {
        let norm = if i == 0 { 0.0 } else { walk.step_norms[i - 1] };
        w.write_record([rep.to_string(), i.to_string(), c.to_string(), norm.to_string()])
            .map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_theta_csv(path: &Path, rep: usize, walk: &WalkRecord<f64>) -> Result<()> {
    let m = walk.points.first().map_or(0, |p| p.dimension());
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    let mut header = vec!["rep".to_string(), "step".to_string()];
    header.extend((0..m).map(|k| format!("theta_{k}")));
    w.write_record(&header).map_err(|e| csv_io(path, e))?;
    for (i, p) in walk.points.iter().enumerate() {
        let mut row = vec![rep.to_string(), i.to_string()];
        row.extend(p.coords.iter().map(|x| x.to_string()));
        w.write_record(&row).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<WalkManifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: format!("{}: {e}", path.display()),
    })
}

/// Reads a walk CSV, grouping rows by repetition.
pub fn read_walk_csv(path: &Path) -> Result<Vec<WalkTrace>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_walk_csv(file)
}

/// Parses walk CSV text. Errors report the 1-based line number.
pub fn parse_walk_csv<R: std::io::Read>(input: R) -> Result<Vec<WalkTrace>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(csv_parse)?,
        None => return Err(parse_err(1, "empty walk file")),
    };
    if header.iter().collect::<Vec<_>>() != WALK_HEADER {
        return Err(parse_err(
            1,
            format!("expected header `{}`", WALK_HEADER.join(",")),
        ));
    }
    let mut reps: BTreeMap<usize, WalkTrace> = BTreeMap::new();
    for rec in records {
        let rec = rec.map_err(csv_parse)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 4 {
            return Err(parse_err(line, format!("expected 4 fields, got {}", rec.len())));
        }
        let rep: usize = field(&rec, 0, line, "rep")?;
        let step: usize = field(&rec, 1, line, "step")?;
        let cost: f64 = field(&rec, 2, line, "cost")?;
        let norm: f64 = field(&rec, 3, line, "step_norm")?;
        if !cost.is_finite() || !norm.is_finite() {
            return Err(parse_err(line, "non-finite value"));
        }
        let trace = reps.entry(rep).or_insert_with(|| WalkTrace {
            rep,
            costs: Vec::new(),
            step_norms: Vec::new(),
        });
        if step != trace.costs.len() {
            return Err(parse_err(
                line,
                format!(
                    "rep {rep}: expected step {}, found {step}",
                    trace.costs.len()
                ),
            ));
        }
        if step > 0 {
            if !(norm > 0.0) {
                return Err(parse_err(line, "step_norm must be positive after step 0"));
            }
            trace.step_norms.push(norm);
        }
        trace.costs.push(cost);
    }
    if reps.is_empty() {
        return Err(parse_err(1, "walk file has no rows"));
    }
    Ok(reps.into_values().collect())
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    idx: usize,
    line: u64,
    name: &str,
) -> Result<T> {
    let raw = &rec[idx];
    raw.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {name} from `{raw}`")))
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn csv_parse(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    parse_err(line, e.to_string())
}

pub(crate) fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Internal(format!("{}: {other:?}", path.display())),
    }
}

/// Output of the `walk` command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkOutput {
    pub files: Vec<PathBuf>,
    pub manifests: Vec<WalkManifest>,
}

/// Generates one walk per repetition and writes CSV, manifest and (when
/// configured) θ dump into the output directory.
pub fn cmd_walk(cfg: &ExperimentConfig) -> Result<WalkOutput> {
    cfg.validate()?;
    let cost = cfg.landscape.build()?;
    let dir = &cfg.output;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = WalkOutput {
        files: Vec::new(),
        manifests: Vec::new(),
    };
    for rep in 0..cfg.walk.repetitions {
        let seed = repetition_seed(cfg.walk.seed, rep);
        let walk = run_walk(cfg, cost.as_ref(), seed)?;
        let (csv_path, manifest_path, theta_path) = walk_paths(dir, rep);
        write_walk_csv(&csv_path, rep, &walk)?;
        let manifest = WalkManifest {
            m: cost.dimension(),
            d: match cfg.walk.mode {
                WalkMode::Isotropic => Some(cfg.walk.step_size),
                WalkMode::WalkOverSample => None,
            },
            s: walk.num_steps(),
            seed,
            cost_id: cost.id(),
        };
        write_json(&manifest_path, &manifest)?;
        if cfg.walk.dump_theta {
            write_theta_csv(&theta_path, rep, &walk)?;
        }
        out.files.push(csv_path);
        out.manifests.push(manifest);
    }
    Ok(out)
}
