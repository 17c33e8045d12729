use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::analyze::analyze_walk;
use super::config::ExperimentConfig;
use super::dataset::{csv_io, run_walk};
use crate::error::{Error, Result};
use crate::fit::median;
use crate::quantum::{quantum_cost, AnsatzSpec, ObservableKind, ObservableSpec};
use crate::rng::derive_seed;

pub const SCAN_HEADER: [&str; 11] = [
    "observable",
    "qubits",
    "layers",
    "rep",
    "eps_M",
    "eps_S",
    "H_M",
    "lower_mic",
    "upper_mic",
    "upper_sic",
    "m",
];

/// One `(observable, n, L, rep)` unit of work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ScanCell {
    pub observable: ObservableKind,
    pub qubits: usize,
    pub layers: usize,
    pub rep: usize,
}

impl ScanCell {
    /// Stream seed; depends only on the master seed and the cell itself.
    pub fn seed(&self, master: u64) -> u64 {
        let obs = match self.observable {
            ObservableKind::Local => 0,
            ObservableKind::Global => 1,
        };
        derive_seed(
            master,
            &[self.qubits as u64, self.layers as u64, obs, self.rep as u64],
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(flatten)]
    pub cell: ScanCell,
    pub m: usize,
    pub eps_m: f64,
    pub eps_s: f64,
    pub h_m: f64,
    pub lower_mic: Option<f64>,
    pub upper_mic: Option<f64>,
    pub upper_sic: f64,
}

impl ScanRow {
    pub fn eps_m_sqrt_m(&self) -> f64 {
        self.eps_m * (self.m as f64).sqrt()
    }

    fn record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
        vec![
            self.cell.observable.as_str().to_string(),
            self.cell.qubits.to_string(),
            self.cell.layers.to_string(),
            self.cell.rep.to_string(),
            self.eps_m.to_string(),
            self.eps_s.to_string(),
            self.h_m.to_string(),
            opt(self.lower_mic),
            opt(self.upper_mic),
            self.upper_sic.to_string(),
            self.m.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFailure {
    #[serde(flatten)]
    pub cell: ScanCell,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub failures: Vec<CellFailure>,
    pub files: Vec<PathBuf>,
}

/// All cells of the configured scan, in output order.
pub fn scan_cells(cfg: &ExperimentConfig) -> Vec<ScanCell> {
    let mut obs = cfg.scan.observables.clone();
    obs.sort();
    obs.dedup();
    let mut cells = Vec::new();
    for &observable in &obs {
        for &qubits in &cfg.scan.qubits {
            for &layers in &cfg.scan.layers {
                for rep in 0..cfg.scan.repetitions {
                    cells.push(ScanCell {
                        observable,
                        qubits,
                        layers,
                        rep,
                    });
                }
            }
        }
    }
    cells.sort();
    cells.dedup();
    cells
}

/// Walk + analysis for one cell.
pub fn run_cell(cfg: &ExperimentConfig, cell: ScanCell) -> Result<ScanRow> {
    let spec = AnsatzSpec::with_layout(cell.qubits, cell.layers, cfg.scan.layout)?;
    let cost = quantum_cost(spec, ObservableSpec::new(cell.observable, cell.qubits))?;
    let m = spec.num_params();
    let walk = run_walk(cfg, &cost, cell.seed(cfg.walk.seed))?;
    let a = analyze_walk(&walk, m, &cfg.ic)?;
    Ok(ScanRow {
        cell,
        m,
        eps_m: a.features.eps_max,
        eps_s: a.features.eps_sensitivity,
        h_m: a.features.h_max,
        lower_mic: a.bounds.lower_mic,
        upper_mic: a.bounds.upper_mic,
        upper_sic: a.bounds.upper_sic,
    })
}

/// Runs every cell on a worker pool. Results are sorted by cell, so the
/// output does not depend on the number of workers.
pub fn run_scan(cfg: &ExperimentConfig) -> Result<(Vec<ScanRow>, Vec<CellFailure>)> {
    cfg.validate()?;
    let cells = scan_cells(cfg);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.scan.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let results: Vec<(ScanCell, Result<ScanRow>)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&cell| (cell, run_cell(cfg, cell)))
            .collect()
    });
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (cell, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(CellFailure {
                cell,
                error: e.to_string(),
            }),
        }
    }
    Ok((rows, failures))
}

/// Runs the scan and writes `scan.csv`, `heatmap_<observable>.csv` and,
/// when cells failed, `scan_failures.csv`.
pub fn cmd_scan(cfg: &ExperimentConfig) -> Result<ScanOutput> {
    let (rows, failures) = run_scan(cfg)?;
    let dir = &cfg.output;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();

    let scan_path = dir.join("scan.csv");
    write_scan_csv(&scan_path, &rows)?;
    files.push(scan_path);

    let mut observables: Vec<ObservableKind> = rows.iter().map(|r| r.cell.observable).collect();
    observables.dedup();
    for obs in observables {
        let p = dir.join(format!("heatmap_{}.csv", obs.as_str()));
        write_heatmap(&p, &rows, obs)?;
        files.push(p);
    }

    let fail_path = dir.join("scan_failures.csv");
    if failures.is_empty() {
        if fail_path.exists() {
            fs::remove_file(&fail_path).map_err(|e| Error::io(&fail_path, e))?;
        }
    } else {
        let mut w = csv::Writer::from_path(&fail_path).map_err(|e| csv_io(&fail_path, e))?;
        w.write_record(["observable", "qubits", "layers", "rep", "error"])
            .map_err(|e| csv_io(&fail_path, e))?;
        for f in &failures {
            w.write_record([
                f.cell.observable.as_str().to_string(),
                f.cell.qubits.to_string(),
                f.cell.layers.to_string(),
                f.cell.rep.to_string(),
                f.error.clone(),
            ])
            .map_err(|e| csv_io(&fail_path, e))?;
        }
        w.flush().map_err(|e| Error::io(&fail_path, e))?;
        files.push(fail_path);
    }
    Ok(ScanOutput {
        rows,
        failures,
        files,
    })
}

pub fn write_scan_csv(path: &Path, rows: &[ScanRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(SCAN_HEADER).map_err(|e| csv_io(path, e))?;
    for r in rows {
        w.write_record(r.record()).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `(n, L) → median ε_M√m` over repetitions for one observable.
pub fn heatmap(rows: &[ScanRow], obs: ObservableKind) -> BTreeMap<(usize, usize), f64> {
    let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.cell.observable == obs) {
        groups
            .entry((r.cell.qubits, r.cell.layers))
            .or_default()
            .push(r.eps_m_sqrt_m());
    }
    groups
        .into_iter()
        .filter_map(|(k, v)| median(&v).map(|m| (k, m)))
        .collect()
}

fn write_heatmap(path: &Path, rows: &[ScanRow], obs: ObservableKind) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(["qubits", "layers", "median_eps_M_sqrt_m"])
        .map_err(|e| csv_io(path, e))?;
    for ((n, l), v) in heatmap(rows, obs) {
        w.write_record([n.to_string(), l.to_string(), v.to_string()])
            .map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_are_sorted_and_unique() {
        let mut cfg = ExperimentConfig::default();
        cfg.scan.qubits = vec![3, 2, 3];
        cfg.scan.layers = vec![2];
        cfg.scan.observables = vec![ObservableKind::Global, ObservableKind::Local];
        cfg.scan.repetitions = 2;
        let cells = scan_cells(&cfg);
        assert_eq!(cells.len(), 8);
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(cells[0].observable, ObservableKind::Local);
    }

    #[test]
    fn seeds_differ_per_coordinate() {
        let base = ScanCell {
            observable: ObservableKind::Local,
            qubits: 4,
            layers: 2,
            rep: 0,
        };
        let mut seen = std::collections::HashSet::new();
        for c in [
            base,
            ScanCell { rep: 1, ..base },
            ScanCell { qubits: 5, ..base },
            ScanCell { layers: 3, ..base },
            ScanCell {
                observable: ObservableKind::Global,
                ..base
            },
        ] {
            assert!(seen.insert(c.seed(9)));
        }
    }
}
