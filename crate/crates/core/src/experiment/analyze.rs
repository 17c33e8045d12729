use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::IcSettings;
use super::dataset::{read_manifest, read_walk_csv, write_json, WalkManifest};
use crate::bounds::{gradient_bounds, GradientBounds};
use crate::error::{Error, Result};
use crate::fit::{median, std_dev};
use crate::ic::{extract_features, ic_curve, IcCurve, IcFeatures};
use crate::landscape::WalkRecord;

/// Curve, features and bounds of a single walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkAnalysis {
    pub curve: IcCurve<f64>,
    pub features: IcFeatures<f64>,
    pub bounds: GradientBounds<f64>,
}

pub fn analyze_walk(walk: &WalkRecord<f64>, m: usize, ic: &IcSettings) -> Result<WalkAnalysis> {
    if walk.num_steps() < 2 {
        return Err(Error::invalid("analysis needs S >= 2"));
    }
    let curve = ic_curve(walk, &ic.grid())?;
    let features = extract_features(&curve, ic.eta, m)?;
    let bounds = gradient_bounds(&features)?;
    Ok(WalkAnalysis {
        curve,
        features,
        bounds,
    })
}

/// Median and sample standard deviation of a statistic across repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub median: Option<f64>,
    pub std: Option<f64>,
    pub count: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        Self {
            median: median(values),
            std: std_dev(values),
            count: values.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepetitionReport {
    pub source: PathBuf,
    pub rep: usize,
    #[serde(rename = "S")]
    pub s: usize,
    pub features: IcFeatures<f64>,
    pub bounds: GradientBounds<f64>,
    pub mic_applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisSummary {
    #[serde(rename = "H_M")]
    pub h_max: Summary,
    #[serde(rename = "eps_M")]
    pub eps_max: Summary,
    #[serde(rename = "eps_S")]
    pub eps_sensitivity: Summary,
    #[serde(rename = "eps_M_sqrt_m")]
    pub eps_max_sqrt_m: Summary,
    pub lower_mic: Summary,
    pub upper_mic: Summary,
    pub upper_sic: Summary,
    /// Repetitions where the MIC hypothesis `H_M > 2h(1/2)` holds.
    pub mic_applicable: usize,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub m: usize,
    pub cost_id: String,
    pub eta: f64,
    pub repetitions: Vec<RepetitionReport>,
    pub summary: AnalysisSummary,
}

/// Walk CSV files in a dataset: a single file, or every file of a directory
/// that has a JSON sidecar.
pub fn dataset_files(path: &Path) -> Result<Vec<(PathBuf, PathBuf)>> {
    if path.is_dir() {
        let mut files = Vec::new();
        for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
            let p = entry.map_err(|e| Error::io(path, e))?.path();
            if p.extension().is_some_and(|e| e == "csv") {
                let manifest = p.with_extension("json");
                if manifest.is_file() {
                    files.push((p, manifest));
                }
            }
        }
        files.sort();
        if files.is_empty() {
            return Err(Error::io(
                path,
                std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "no walk CSV with a JSON manifest",
                ),
            ));
        }
        Ok(files)
    } else {
        Ok(vec![(path.to_path_buf(), path.with_extension("json"))])
    }
}

/// Analyzes every repetition of a dataset. When `out` is given, writes
/// `analysis.json` and one `ic_rep{r}.csv` curve per repetition.
pub fn cmd_analyze(dataset: &Path, ic: &IcSettings, out: Option<&Path>) -> Result<AnalysisReport> {
    let mut manifest: Option<WalkManifest> = None;
    let mut reps = Vec::new();
    let mut curves = Vec::new();
    for (csv_path, manifest_path) in dataset_files(dataset)? {
        let man = read_manifest(&manifest_path)?;
        if let Some(prev) = &manifest {
            if prev.m != man.m || prev.cost_id != man.cost_id {
                return Err(Error::invalid(format!(
                    "{} describes {} (m = {}), earlier files describe {} (m = {})",
                    manifest_path.display(),
                    man.cost_id,
                    man.m,
                    prev.cost_id,
                    prev.m
                )));
            }
        }
        for trace in read_walk_csv(&csv_path)? {
            let walk = trace.to_record()?;
            let a = analyze_walk(&walk, man.m, ic)?;
            reps.push(RepetitionReport {
                source: csv_path.clone(),
                rep: trace.rep,
                s: walk.num_steps(),
                features: a.features,
                bounds: a.bounds,
                mic_applicable: a.bounds.applicable_mic,
            });
            curves.push((trace.rep, a.curve));
        }
        manifest = Some(man);
    }
    let manifest = manifest.expect("dataset_files returns at least one file");

    let collect = |f: &dyn Fn(&RepetitionReport) -> Option<f64>| -> Summary {
        Summary::of(&reps.iter().filter_map(f).collect::<Vec<_>>())
    };
    let summary = AnalysisSummary {
        h_max: collect(&|r| Some(r.features.h_max)),
        eps_max: collect(&|r| Some(r.features.eps_max)),
        eps_sensitivity: collect(&|r| Some(r.features.eps_sensitivity)),
        eps_max_sqrt_m: collect(&|r| Some(r.features.eps_max_sqrt_m)),
        lower_mic: collect(&|r| r.bounds.lower_mic),
        upper_mic: collect(&|r| r.bounds.upper_mic),
        upper_sic: collect(&|r| Some(r.bounds.upper_sic)),
        mic_applicable: reps.iter().filter(|r| r.mic_applicable).count(),
        repetitions: reps.len(),
    };
    let report = AnalysisReport {
        m: manifest.m,
        cost_id: manifest.cost_id,
        eta: ic.eta,
        repetitions: reps,
        summary,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_json(&dir.join("analysis.json"), &report)?;
        for (rep, curve) in &curves {
            let p = dir.join(format!("ic_rep{rep}.csv"));
            fs::write(&p, curve.to_csv()).map_err(|e| Error::io(&p, e))?;
        }
    }
    Ok(report)
}
