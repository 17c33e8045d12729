//! Experiment orchestration behind the command-line tool: configuration,
//! walk datasets, analysis, `(qubits, layers)` scans, pre-factor fits and
//! the validation suites.

mod analyze;
mod config;
mod dataset;
mod report;
mod scan;
mod validate;

pub use analyze::{
    analyze_walk, cmd_analyze, dataset_files, AnalysisReport, AnalysisSummary, RepetitionReport,
    Summary, WalkAnalysis,
};
pub use config::{
    ExperimentConfig, FitSettings, IcSettings, LandscapeConfig, ScanSettings, StartName,
    StartSpec, WalkMode, WalkSettings,
};
pub use dataset::{
    cmd_walk, parse_walk_csv, read_manifest, read_walk_csv, repetition_seed, run_walk,
    walk_paths, write_json, write_theta_csv, write_walk_csv, WalkManifest, WalkOutput, WalkTrace,
    WALK_HEADER,
};
pub use report::{
    aggregate, cmd_fit, fit_scan, parse_scan_csv, read_scan_csv, write_tables, Aggregate,
    CellStatistic, FitEntry, FitOutput, FitReport, SkippedSlice, Statistic, Table,
};
pub use scan::{
    cmd_scan, heatmap, run_cell, run_scan, scan_cells, write_scan_csv, CellFailure, ScanCell,
    ScanOutput, ScanRow, SCAN_HEADER,
};
pub use validate::{
    adaptive_simpson, beta_by_quadrature, cmd_validate, containment_rates, gaussian_gap,
    ks_distance, linear_slope_squares, ValidationCheck, ValidationReport,
};
