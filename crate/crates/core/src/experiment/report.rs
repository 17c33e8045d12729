use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::dataset::{csv_io, write_json};
use super::scan::{ScanCell, ScanRow, SCAN_HEADER};
use crate::error::{Error, Result};
use crate::fit::{
    fit_global_qubit_scaling, fit_local_scaling, median, std_dev, Axis, FitResult, SlicePoint,
};
use crate::quantum::{AnsatzLayout, ObservableKind};

/// Per-cell statistic a fit is run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Statistic {
    #[serde(rename = "LB")]
    LowerMic,
    #[serde(rename = "eps_M_sqrt_m")]
    EpsMSqrtM,
    #[serde(rename = "UB")]
    UpperMic,
    #[serde(rename = "UBs")]
    UpperSic,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::LowerMic,
        Statistic::EpsMSqrtM,
        Statistic::UpperMic,
        Statistic::UpperSic,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Statistic::LowerMic => "LB",
            Statistic::EpsMSqrtM => "eps_M_sqrt_m",
            Statistic::UpperMic => "UB",
            Statistic::UpperSic => "UBs",
        }
    }

    fn of(self, row: &ScanRow) -> Option<f64> {
        match self {
            Statistic::LowerMic => row.lower_mic,
            Statistic::EpsMSqrtM => Some(row.eps_m_sqrt_m()),
            Statistic::UpperMic => row.upper_mic,
            Statistic::UpperSic => Some(row.upper_sic),
        }
    }
}

/// Median and spread of one statistic over the repetitions of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellStatistic {
    pub median: f64,
    pub spread: Option<f64>,
    pub repetitions: usize,
}

/// Aggregated scan: `(observable, n, L) → statistic → median/spread`.
pub type Aggregate = BTreeMap<(ObservableKind, usize, usize), BTreeMap<Statistic, CellStatistic>>;

pub fn aggregate(rows: &[ScanRow]) -> Aggregate {
    let mut groups: BTreeMap<(ObservableKind, usize, usize), Vec<&ScanRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.cell.observable, r.cell.qubits, r.cell.layers))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|(k, rs)| {
            let stats = Statistic::ALL
                .iter()
                .filter_map(|&s| {
                    let v: Vec<f64> = rs.iter().filter_map(|r| s.of(r)).collect();
                    median(&v).map(|med| {
                        (
                            s,
                            CellStatistic {
                                median: med,
                                spread: std_dev(&v),
                                repetitions: v.len(),
                            },
                        )
                    })
                })
                .collect();
            (k, stats)
        })
        .collect()
}

/// The three scaling tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    GlobalQubits,
    LocalQubits,
    LocalLayers,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::GlobalQubits, Table::LocalQubits, Table::LocalLayers];

    pub fn name(self) -> &'static str {
        match self {
            Table::GlobalQubits => "global-qubits",
            Table::LocalQubits => "local-qubits",
            Table::LocalLayers => "local-layers",
        }
    }

    pub fn observable(self) -> ObservableKind {
        match self {
            Table::GlobalQubits => ObservableKind::Global,
            _ => ObservableKind::Local,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Table::LocalLayers => Axis::Layers,
            _ => Axis::Qubits,
        }
    }

    fn fixed_name(self) -> &'static str {
        match self.axis() {
            Axis::Qubits => "layers",
            Axis::Layers => "qubits",
        }
    }

    fn min_points(self) -> usize {
        match self {
            Table::GlobalQubits => 3,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitEntry {
    pub table: Table,
    pub observable: ObservableKind,
    pub axis: Axis,
    /// Value of the axis held fixed (layers for qubit fits and vice versa).
    pub fixed: usize,
    pub statistic: Statistic,
    #[serde(flatten)]
    pub fit: FitResult<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedSlice {
    pub table: Table,
    pub fixed: usize,
    pub statistic: Statistic,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub fits: Vec<FitEntry>,
    pub skipped: Vec<SkippedSlice>,
}

/// Slices of one table: fixed value → points along the fitted axis.
fn slices(agg: &Aggregate, table: Table, stat: Statistic) -> BTreeMap<usize, Vec<SlicePoint<f64>>> {
    let mut out: BTreeMap<usize, Vec<SlicePoint<f64>>> = BTreeMap::new();
    for (&(obs, n, l), stats) in agg {
        if obs != table.observable() {
            continue;
        }
        let Some(cs) = stats.get(&stat) else { continue };
        let (fixed, x) = match table.axis() {
            Axis::Qubits => (l, n),
            Axis::Layers => (n, l),
        };
        out.entry(fixed).or_default().push(SlicePoint {
            x: x as f64,
            statistic: cs.median,
            spread: cs.spread,
        });
    }
    out
}

/// Fits every table slice that has enough points.
pub fn fit_scan(rows: &[ScanRow], weighted: bool) -> Result<FitReport> {
    let agg = aggregate(rows);
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    let mut tried = Vec::new();
    for table in Table::ALL {
        if !agg.keys().any(|k| k.0 == table.observable()) {
            continue;
        }
        tried.push(table);
        for stat in Statistic::ALL {
            for (fixed, points) in slices(&agg, table, stat) {
                let entry = |fit: FitResult<f64>| FitEntry {
                    table,
                    observable: table.observable(),
                    axis: table.axis(),
                    fixed,
                    statistic: stat,
                    fit,
                };
                if points.len() < table.min_points() {
                    skipped.push(SkippedSlice {
                        table,
                        fixed,
                        statistic: stat,
                        reason: format!(
                            "{} axis has {} values at {} = {fixed}, need >= {}",
                            axis_name(table.axis()),
                            points.len(),
                            table.fixed_name(),
                            table.min_points()
                        ),
                    });
                    continue;
                }
                let result = match table {
                    Table::GlobalQubits => {
                        fit_global_qubit_scaling(&points, weighted).map(|f| vec![entry(f)])
                    }
                    _ => fit_local_scaling(&points, table.axis(), weighted)
                        .map(|lf| vec![entry(lf.quadratic), entry(lf.linear)]),
                };
                match result {
                    Ok(es) => fits.extend(es),
                    Err(e) => skipped.push(SkippedSlice {
                        table,
                        fixed,
                        statistic: stat,
                        reason: e.to_string(),
                    }),
                }
            }
        }
    }
    if fits.is_empty() {
        let axes: Vec<String> = tried
            .iter()
            .map(|t| {
                format!(
                    "{} (needs >= {} {} values per {})",
                    t.name(),
                    t.min_points(),
                    axis_name(t.axis()),
                    t.fixed_name()
                )
            })
            .collect();
        return Err(Error::invalid(if axes.is_empty() {
            "insufficient data: scan has no rows".to_string()
        } else {
            format!("insufficient data along every fit axis: {}", axes.join("; "))
        }));
    }
    Ok(FitReport { fits, skipped })
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Qubits => "qubit",
        Axis::Layers => "layer",
    }
}

/// Reads a scan CSV. The trailing `m` column is optional; without it `m`
/// is derived from the layout.
pub fn read_scan_csv(path: &Path, layout: AnsatzLayout) -> Result<Vec<ScanRow>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_scan_csv(file, layout)
}

pub fn parse_scan_csv<R: std::io::Read>(input: R, layout: AnsatzLayout) -> Result<Vec<ScanRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();
    let perr = |line: u64, message: String| Error::Parse { line, message };
    let header = match records.next() {
        Some(r) => r.map_err(|e| perr(1, e.to_string()))?,
        None => return Err(perr(1, "empty scan file".into())),
    };
    let cols: Vec<&str> = header.iter().collect();
    let has_m = cols == SCAN_HEADER;
    if !has_m && cols != SCAN_HEADER[..10] {
        return Err(perr(1, format!("expected header `{}`", SCAN_HEADER[..10].join(","))));
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| perr(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != cols.len() {
            return Err(perr(
                line,
                format!("expected {} fields, got {}", cols.len(), rec.len()),
            ));
        }
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| perr(line, format!("cannot parse {} from `{}`", cols[i], &rec[i])))
        };
        let int = |i: usize| -> Result<usize> {
            rec[i]
                .parse::<usize>()
                .map_err(|_| perr(line, format!("cannot parse {} from `{}`", cols[i], &rec[i])))
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let observable: ObservableKind = rec[0]
            .parse()
            .map_err(|e: Error| perr(line, e.to_string()))?;
        let qubits = int(1)?;
        let layers = int(2)?;
        let m = if has_m {
            int(10)?
        } else {
            qubits * layers * layout.sublayers_per_layer()
        };
        rows.push(ScanRow {
            cell: ScanCell {
                observable,
                qubits,
                layers,
                rep: int(3)?,
            },
            m,
            eps_m: num(4)?,
            eps_s: num(5)?,
            h_m: num(6)?,
            lower_mic: opt(7)?,
            upper_mic: opt(8)?,
            upper_sic: num(9)?,
        });
    }
    Ok(rows)
}

/// Writes one CSV per table: the fixed axis, then
/// `<coefficient>_<statistic>` columns and the R² of each fit.
pub fn write_tables(dir: &Path, report: &FitReport) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for table in Table::ALL {
        let entries: Vec<&FitEntry> = report.fits.iter().filter(|e| e.table == table).collect();
        if entries.is_empty() {
            continue;
        }
        let coef_names: &[&str] = match table {
            Table::GlobalQubits => &["alpha", "beta"],
            _ => &["alpha", "beta", "gamma"],
        };
        let mut header = vec![table.fixed_name().to_string()];
        for c in coef_names {
            for s in Statistic::ALL {
                header.push(format!("{c}_{}", s.label()));
            }
        }
        for s in Statistic::ALL {
            header.push(format!("r2_{}", s.label()));
        }
        if table != Table::GlobalQubits {
            for s in Statistic::ALL {
                header.push(format!("r2_linear_{}", s.label()));
            }
        }
        let degree = coef_names.len() - 1;
        let mut by_fixed: BTreeMap<usize, Vec<&FitEntry>> = BTreeMap::new();
        for e in entries {
            by_fixed.entry(e.fixed).or_default().push(e);
        }
        let path = dir.join(format!("table_{}.csv", table.name().replace('-', "_")));
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_io(&path, e))?;
        w.write_record(&header).map_err(|e| csv_io(&path, e))?;
        for (fixed, es) in by_fixed {
            let find = |s: Statistic, deg: usize| {
                es.iter()
                    .find(|e| e.statistic == s && e.fit.model.degree() == deg)
                    .map(|e| &e.fit)
            };
            let mut row = vec![fixed.to_string()];
            for ci in 0..coef_names.len() {
                for s in Statistic::ALL {
                    row.push(find(s, degree).map_or_else(String::new, |f| {
                        f.coefficients[ci].to_string()
                    }));
                }
            }
            for s in Statistic::ALL {
                row.push(find(s, degree).map_or_else(String::new, |f| f.r_squared.to_string()));
            }
            if table != Table::GlobalQubits {
                for s in Statistic::ALL {
                    row.push(find(s, 1).map_or_else(String::new, |f| f.r_squared.to_string()));
                }
            }
            w.write_record(&row).map_err(|e| csv_io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    Ok(files)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutput {
    pub report: FitReport,
    pub files: Vec<PathBuf>,
}

/// Fits a scan CSV and writes `fit_report.json` plus the table CSVs.
pub fn cmd_fit(scan_csv: &Path, layout: AnsatzLayout, weighted: bool, out: &Path) -> Result<FitOutput> {
    let rows = read_scan_csv(scan_csv, layout)?;
    let report = fit_scan(&rows, weighted)?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let json = out.join("fit_report.json");
    write_json(&json, &report.fits)?;
    let mut files = vec![json];
    files.extend(write_tables(out, &report)?);
    Ok(FitOutput { report, files })
}
