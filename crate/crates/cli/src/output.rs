//! CSV and JSON emitters.
//!
//! Every CSV starts with one comment line
//!
//! ```text
//! # format=<schema> version=1 experiment=<name> config_sha256=<hex> seed=<u64>
//! ```
//!
//! followed by a header row. Floats use 17 significant digits so every
//! value round-trips exactly, and rows keep the order they were produced
//! in, so identical configs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::checks::Report;
use crate::config::{Experiment, RunConfig};
use crate::error::CliResult;

pub const OUTPUT_VERSION: u32 = 1;

/// Trajectory pair: `t, value_a, value_b, steady`.
pub const TRAJECTORY_SCHEMA: &str = "trajectory-pair";
/// Heatmap cell: `beta, t, diff_numeric, diff_analytic, abs_discrepancy`.
pub const HEATMAP_SCHEMA: &str = "coherence-heatmap";
/// Predicate scan: `g, beta, predicate, observed_mpemba, agree`.
pub const THEOREM_SCHEMA: &str = "theorem-scan";
/// `index, re, im`.
pub const EIGENVALUE_SCHEMA: &str = "eigenvalues";
/// `index, population`.
pub const STEADY_SCHEMA: &str = "steady-diagonal";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Bool(_) => None,
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// One CSV file worth of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File name without directory, e.g. `trace_rr_setup1.csv`.
    pub file: String,
    pub schema: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(file: impl Into<String>, schema: &'static str, header: Vec<&'static str>) -> Self {
        Table {
            file: file.into(),
            schema,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn write(&self, dir: &Path, meta: &RunMeta) -> CliResult<PathBuf> {
        let path = dir.join(&self.file);
        let mut file = fs::File::create(&path)?;
        writeln!(
            file,
            "# format={} version={OUTPUT_VERSION} experiment={} config_sha256={} seed={}",
            self.schema, meta.experiment, meta.config_sha256, meta.seed
        )?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(path)
    }
}

/// Provenance echoed into every output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunMeta {
    pub experiment: &'static str,
    pub seed: u64,
    pub config_sha256: String,
}

impl RunMeta {
    pub fn of(cfg: &RunConfig) -> Self {
        RunMeta {
            experiment: cfg.experiment.experiment().name(),
            seed: cfg.seed,
            config_sha256: cfg.hash(),
        }
    }
}

/// Contents of `<stem>_verdict.json`.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictDocument<'a> {
    pub format: &'static str,
    pub version: u32,
    #[serde(flatten)]
    pub meta: &'a RunMeta,
    pub passed: bool,
    pub verdict: &'a serde_json::Value,
    #[serde(flatten)]
    pub report: &'a Report,
    pub outputs: Vec<String>,
}

/// Everything one run produces.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub experiment: Experiment,
    pub tables: Vec<Table>,
    pub verdict: serde_json::Value,
    /// Extra JSON documents by file name.
    pub documents: Vec<(String, serde_json::Value)>,
    pub report: Report,
}

impl Artifacts {
    pub fn table(&self, file: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.file == file)
    }

    /// Writes every table and document plus the verdict JSON into `dir`;
    /// returns the written paths in a fixed order.
    pub fn write(&self, dir: &Path, cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let meta = RunMeta::of(cfg);
        let mut written = Vec::new();
        for t in &self.tables {
            written.push(t.write(dir, &meta)?);
        }
        for (name, doc) in &self.documents {
            let path = dir.join(name);
            fs::write(&path, to_pretty(doc) + "\n")?;
            written.push(path);
        }
        let config_path = dir.join(format!("{}_config.json", self.experiment.stem()));
        fs::write(&config_path, cfg.to_json() + "\n")?;
        written.push(config_path);

        let verdict_path = dir.join(format!("{}_verdict.json", self.experiment.stem()));
        let mut outputs: Vec<String> = written
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        outputs.push(
            verdict_path
                .file_name()
                .unwrap()
                .to_string_lossy()
                .into_owned(),
        );
        let doc = VerdictDocument {
            format: "mpemba-verdict",
            version: OUTPUT_VERSION,
            meta: &meta,
            passed: self.report.passed(),
            verdict: &self.verdict,
            report: &self.report,
            outputs,
        };
        fs::write(&verdict_path, to_pretty(&doc) + "\n")?;
        written.push(verdict_path);
        Ok(written)
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}
