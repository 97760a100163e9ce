//! Experiment configuration, runners and artifact output.
//!
//! One experiment per TOML file:
//!
//! ```toml
//! experiment = "delta-curve"
//!
//! [system]
//! dims = [2, 2, 2]
//!
//! [marked]
//! kets = ["000"]
//!
//! [range]
//! end_k_opt = 4.0
//! samples_per_iteration = 8
//! ```

mod artifact;
mod runners;

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gme::{GmeOptions, Separability};
use crate::grover::{k_opt, MarkedSet};
use crate::invariants::Format;
use crate::tensor::QuditSystem;

pub use artifact::{line_chart, CurveArtifact, Metadata, TableArtifact, TOOL};
pub use runners::{
    classify_curve, peak_scan, run_delta_curve, run_gme_experiment, run_nrd, run_tables, simulate,
    symmetric_marked_set, TableCheck, TablesReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Classify,
    GmeCurve,
    DeltaCurve,
    Nrd,
    Tables,
    PeakScan,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Classify => "classify",
            ExperimentKind::GmeCurve => "gme-curve",
            ExperimentKind::DeltaCurve => "delta-curve",
            ExperimentKind::Nrd => "nrd",
            ExperimentKind::Tables => "tables",
            ExperimentKind::PeakScan => "peak-scan",
        }
    }

    fn uses_gme(self) -> bool {
        matches!(self, ExperimentKind::GmeCurve | ExperimentKind::PeakScan)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub dims: Vec<usize>,
}

/// Marked elements as ket strings (`"|012⟩"`, `"012"`) or digit tuples.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kets: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub digits: Vec<Vec<usize>>,
}

/// Iteration range. `end` wins over `end_k_opt`, which is a multiple of
/// `k_opt`; both are inclusive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSection {
    #[serde(default)]
    pub start: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_k_opt: Option<f64>,
    /// Samples per unit of `k` for curves of the closed form at real `k`.
    #[serde(default = "one")]
    pub samples_per_iteration: u32,
}

fn one() -> u32 {
    1
}

impl Default for RangeSection {
    fn default() -> Self {
        Self { start: 0, end: None, end_k_opt: None, samples_per_iteration: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_sweeps")]
    pub max_sweeps: usize,
}

fn default_restarts() -> usize {
    GmeOptions::default().restarts
}

fn default_tol() -> f64 {
    GmeOptions::default().tol
}

fn default_sweeps() -> usize {
    GmeOptions::default().max_sweeps
}

impl Default for OptimizerSection {
    fn default() -> Self {
        Self { restarts: default_restarts(), tol: default_tol(), max_sweeps: default_sweeps() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmeSection {
    pub q: Separability,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NrdSection {
    pub n_max: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablesSection {
    pub formats: Vec<String>,
}

/// Peak scan over `n` for the permutation-symmetric marked set
/// `{|l…l⟩ : l ∈ levels}` on `n` sites of dimension `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeakScanSection {
    pub d: usize,
    pub n_values: Vec<usize>,
    pub levels: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "csv+svg")]
    CsvSvg,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "csv+svg" => Ok(OutputFormat::CsvSvg),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// File stem; defaults to the experiment name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<MarkedSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<RangeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gme: Option<GmeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nrd: Option<NrdSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<TablesSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_scan: Option<PeakScanSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

impl ExperimentConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg = Self::parse_unvalidated(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses without [`validate`](Self::validate), for callers that apply
    /// overrides first.
    pub fn parse_unvalidated(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// A bare config of the given kind, to be filled in by the caller.
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            seed: None,
            system: None,
            marked: None,
            range: None,
            optimizer: None,
            gme: None,
            nrd: None,
            tables: None,
            peak_scan: None,
            output: None,
        }
    }

    pub fn with_marked(mut self, dims: &[usize], kets: &[&str]) -> Self {
        self.system = Some(SystemSection { dims: dims.to_vec() });
        self.marked = Some(MarkedSection { kets: kets.iter().map(|k| k.to_string()).collect(), digits: vec![] });
        self
    }

    pub fn with_range(mut self, range: RangeSection) -> Self {
        self.range = Some(range);
        self
    }

    /// Canonical TOML text; the config hash is taken over this.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn metadata(&self) -> Metadata {
        Metadata {
            tool_version: TOOL.to_string(),
            experiment: self.experiment.name().to_string(),
            config_hash: self.hash(),
            seed: self.seed,
            extra: Vec::new(),
            config: self.canonical(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let need = |present: bool, what: &str| {
            if present {
                Ok(())
            } else {
                Err(Error::Config(format!("{} needs a [{what}] section", self.experiment)))
            }
        };
        if let Some(r) = &self.range {
            if r.samples_per_iteration == 0 {
                return Err(Error::Config("samples_per_iteration must be ≥ 1".into()));
            }
            if let Some(end) = r.end {
                if end < r.start {
                    return Err(Error::Config(format!("range end {end} < start {}", r.start)));
                }
            }
            if let Some(m) = r.end_k_opt {
                if !(m.is_finite() && m >= 0.0) {
                    return Err(Error::Config(format!("end_k_opt must be a nonnegative number, got {m}")));
                }
            }
        }
        if self.experiment.uses_gme() && self.seed.is_none() {
            return Err(Error::Config(format!("{} needs a seed", self.experiment)));
        }
        if let Some(o) = &self.optimizer {
            if o.restarts == 0 || !(o.tol > 0.0) {
                return Err(Error::Config("optimizer needs restarts ≥ 1 and tol > 0".into()));
            }
        }
        match self.experiment {
            ExperimentKind::Simulate | ExperimentKind::Classify | ExperimentKind::DeltaCurve => {
                self.marked_set()?;
            }
            ExperimentKind::GmeCurve => {
                self.marked_set()?;
                need(self.gme.is_some(), "gme")?;
            }
            ExperimentKind::Nrd => {
                need(self.nrd.is_some(), "nrd")?;
                let n = self.nrd.as_ref().map_or(0, |s| s.n_max);
                if !(1..=62).contains(&n) {
                    return Err(Error::Config(format!("n_max must be in 1..=62, got {n}")));
                }
            }
            ExperimentKind::Tables => {
                self.formats()?;
            }
            ExperimentKind::PeakScan => {
                need(self.peak_scan.is_some(), "peak_scan")?;
                let p = self.peak_scan.as_ref().expect("checked");
                if p.n_values.is_empty() || p.levels.is_empty() {
                    return Err(Error::Config("peak_scan needs n_values and levels".into()));
                }
                for &n in &p.n_values {
                    symmetric_marked_set(p.d, n, &p.levels).map_err(|e| Error::Config(e.to_string()))?;
                }
            }
        }
        Ok(())
    }

    /// The configured marked set, checked against the system dims.
    pub fn marked_set(&self) -> Result<MarkedSet> {
        let sys = self.system.as_ref().ok_or_else(|| Error::Config("missing [system] section".into()))?;
        let system = QuditSystem::new(sys.dims.clone()).map_err(|e| Error::Config(e.to_string()))?;
        let m = self.marked.as_ref().ok_or_else(|| Error::Config("missing [marked] section".into()))?;
        let mut elements = Vec::new();
        for k in &m.kets {
            elements.push(system.parse_ket(k).map_err(|e| Error::Config(e.to_string()))?);
        }
        for d in &m.digits {
            elements.push(system.encode(d).map_err(|e| Error::Config(e.to_string()))?);
        }
        MarkedSet::new(system, elements).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn formats(&self) -> Result<Vec<Format>> {
        match &self.tables {
            None => Ok(Format::all().to_vec()),
            Some(t) if t.formats.is_empty() => Err(Error::Config("empty format list".into())),
            Some(t) => t.formats.iter().map(|f| f.parse()).collect(),
        }
    }

    pub fn gme_options(&self) -> GmeOptions {
        let o = self.optimizer.clone().unwrap_or_default();
        GmeOptions { restarts: o.restarts, tol: o.tol, max_sweeps: o.max_sweeps, seed: self.seed.unwrap_or(0) }
    }

    /// Integer iterations `start..=end` for `marked`.
    pub fn k_values(&self, marked: &MarkedSet) -> Vec<u64> {
        let (start, end) = self.k_bounds(marked);
        (start..=end).collect()
    }

    /// Real iteration parameters with `samples_per_iteration` steps per unit.
    pub fn t_values(&self, marked: &MarkedSet) -> Vec<f64> {
        let (start, end) = self.k_bounds(marked);
        let s = self.range.as_ref().map_or(1, |r| r.samples_per_iteration) as u64;
        (start * s..=end * s).map(|i| i as f64 / s as f64).collect()
    }

    fn k_bounds(&self, marked: &MarkedSet) -> (u64, u64) {
        let r = self.range.clone().unwrap_or_default();
        let end = r.end.unwrap_or_else(|| (r.end_k_opt.unwrap_or(1.0) * k_opt(marked) as f64).round() as u64);
        (r.start, end.max(r.start))
    }

    pub fn output(&self) -> OutputSection {
        self.output.clone().unwrap_or_default()
    }

    pub fn stem(&self) -> String {
        self.output().name.unwrap_or_else(|| self.experiment.name().replace('-', "_"))
    }
}

/// A file produced by a run.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub files: Vec<OutputFile>,
    /// Failing golden rows (only `tables` produces them).
    pub golden_failures: usize,
    pub summary: String,
}

impl RunOutput {
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.files
            .iter()
            .map(|f| {
                let p = dir.join(&f.name);
                std::fs::write(&p, &f.contents)?;
                Ok(p)
            })
            .collect()
    }
}

/// Runs the configured experiment and renders its artifacts.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let stem = cfg.stem();
    let svg = cfg.output().format == OutputFormat::CsvSvg;
    let mut files = Vec::new();
    let mut golden_failures = 0;
    let add_curve = |files: &mut Vec<OutputFile>, name: &str, c: &CurveArtifact, title: &str| {
        files.push(OutputFile { name: format!("{name}.csv"), contents: c.to_csv() });
        if svg {
            files.push(OutputFile { name: format!("{name}.svg"), contents: c.to_svg(title) });
        }
    };
    let summary = match cfg.experiment {
        ExperimentKind::DeltaCurve => {
            let c = run_delta_curve(cfg)?;
            let title = format!("|Δ(ψ_k)| for S = {}", cfg.marked_set()?.label());
            add_curve(&mut files, &stem, &c, &title);
            format!("{} samples", c.points.len())
        }
        ExperimentKind::GmeCurve => {
            let (c, peak) = run_gme_experiment(cfg)?;
            let title = format!("E_{}(ψ_k) for S = {}", c.metadata.get("q").unwrap_or("n"), cfg.marked_set()?.label());
            add_curve(&mut files, &stem, &c, &title);
            format!("k* = {}, E_max = {}, predicted k = {}", peak.k_star, peak.e_max, peak.predicted_k)
        }
        ExperimentKind::Nrd => {
            let c = run_nrd(cfg)?;
            add_curve(&mut files, &stem, &c, "Normalized relative dimension of σ(X)");
            format!("{} points", c.points.len())
        }
        ExperimentKind::Simulate => table_file(&mut files, &stem, simulate(cfg)?),
        ExperimentKind::Classify => table_file(&mut files, &stem, classify_curve(cfg)?),
        ExperimentKind::PeakScan => table_file(&mut files, &stem, peak_scan(cfg)?),
        ExperimentKind::Tables => {
            let mut lines = Vec::new();
            for format in cfg.formats()? {
                let report = run_tables(format)?;
                golden_failures += report.failed();
                lines.push(format!("{format}: {}/{} PASS", report.passed(), report.checks.len()));
                let t = report.to_artifact(cfg.metadata());
                files.push(OutputFile { name: format!("{stem}_{}.csv", format.to_string().replace('x', "")), contents: t.to_csv() });
            }
            lines.join("; ")
        }
    };
    Ok(RunOutput { files, golden_failures, summary })
}

fn table_file(files: &mut Vec<OutputFile>, stem: &str, t: TableArtifact) -> String {
    let n = t.rows.len();
    files.push(OutputFile { name: format!("{stem}.csv"), contents: t.to_csv() });
    format!("{n} rows")
}
