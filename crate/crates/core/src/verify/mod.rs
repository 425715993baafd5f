//! Experiments: reproduction of the reference values, randomized sweeps of
//! the eigenvalue inequalities, fold-pair demonstrations and plots.

mod commands;
mod domains;
pub mod svg;

pub use commands::{
    cmd_ball_eig, cmd_density_eig, cmd_explore_q2, cmd_fem_eig, cmd_fold_demo, cmd_reproduce_counterexample, cmd_verify_cor13, cmd_verify_harmonic,
    cmd_verify_thm12, fold_analysis, BallEigReport, FoldAnalysis, Orthogonality, Q2Row,
};
pub use domains::{random_complement_domain, random_domain, random_radial_density, union_area};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::fem::{SolverOptions, MAX_LEVEL};
use crate::foldmap::{CensusOptions, FoldOptions};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub level: usize,
    /// Lattice size per factor for fold-pair searches.
    pub resolution: usize,
    pub seed: u64,
    pub trials: usize,
    pub out: Option<PathBuf>,
    pub tol: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { n: 2, level: 5, resolution: 32, seed: 0, trials: 10, out: None, tol: Tolerances::default() }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.n) {
            return Err(Error::Domain(format!("dimension {} outside 2..=8", self.n)));
        }
        if self.level == 0 || self.level > MAX_LEVEL {
            return Err(Error::MeshLevel(self.level));
        }
        if !(4..=256).contains(&self.resolution) {
            return Err(Error::Domain(format!("resolution {} outside 4..=256", self.resolution)));
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol.fem_residual, max_iter: self.tol.fem_max_iter, ..Default::default() }
    }

    pub fn fold_options(&self) -> FoldOptions {
        FoldOptions { delta: self.tol.diagonal_margin, tol: self.tol.pair_residual, grid: self.resolution, seed: self.seed, ..Default::default() }
    }

    pub fn census_options(&self) -> CensusOptions {
        CensusOptions {
            grid: self.resolution,
            tol: self.tol.pair_residual,
            dedup: self.tol.census_dedup,
            condition_max: self.tol.census_condition,
            delta: self.tol.diagonal_margin,
            seed: self.seed,
            ..Default::default()
        }
    }
}

/// Which solver produced a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    Radial,
    Fem,
    Quadrature,
    /// A published reference value.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// value <= bound + margin
    AtMost,
    /// value >= bound - margin
    AtLeast,
    /// |value - bound| <= margin
    Within,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    /// Violated by less than one further margin; the caller refines.
    InconclusiveRefine,
    Fail,
}

pub fn judge(value: f64, bound: f64, margin: f64, relation: Relation) -> Verdict {
    let excess = match relation {
        Relation::AtMost => value - bound,
        Relation::AtLeast => bound - value,
        Relation::Within => (value - bound).abs(),
    };
    if !excess.is_finite() {
        Verdict::Fail
    } else if excess <= margin {
        Verdict::Pass
    } else if relation != Relation::Within && excess <= 2.0 * margin {
        Verdict::InconclusiveRefine
    } else {
        Verdict::Fail
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub check: String,
    pub trial: Option<usize>,
    pub description: String,
    pub value: f64,
    pub value_oracle: Oracle,
    pub bound: f64,
    pub bound_oracle: Oracle,
    pub margin: f64,
    pub relation: Relation,
    pub verdict: Verdict,
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl VerificationRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        check: &str,
        description: impl Into<String>,
        value: (f64, Oracle),
        bound: (f64, Oracle),
        margin: f64,
        relation: Relation,
    ) -> Self {
        Self {
            check: check.to_string(),
            trial: None,
            description: description.into(),
            value: value.0,
            value_oracle: value.1,
            bound: bound.0,
            bound_oracle: bound.1,
            margin,
            relation,
            verdict: judge(value.0, bound.0, margin, relation),
            level: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn trial(mut self, t: usize) -> Self {
        self.trial = Some(t);
        self
    }

    pub fn at_level(mut self, l: usize) -> Self {
        self.level = Some(l);
        self
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.extra.insert(key.to_string(), v);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn summary(&self) -> String {
        let sym = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Within => "~=",
        };
        let trial = self.trial.map(|t| format!("#{t} ")).unwrap_or_default();
        format!(
            "[{:?}] {} {}{}: {} {} {} (margin {:.2e})",
            self.verdict,
            self.check,
            trial,
            self.description,
            num(self.value),
            sym,
            num(self.bound),
            self.margin
        )
    }
}

fn num(x: f64) -> String {
    if x == 0.0 || (1e-3..1e6).contains(&x.abs()) {
        format!("{x:.9}")
    } else {
        format!("{x:.6e}")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: ExperimentConfig,
    pub records: Vec<VerificationRecord>,
    pub notes: Vec<String>,
    pub outputs: Vec<PathBuf>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, config: &ExperimentConfig) -> Self {
        Self { command: command.into(), config: config.clone(), records: Vec::new(), notes: Vec::new(), outputs: Vec::new(), passed: true, data: None }
    }

    pub fn push(&mut self, r: VerificationRecord) {
        self.passed &= r.passed();
        self.records.push(r);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn write_records_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "trial", "description", "value", "value_oracle", "bound", "bound_oracle", "margin", "relation", "verdict", "level"])?;
        for r in &self.records {
            let tag = |o: Oracle| serde_json::to_value(o).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            let rel = serde_json::to_value(r.relation).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            w.write_record([
                r.check.clone(),
                r.trial.map(|t| t.to_string()).unwrap_or_default(),
                r.description.clone(),
                format!("{:.12}", r.value),
                tag(r.value_oracle),
                format!("{:.12}", r.bound),
                tag(r.bound_oracle),
                format!("{:.3e}", r.margin),
                rel,
                verdict,
                r.level.map(|l| l.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    fn out_dir(&self) -> Option<&Path> {
        self.config.out.as_deref()
    }

    /// Writes `bytes` under the output directory, if any.
    pub fn write_file(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        if let Some(dir) = self.out_dir().map(Path::to_path_buf) {
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(name);
            std::fs::write(&path, bytes)?;
            self.outputs.push(path);
        }
        Ok(())
    }

    /// Records CSV and the JSON report, named after `stem`.
    pub fn write_standard(&mut self, stem: &str) -> Result<()> {
        if self.out_dir().is_none() {
            return Ok(());
        }
        if !self.records.is_empty() {
            let mut buf = Vec::new();
            self.write_records_csv(&mut buf)?;
            self.write_file(&format!("{stem}.csv"), &buf)?;
        }
        let name = format!("{stem}.json");
        if let Some(dir) = self.out_dir() {
            self.outputs.push(dir.join(&name));
        }
        let json = serde_json::to_vec_pretty(self)?;
        let dir = self.out_dir().map(Path::to_path_buf).unwrap();
        std::fs::write(dir.join(name), json)?;
        Ok(())
    }
}
