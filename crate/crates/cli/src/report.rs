//! Line-oriented text and JSON renderings of a run.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qsplit_core::fieldnum::SweepRow;
use qsplit_core::scenarios::{BranchInfo, Observation, Quantity, ScenarioReport};
use serde::Serialize;

use crate::error::CliError;
use crate::params::Params;

#[derive(Debug, Serialize)]
pub struct Document<'a> {
    pub scenario: &'a str,
    pub seed: u64,
    pub tol: f64,
    pub params: &'a Params,
    pub passed: bool,
    pub quantities: &'a [Quantity],
    pub observations: &'a [Observation],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_data: Option<&'a [BranchInfo]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<&'a [SweepRow]>,
    pub notes: &'a [String],
}

impl<'a> Document<'a> {
    /// `report` must already be sorted.
    pub fn new(report: &'a ScenarioReport, params: &'a Params, seed: u64, tol: f64, notes: &'a [String]) -> Self {
        Document {
            scenario: &report.name,
            seed,
            tol,
            params,
            passed: report.passed(),
            quantities: &report.quantities,
            observations: &report.observations,
            branch_data: report.branch_data.as_deref(),
            rows: None,
            notes,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let pass_count = self.quantities.iter().filter(|q| q.pass).count();
        let _ = writeln!(s, "scenario {}", self.scenario);
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "tol {:e}", self.tol);
        if let Ok(serde_json::Value::Object(map)) = serde_json::to_value(self.params) {
            for (k, v) in map {
                let _ = writeln!(s, "param {k} {v}");
            }
        }
        let _ = writeln!(
            s,
            "status {} {pass_count}/{}",
            if self.passed { "pass" } else { "fail" },
            self.quantities.len()
        );
        for q in self.quantities {
            let _ = writeln!(
                s,
                "quantity {} predicted={:e} expected={:e} tolerance={:e} pass={}",
                q.label, q.predicted, q.expected, q.tolerance, q.pass
            );
        }
        for o in self.observations {
            let _ = writeln!(s, "observation {} value={:e}", o.label, o.value);
        }
        for b in self.branch_data.unwrap_or_default() {
            let _ = writeln!(
                s,
                "branch {} weight={:e} schmidt_rank={} product={}",
                b.label, b.weight, b.schmidt_rank, b.product
            );
        }
        for r in self.rows.unwrap_or_default() {
            let _ = writeln!(
                s,
                "row kind={} t={:e} r={:e} m={:e} s2={:e} antisym_abs={:e} sym_abs={:e}",
                r.kind, r.t, r.r, r.m, r.s2, r.antisym_abs, r.sym_abs
            );
        }
        for n in self.notes {
            let _ = writeln!(s, "note {n}");
        }
        s
    }

    /// Writes `<name>.report.txt` and `<name>.report.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<[PathBuf; 2], CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        let txt = dir.join(format!("{}.report.txt", self.scenario));
        let json = dir.join(format!("{}.report.json", self.scenario));
        let body = serde_json::to_string_pretty(self).expect("report serializes") + "\n";
        for (path, content) in [(&txt, self.text()), (&json, body)] {
            std::fs::write(path, content).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok([txt, json])
    }
}
