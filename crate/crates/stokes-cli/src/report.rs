//! Machine-readable outputs: `report.json` and `tables.csv`.

use std::path::Path;

use anyhow::Context;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use stokes::formal_model::{CaseTag, Parameters};
use stokes::stokes_core::StokesData;
use stokes::verify::DirectionCheck;

use crate::config::{Task, Tolerances};

/// One comparison of an expected value with a computed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: C,
    pub measured: C,
    /// `None` when the measurement itself failed.
    pub abs_err: Option<f64>,
    /// `None` when the expected value is zero or the measurement failed.
    pub rel_err: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn compare(name: String, expected: C, measured: C, pass: impl FnOnce(f64, Option<f64>) -> bool) -> Self {
        let abs_err = (measured - expected).norm();
        let rel_err = (expected.norm() > 0.0).then(|| abs_err / expected.norm());
        Check { pass: pass(abs_err, rel_err), name, expected, measured, abs_err: Some(abs_err), rel_err, note: None }
    }

    pub fn failed(name: String, expected: C, note: String) -> Self {
        Check {
            name,
            expected,
            measured: C::new(0.0, 0.0),
            abs_err: None,
            rel_err: None,
            pass: false,
            note: Some(note),
        }
    }
}

/// Values of the analytic factors `H_12`, `H_23`, `H_13` at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRecord {
    pub theta: f64,
    pub x: C,
    pub h: Option<[C; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub params: Parameters,
    pub tolerances: Tolerances,
    pub tasks: Vec<Task>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub case: Option<CaseTag>,
    pub stokes: Option<StokesData>,
    pub jumps: Vec<DirectionCheck>,
    pub sums: Vec<SumRecord>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub scenarios: Vec<ScenarioReport>,
}

impl Report {
    pub fn write(&self, out_dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(out_dir.join("report.json"), json + "\n").context("writing report.json")?;
        let mut rows: Vec<&Check> = self.scenarios.iter().flat_map(|s| &s.checks).collect();
        rows.sort_by(|a, b| a.name.cmp(&b.name));
        let mut w = csv::Writer::from_path(out_dir.join("tables.csv")).context("creating tables.csv")?;
        w.write_record(["name", "expected", "measured", "abs_err", "rel_err", "pass"])?;
        for r in rows {
            w.write_record([
                r.name.clone(),
                complex_cell(r.expected),
                if r.abs_err.is_some() { complex_cell(r.measured) } else { String::new() },
                r.abs_err.map(real_cell).unwrap_or_default(),
                r.rel_err.map(real_cell).unwrap_or_default(),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// 17 significant digits.
pub fn real_cell(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn complex_cell(z: C) -> String {
    let im = if z.im.is_sign_negative() { format!("-{:.16e}", -z.im) } else { format!("+{:.16e}", z.im) };
    format!("{:.16e}{im}i", z.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_carry_seventeen_digits() {
        assert_eq!(real_cell(0.1), "1.0000000000000001e-1");
        assert_eq!(complex_cell(C::new(1.0, -2.5)), "1.0000000000000000e0-2.5000000000000000e0i");
        let back: f64 = real_cell(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn relative_error_is_omitted_for_zero_expectation() {
        let c = Check::compare("z".into(), C::new(0.0, 0.0), C::new(1e-12, 0.0), |a, _| a < 1e-9);
        assert!(c.pass && c.rel_err.is_none());
    }
}
