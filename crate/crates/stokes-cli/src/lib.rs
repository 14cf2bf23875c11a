//! Batch front end for the `stokes` library.

pub mod config;
pub mod pipeline;
pub mod report;

use std::path::Path;

use rayon::prelude::*;

pub use config::{Overrides, Scenario, Task};
pub use pipeline::Mode;
pub use report::{Report, ScenarioReport, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

/// Run every scenario on a pool of `jobs` threads (0 picks the default) and
/// assemble the report in name order.
pub fn execute(scenarios: &[Scenario], mode: Mode, jobs: usize) -> anyhow::Result<Report> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let mut reports: Vec<ScenarioReport> =
        pool.install(|| scenarios.par_iter().map(|s| pipeline::run_scenario(s, mode)).collect());
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let command = match mode {
        Mode::Compute => "compute",
        Mode::Verify => "verify",
    };
    Ok(Report { command: command.into(), scenarios: reports })
}

pub fn exit_code(report: &Report) -> i32 {
    if report.scenarios.iter().any(|s| s.status == Status::Unsupported) {
        EXIT_UNSUPPORTED
    } else if report.scenarios.iter().any(|s| s.status == Status::Failed) {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

/// Load, run and write outputs; returns the process exit code.
pub fn run(config_path: &Path, out_dir: &Path, mode: Mode, jobs: usize, overrides: Overrides) -> i32 {
    let scenarios = match config::load(config_path, overrides) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return EXIT_CONFIG;
        }
    };
    let report = match execute(&scenarios, mode, jobs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = report.write(out_dir) {
        eprintln!("error: {e:#}");
        return EXIT_CONFIG;
    }
    for s in &report.scenarios {
        let failed = s.checks.iter().filter(|c| !c.pass).count();
        let status = match s.status {
            Status::Ok => "ok",
            Status::Failed => "FAILED",
            Status::Unsupported => "UNSUPPORTED",
        };
        println!("{}: {status}, {} checks, {failed} failed", s.name, s.checks.len());
        for c in s.checks.iter().filter(|c| !c.pass) {
            println!("  FAIL {}{}", c.name, c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default());
        }
        if let Some(d) = &s.diagnostic {
            eprintln!("{}: {d}", s.name);
        }
    }
    exit_code(&report)
}
