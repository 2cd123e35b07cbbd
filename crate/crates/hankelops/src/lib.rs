//! File formats, verification suites and the command-line front end for
//! `hankel-core`.
//!
//! [`run`] executes the suites selected by a [`RunConfig`] and writes
//! `report.json`, `curves/*.csv` and `fields/*.csv` into the output
//! directory. [`io`] reads and writes sampled functions as CSV with a JSON
//! grid sidecar.
// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

pub mod cli;
pub mod config;
mod error;
pub mod io;
pub mod report;
pub mod suites;

pub use config::{RunConfig, Suite};
pub use error::{OpsError, OpsResult};
pub use report::{Check, SuiteReport};

use report::{fingerprint, SuiteSection, Summary};
use suites::{run_suite, Curve, SuiteInput};

/// Run the configured suites and write the report and plot data.
pub fn run(config: &RunConfig) -> OpsResult<SuiteReport> {
    config.validate()?;
    let mu = config.mu_vector()?;
    let grid = Arc::new(config.base_grid()?);
    let input = SuiteInput {
        mu: mu.clone(),
        grid: grid.clone(),
        alpha: config.alpha.map(Into::into),
        lambda: config.lambda,
        seed: config.seed,
        overrides: config.tolerance_overrides.clone(),
    };
    let out = &config.output_dir;
    let curves_dir = out.join("curves");
    let fields_dir = out.join("fields");
    for dir in [out, &curves_dir, &fields_dir] {
        fs::create_dir_all(dir).map_err(|e| OpsError::io(dir, e))?;
    }

    let mut sections = Vec::new();
    for suite in config.suite.expand() {
        let result = run_suite(suite, &input);
        for c in &result.curves {
            write_curve(&curves_dir.join(format!("{}.csv", c.name)), c)?;
        }
        for f in &result.fields {
            io::write_csv_only(&fields_dir.join(format!("{}.csv", f.name)), &f.values)?;
        }
        sections.push(SuiteSection {
            suite: suite.name().to_string(),
            summary: Summary::of(&result.checks),
            checks: result.checks,
        });
    }
    let report = SuiteReport {
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        fingerprint: fingerprint(&mu, &grid),
        config: config.clone(),
        summary: Summary::of(sections.iter().flat_map(|s| &s.checks)),
        suites: sections,
    };
    let path = out.join("report.json");
    let text = serde_json::to_string_pretty(&report).map_err(|e| OpsError::io(&path, e.into()))?;
    fs::write(&path, text + "\n").map_err(|e| OpsError::io(&path, e))?;
    Ok(report)
}

fn write_curve(path: &Path, curve: &Curve) -> OpsResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| OpsError::parse(path, e))?;
    let io_err = |e: csv::Error| OpsError::parse(path, e);
    w.write_record(&curve.columns).map_err(io_err)?;
    for row in &curve.rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(io_err)?;
    }
    w.flush().map_err(|e| OpsError::io(path, e))
}
