//! Check records and the run report.

use hankel_core::{MuVector, TensorGrid};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// How `computed` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// `|computed − expected| ≤ tolerance`.
    AbsDiff,
    /// `computed ≤ expected + tolerance`.
    AtMost,
    /// `computed ≥ expected − tolerance`.
    AtLeast,
}

impl Metric {
    pub fn passes(self, computed: f64, expected: f64, tolerance: f64) -> bool {
        match self {
            Metric::AbsDiff => (computed - expected).abs() <= tolerance,
            Metric::AtMost => computed <= expected + tolerance,
            Metric::AtLeast => computed >= expected - tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity or inequality the check exercises, as a formula.
    pub identity: String,
    pub metric: Metric,
    /// `null` in JSON when the computation failed or produced NaN.
    pub computed: Option<f64>,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        identity: impl Into<String>,
        metric: Metric,
        computed: f64,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        let finite = !computed.is_nan();
        Check {
            name: name.into(),
            identity: identity.into(),
            metric,
            computed: finite.then_some(computed),
            expected,
            tolerance,
            pass: finite && metric.passes(computed, expected, tolerance),
            note: None,
        }
    }

    /// A check whose computation failed; it never passes.
    pub fn failed(
        name: impl Into<String>,
        identity: impl Into<String>,
        metric: Metric,
        expected: f64,
        tolerance: f64,
        why: String,
    ) -> Self {
        Check {
            name: name.into(),
            identity: identity.into(),
            metric,
            computed: None,
            expected,
            tolerance,
            pass: false,
            note: Some(why),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Self {
        let (mut total, mut passed) = (0, 0);
        for c in checks {
            total += 1;
            passed += usize::from(c.pass);
        }
        Summary {
            total,
            passed,
            failed: total - passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    /// SHA-256 of μ and the base grid's nodes and weights.
    pub grid_hash: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSection {
    pub suite: String,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    /// Seconds since the Unix epoch; the only field that differs between
    /// identical runs.
    pub timestamp: u64,
    pub fingerprint: Fingerprint,
    pub config: RunConfig,
    pub summary: Summary,
    pub suites: Vec<SuiteSection>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }
}

pub fn grid_hash(mu: &MuVector, grid: &TensorGrid) -> String {
    let mut h = Sha256::new();
    h.update((mu.dim() as u64).to_le_bytes());
    for m in mu.as_slice() {
        h.update(m.to_le_bytes());
    }
    for axis in grid.axes() {
        h.update((axis.len() as u64).to_le_bytes());
        for (x, w) in axis.nodes().iter().zip(axis.weights()) {
            h.update(x.to_le_bytes());
            h.update(w.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

pub fn fingerprint(mu: &MuVector, grid: &TensorGrid) -> Fingerprint {
    Fingerprint {
        grid_hash: grid_hash(mu, grid),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}
