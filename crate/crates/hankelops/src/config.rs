//! Run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hankel_core::weighted_spaces::default_layout;
use hankel_core::{Complex64, MuVector, TensorGrid};
use serde::{Deserialize, Serialize};

use crate::error::{OpsError, OpsResult};

/// Largest total node count accepted for the base grid.
pub const MAX_GRID_NODES: usize = 1 << 21;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Special,
    Hankel,
    Delsarte,
    Resolvent,
    Power,
    Liouville,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `run` executes them.
    pub const ORDER: [Suite; 6] = [
        Suite::Special,
        Suite::Hankel,
        Suite::Delsarte,
        Suite::Resolvent,
        Suite::Power,
        Suite::Liouville,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Hankel => "hankel",
            Suite::Delsarte => "delsarte",
            Suite::Resolvent => "resolvent",
            Suite::Power => "power",
            Suite::Liouville => "liouville",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::ORDER.to_vec(),
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub length: f64,
    pub nodes_per_axis: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<ComplexValue> for Complex64 {
    fn from(c: ComplexValue) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mu: Vec<f64>,
    pub n: usize,
    /// Base grid; the per-dimension default layout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    pub suite: Suite,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(mu: Vec<f64>, suite: Suite, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            n: mu.len(),
            mu,
            grid: None,
            suite,
            alpha: None,
            lambda: None,
            tolerance_overrides: BTreeMap::new(),
            output_dir: output_dir.into(),
            seed: 0,
        }
    }

    pub fn from_json_file(path: &Path) -> OpsResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| OpsError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| OpsError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> OpsResult<()> {
        let bad = |msg: String| Err(OpsError::Config(msg));
        if !(1..=3).contains(&self.n) {
            return bad(format!("n must be 1, 2 or 3, got {}", self.n));
        }
        if self.mu.len() != self.n {
            return bad(format!(
                "n = {} but mu has {} entries",
                self.n,
                self.mu.len()
            ));
        }
        if let Some((i, m)) = self
            .mu
            .iter()
            .enumerate()
            .find(|(_, m)| !(**m > -0.5) || !m.is_finite())
        {
            return bad(format!("mu[{i}] = {m} must be a finite number above -1/2"));
        }
        if let Some(g) = self.grid {
            if g.nodes_per_axis < 16 {
                return bad(format!("nodes_per_axis = {} is below 16", g.nodes_per_axis));
            }
            if !(g.length > 0.0) || !g.length.is_finite() {
                return bad(format!("grid length L = {} must be positive", g.length));
            }
            let total = (g.nodes_per_axis as f64).powi(self.n as i32);
            if total > MAX_GRID_NODES as f64 {
                return bad(format!(
                    "{} nodes per axis in {} dimensions is too many",
                    g.nodes_per_axis, self.n
                ));
            }
        }
        if let Some(a) = self.alpha {
            if !(a.re > 0.0) || !a.re.is_finite() || !a.im.is_finite() {
                return bad(format!(
                    "alpha must have a positive real part, got {} + {}i",
                    a.re, a.im
                ));
            }
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0) || !l.is_finite() {
                return bad(format!("lambda = {l} must be positive"));
            }
        }
        if let Some((k, v)) = self
            .tolerance_overrides
            .iter()
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
        {
            return bad(format!(
                "tolerance override {k} = {v} must be a finite non-negative number"
            ));
        }
        Ok(())
    }

    pub fn mu_vector(&self) -> OpsResult<MuVector> {
        MuVector::new(self.mu.clone()).map_err(|e| OpsError::Config(e.to_string()))
    }

    /// The configured layout, or the default one for this dimension.
    pub fn grid_config(&self) -> OpsResult<GridConfig> {
        match self.grid {
            Some(g) => Ok(g),
            None => {
                let (nodes, length) =
                    default_layout(self.n).map_err(|e| OpsError::Config(e.to_string()))?;
                Ok(GridConfig {
                    length,
                    nodes_per_axis: nodes,
                })
            }
        }
    }

    pub fn base_grid(&self) -> OpsResult<TensorGrid> {
        let g = self.grid_config()?;
        TensorGrid::composite(self.n, g.nodes_per_axis, g.length)
            .map_err(|e| OpsError::Config(e.to_string()))
    }
}

/// Parse `name=value` for `--tol`.
pub fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("{value:?}: {e}"))?;
    Ok((name.trim().to_string(), value))
}
