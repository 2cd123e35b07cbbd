//! Verification suites. Each suite turns identities and inequalities into
//! [`Check`] records and emits curves and sampled fields for plotting.
//!
//! Suites take the configured μ and base grid. Checks that need a different
//! discretisation (finite differences, resolvent kernels, fractional powers
//! with algebraic tails, refinement studies) build their own grids and say
//! so in their identity string.

use std::collections::BTreeMap;
use std::sync::Arc;

use hankel_core::{Complex64, MuVector, Result, SampledFn, TensorGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Suite;
use crate::report::{Check, Metric};

mod delsarte;
mod hankel;
mod liouville;
mod power;
mod resolvent;
mod special;

pub use special::gaussian_pair_lattice;

/// Everything a suite reads.
#[derive(Debug, Clone)]
pub struct SuiteInput {
    pub mu: MuVector,
    pub grid: Arc<TensorGrid>,
    pub alpha: Option<Complex64>,
    pub lambda: Option<f64>,
    pub seed: u64,
    pub overrides: BTreeMap<String, f64>,
}

impl SuiteInput {
    /// Default grid for the dimension of `mu`, no overrides, seed 0.
    pub fn new(mu: MuVector) -> Result<Self> {
        let grid = Arc::new(TensorGrid::default_for(mu.dim())?);
        Ok(SuiteInput {
            mu,
            grid,
            alpha: None,
            lambda: None,
            seed: 0,
            overrides: BTreeMap::new(),
        })
    }
}

/// A table for `curves/<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// A sampled function for `fields/<name>.csv`.
#[derive(Debug, Clone)]
pub struct Field {
    pub name: String,
    pub values: SampledFn,
}

#[derive(Debug, Clone)]
pub struct SuiteOutput {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub curves: Vec<Curve>,
    pub fields: Vec<Field>,
}

impl SuiteOutput {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Checks whose name is `base` or `base[…]`.
    pub fn named<'a>(&'a self, base: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks
            .iter()
            .filter(move |c| base_name(&c.name) == base)
    }
}

fn base_name(name: &str) -> &str {
    name.split_once('[').map_or(name, |(b, _)| b)
}

/// Run one concrete suite. `Suite::All` runs nothing; expand it first.
pub fn run_suite(suite: Suite, input: &SuiteInput) -> SuiteOutput {
    let mut ctx = Ctx {
        input,
        rng: ChaCha8Rng::seed_from_u64(input.seed),
        out: SuiteOutput {
            suite,
            checks: Vec::new(),
            curves: Vec::new(),
            fields: Vec::new(),
        },
    };
    match suite {
        Suite::Special => special::run(&mut ctx),
        Suite::Hankel => hankel::run(&mut ctx),
        Suite::Delsarte => delsarte::run(&mut ctx),
        Suite::Resolvent => resolvent::run(&mut ctx),
        Suite::Power => power::run(&mut ctx),
        Suite::Liouville => liouville::run(&mut ctx),
        Suite::All => {}
    }
    ctx.out
}

pub(crate) struct Ctx<'a> {
    input: &'a SuiteInput,
    rng: ChaCha8Rng,
    out: SuiteOutput,
}

impl Ctx<'_> {
    fn mu(&self) -> &MuVector {
        &self.input.mu
    }

    fn grid(&self) -> &Arc<TensorGrid> {
        &self.input.grid
    }

    fn tolerance(&self, name: &str, default: f64) -> f64 {
        let o = &self.input.overrides;
        o.get(name)
            .or_else(|| o.get(base_name(name)))
            .copied()
            .unwrap_or(default)
    }

    fn record(
        &mut self,
        name: String,
        identity: &str,
        metric: Metric,
        computed: Result<f64>,
        expected: f64,
        default_tol: f64,
    ) -> bool {
        let tol = self.tolerance(&name, default_tol);
        let check = match computed {
            Ok(v) => Check::new(name, identity, metric, v, expected, tol),
            Err(e) => Check::failed(name, identity, metric, expected, tol, e.to_string()),
        };
        let pass = check.pass;
        self.out.checks.push(check);
        pass
    }

    /// An error measure that must not exceed `tol`.
    fn small(
        &mut self,
        name: impl Into<String>,
        identity: &str,
        err: Result<f64>,
        tol: f64,
    ) -> bool {
        self.record(name.into(), identity, Metric::AtMost, err, 0.0, tol)
    }

    fn at_most(
        &mut self,
        name: impl Into<String>,
        identity: &str,
        computed: Result<f64>,
        bound: f64,
        tol: f64,
    ) -> bool {
        self.record(name.into(), identity, Metric::AtMost, computed, bound, tol)
    }

    fn at_least(
        &mut self,
        name: impl Into<String>,
        identity: &str,
        computed: Result<f64>,
        bound: f64,
        tol: f64,
    ) -> bool {
        self.record(name.into(), identity, Metric::AtLeast, computed, bound, tol)
    }

    /// Record a setup failure that prevents the checks after it.
    fn setup_failed(&mut self, name: &str, e: hankel_core::Error) {
        let check = Check::failed(name, "setup", Metric::AtMost, 0.0, 0.0, e.to_string());
        self.out.checks.push(check);
    }

    fn curve(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<f64>>) {
        self.out.curves.push(Curve {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    fn field(&mut self, name: &str, values: SampledFn) {
        self.out.fields.push(Field {
            name: name.to_string(),
            values,
        });
    }
}

/// `x^{μ+1/2} e^{−‖x‖²/(2a)}`; `a = 1` is `e_μ`.
pub fn weighted_gaussian(grid: &Arc<TensorGrid>, mu: &MuVector, a: f64) -> SampledFn {
    SampledFn::separable_fn(grid.clone(), |d, x| {
        Complex64::new(x.powf(mu.get(d) + 0.5) * (-x * x / (2.0 * a)).exp(), 0.0)
    })
}

/// `e^{−‖x‖²/(2a)}`.
pub fn gaussian(grid: &Arc<TensorGrid>, a: f64) -> SampledFn {
    SampledFn::separable_fn(grid.clone(), |_, x| {
        Complex64::new((-x * x / (2.0 * a)).exp(), 0.0)
    })
}

/// Largest ratio of consecutive entries; below 1 means strictly decreasing.
pub(crate) fn worst_ratio(seq: &[f64]) -> f64 {
    seq.windows(2)
        .map(|w| w[1] / w[0])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Label for a complex order in check names.
pub(crate) fn alpha_label(a: Complex64) -> String {
    if a.im == 0.0 {
        format!("{}", a.re)
    } else {
        format!("{}{:+}i", a.re, a.im)
    }
}
