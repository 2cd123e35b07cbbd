//! Command-line interface.
//!
//! Exit codes: 0 when everything passes, 1 when a check fails, 2 for an
//! invalid configuration or parameter block, 3 for unreadable or unwritable
//! files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use hankel_core::bessel_ops::resolvent_apply_conv;
use hankel_core::bessel_ops::resolvent_apply_spectral;
use hankel_core::delsarte::ConvPlan;
use hankel_core::frac_powers::{
    balakrishnan_multiplier, balakrishnan_multiplier_direct, frac_power_balakrishnan,
    frac_power_delta, frac_power_spectral, liouville_pairing_with, vanishing_test_function,
    FracOrder, LIOUVILLE_TEST_ORDER,
};
use hankel_core::hankel::{Kind, SpectralPlan, TransformPlan};
use hankel_core::{Complex64, MuVector, SampledFn};
use serde::{Deserialize, Serialize};

use crate::config::{parse_override, ComplexValue, GridConfig, RunConfig, Suite};
use crate::error::{OpsError, OpsResult};
use crate::io::{read_json, read_sampled, write_sampled};
use crate::suites::{gaussian, weighted_gaussian};

#[derive(Debug, Parser)]
#[command(
    name = "hankelops",
    version,
    about = "Hankel transforms, Bessel operators and their verification suites"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write report.json, curves/ and fields/.
    Run(RunArgs),
    /// Apply h_μ (kind z) or H_μ (kind h) to a sampled function.
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: TransformKind,
        #[arg(long)]
        out: PathBuf,
        /// Orders; must match the input sidecar when given.
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        mu: Vec<f64>,
    },
    /// Apply (−S_μ)^α or (−Δ_μ)^α to a sampled function.
    Power {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = PowerRoute::Spectral)]
        route: PowerRoute,
    },
    /// Pair a sampled u with (−S_μ)^α of a test function whose transform
    /// vanishes to high order at the origin; prints JSON.
    Pairing {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = LIOUVILLE_TEST_ORDER)]
        test_order: usize,
    },
    /// Compare the Balakrishnan and spectral routes on a sampled function;
    /// prints JSON and exits 1 when they disagree beyond the tolerance.
    BalakrishnanCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Apply (λ − S_μ)⁻¹ to a sampled function.
    Resolvent {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = ResolventRoute::Spectral)]
        route: ResolventRoute,
    },
    /// Write a reference sample on a composite grid.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
        mu: Vec<f64>,
        #[arg(long)]
        grid_nodes: Option<usize>,
        #[arg(long = "grid-L")]
        grid_length: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    Z,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PowerRoute {
    Spectral,
    Balakrishnan,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResolventRoute {
    Spectral,
    Conv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    /// x^{μ+1/2} e^{−‖x‖²/2}
    EMu,
    /// e^{−‖x‖²/2}
    Gaussian,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub mu: Vec<f64>,
    #[arg(long)]
    pub grid_nodes: Option<usize>,
    #[arg(long = "grid-L")]
    pub grid_length: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tolerance override, `name=value`; the name may omit the bracketed
    /// parameters to cover every instance of a check.
    #[arg(long = "tol", value_parser = parse_override)]
    pub tol: Vec<(String, f64)>,
}

/// Parameter block of the `power`, `pairing` and `balakrishnan-check` verbs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerParams {
    pub alpha_re: f64,
    #[serde(default)]
    pub alpha_im: f64,
    /// Balakrishnan exponent; `⌊Re α⌋ + 1` when absent.
    #[serde(default)]
    pub m: Option<u32>,
    pub mu: Vec<f64>,
}

impl PowerParams {
    fn order(&self) -> OpsResult<FracOrder> {
        let alpha = Complex64::new(self.alpha_re, self.alpha_im);
        Ok(match self.m {
            Some(m) => FracOrder::new(alpha, m)?,
            None => FracOrder::minimal(alpha)?,
        })
    }
}

impl RunArgs {
    /// Merge the optional config file with the flags.
    pub fn into_config(self) -> OpsResult<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_json_file(path)?,
            None => {
                if self.mu.is_empty() {
                    return Err(OpsError::Config("give --mu or --config".into()));
                }
                RunConfig::new(self.mu.clone(), Suite::All, "hankelops-out")
            }
        };
        if !self.mu.is_empty() {
            config.n = self.mu.len();
            config.mu = self.mu;
        }
        if let Some(s) = self.suite {
            config.suite = s;
        }
        if self.grid_nodes.is_some() || self.grid_length.is_some() {
            let base = config.grid_config()?;
            config.grid = Some(GridConfig {
                length: self.grid_length.unwrap_or(base.length),
                nodes_per_axis: self.grid_nodes.unwrap_or(base.nodes_per_axis),
            });
        }
        match (self.alpha, self.alpha_im) {
            (Some(re), im) => {
                config.alpha = Some(ComplexValue {
                    re,
                    im: im.unwrap_or(0.0),
                })
            }
            (None, Some(im)) => match &mut config.alpha {
                Some(a) => a.im = im,
                None => return Err(OpsError::Config("--alpha-im needs --alpha".into())),
            },
            (None, None) => {}
        }
        if let Some(l) = self.lambda {
            config.lambda = Some(l);
        }
        if let Some(o) = self.out {
            config.output_dir = o;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        config.tolerance_overrides.extend(self.tol);
        config.validate()?;
        Ok(config)
    }
}

/// Parse arguments, execute, and map the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn params_for(path: &Path, mu: &MuVector) -> OpsResult<PowerParams> {
    let params: PowerParams = read_json(path).map_err(|e| match e {
        OpsError::Parse { path, msg } => OpsError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    if params.mu != mu.as_slice() {
        return Err(OpsError::Config(format!(
            "parameter block has mu = {:?} but the input is sampled for {:?}",
            params.mu,
            mu.as_slice()
        )));
    }
    Ok(params)
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("plain data serialises")
    );
}

#[derive(Serialize)]
struct PairingOutput {
    value_re: f64,
    value_im: f64,
    scale: f64,
    relative: f64,
}

#[derive(Serialize)]
struct BalakrishnanOutput {
    alpha_re: f64,
    alpha_im: f64,
    m: u32,
    sup_difference: f64,
    sup_spectral: f64,
    multiplier_beta_rel_error: f64,
    multiplier_direct_rel_error: f64,
    tolerance: f64,
    pass: bool,
}

pub fn execute(command: Command) -> OpsResult<u8> {
    match command {
        Command::Run(args) => {
            let config = args.into_config()?;
            let report = crate::run(&config)?;
            for c in report.checks() {
                println!(
                    "{} {}: computed {}, expected {}, tolerance {:e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.computed.map_or("n/a".to_string(), |v| format!("{v:e}")),
                    c.expected,
                    c.tolerance,
                );
            }
            let s = &report.summary;
            println!(
                "{} checks, {} passed, {} failed",
                s.total, s.passed, s.failed
            );
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Transform {
            input,
            kind,
            out,
            mu,
        } => {
            let (f, file_mu) = read_sampled(&input)?;
            if !mu.is_empty() && mu != file_mu.as_slice() {
                return Err(OpsError::Config(format!(
                    "--mu {mu:?} does not match the input's {:?}",
                    file_mu.as_slice()
                )));
            }
            let plan = TransformPlan::square(file_mu.clone(), f.grid().clone())?;
            let kind = match kind {
                TransformKind::Z => Kind::Zemanian,
                TransformKind::H => Kind::Hirschman,
            };
            write_sampled(&out, &plan.apply(kind, &f)?, &file_mu)?;
            Ok(0)
        }
        Command::Power {
            input,
            params,
            out,
            route,
        } => {
            let (f, mu) = read_sampled(&input)?;
            let order = params_for(&params, &mu)?.order()?;
            let plan = SpectralPlan::square(mu.clone(), f.grid().clone())?;
            let g = match route {
                PowerRoute::Spectral => frac_power_spectral(&order, &f, &plan)?,
                PowerRoute::Balakrishnan => frac_power_balakrishnan(&order, &f, &plan)?,
                PowerRoute::Delta => frac_power_delta(&order, &f, &plan)?,
            };
            write_sampled(&out, &g, &mu)?;
            Ok(0)
        }
        Command::Pairing {
            input,
            params,
            test_order,
        } => {
            let (u, mu) = read_sampled(&input)?;
            let order = params_for(&params, &mu)?.order()?;
            let plan = SpectralPlan::square(mu.clone(), u.grid().clone())?;
            let phi = vanishing_test_function(&mu, test_order, u.grid().clone())?;
            let p = liouville_pairing_with(&u, &order, &phi, &plan)?;
            print_json(&PairingOutput {
                value_re: p.value.re,
                value_im: p.value.im,
                scale: p.scale,
                relative: p.relative(),
            });
            Ok(0)
        }
        Command::BalakrishnanCheck { input, params, tol } => {
            if !(tol >= 0.0) {
                return Err(OpsError::Config(format!(
                    "tolerance {tol} must be non-negative"
                )));
            }
            let (f, mu) = read_sampled(&input)?;
            let order = params_for(&params, &mu)?.order()?;
            let plan = SpectralPlan::square(mu.clone(), f.grid().clone())?;
            let spectral = frac_power_spectral(&order, &f, &plan)?;
            let diff = frac_power_balakrishnan(&order, &f, &plan)?.max_abs_diff(&spectral)?;
            let (mut beta, mut direct) = (0.0f64, 0.0f64);
            for k in 0..=24 {
                let s = 10f64.powf(-6.0 + 0.5 * f64::from(k));
                let want = (order.alpha() * s.ln()).exp();
                beta = beta.max((balakrishnan_multiplier(&order, s)? - want).norm() / want.norm());
                direct = direct
                    .max((balakrishnan_multiplier_direct(&order, s)? - want).norm() / want.norm());
            }
            let pass = diff <= tol;
            print_json(&BalakrishnanOutput {
                alpha_re: order.alpha().re,
                alpha_im: order.alpha().im,
                m: order.m(),
                sup_difference: diff,
                sup_spectral: spectral.sup_norm(),
                multiplier_beta_rel_error: beta,
                multiplier_direct_rel_error: direct,
                tolerance: tol,
                pass,
            });
            Ok(if pass { 0 } else { 1 })
        }
        Command::Resolvent {
            input,
            lambda,
            out,
            route,
        } => {
            let (f, mu) = read_sampled(&input)?;
            let g = match route {
                ResolventRoute::Spectral => {
                    let plan = SpectralPlan::square(mu.clone(), f.grid().clone())?;
                    resolvent_apply_spectral(lambda, &f, &plan)?
                }
                ResolventRoute::Conv => {
                    let plan = ConvPlan::new(mu.clone(), f.grid().clone())?;
                    resolvent_apply_conv(lambda, &f, &plan)?
                }
            };
            write_sampled(&out, &g, &mu)?;
            Ok(0)
        }
        Command::Sample {
            kind,
            mu,
            grid_nodes,
            grid_length,
            out,
        } => {
            let mut config = RunConfig::new(mu, Suite::All, ".");
            let base = config.grid_config()?;
            config.grid = Some(GridConfig {
                length: grid_length.unwrap_or(base.length),
                nodes_per_axis: grid_nodes.unwrap_or(base.nodes_per_axis),
            });
            config.validate()?;
            let mu = config.mu_vector()?;
            let grid = Arc::new(config.base_grid()?);
            let f: SampledFn = match kind {
                SampleKind::EMu => weighted_gaussian(&grid, &mu, 1.0),
                SampleKind::Gaussian => gaussian(&grid, 1.0),
            };
            write_sampled(&out, &f, &mu)?;
            Ok(0)
        }
    }
}
