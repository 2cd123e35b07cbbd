//! `SampledFn` files: a CSV with one row `x_1,…,x_n,re,im` per node and a
//! JSON sidecar holding μ and the grid.
//!
//! The sidecar sits next to the CSV with the extension `json`. Besides the
//! nodes and weights of each axis it may record the Gauss–Legendre panels
//! the axis was built from, so that a reader can rebuild the same
//! interpolation structure; axes without panels are read as plain node sets.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hankel_core::weighted_spaces::PanelSpec;
use hankel_core::{Axis, Complex64, MuVector, SampledFn, TensorGrid};
use serde::{Deserialize, Serialize};

use crate::error::{OpsError, OpsResult};

/// Relative tolerance for matching rebuilt nodes and CSV coordinates.
const NODE_MATCH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRecord {
    pub nodes: usize,
    pub lo: f64,
    pub hi: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisRecord {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panels: Option<Vec<PanelRecord>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub n: usize,
    pub mu: Vec<f64>,
    pub axes: Vec<AxisRecord>,
}

impl Sidecar {
    pub fn new(mu: &MuVector, grid: &TensorGrid) -> Self {
        Sidecar {
            n: grid.dim(),
            mu: mu.as_slice().to_vec(),
            axes: grid
                .axes()
                .iter()
                .map(|a| AxisRecord {
                    nodes: a.nodes().to_vec(),
                    weights: a.weights().to_vec(),
                    panels: a.panels().map(|ps| {
                        ps.iter()
                            .map(|p| {
                                let s = p.spec();
                                PanelRecord {
                                    nodes: s.nodes,
                                    lo: s.lo,
                                    hi: s.hi,
                                    power: s.power,
                                }
                            })
                            .collect()
                    }),
                })
                .collect(),
        }
    }

    pub fn mu_vector(&self) -> OpsResult<MuVector> {
        if self.mu.len() != self.n {
            return Err(OpsError::Config(format!(
                "sidecar has n = {} but {} orders",
                self.n,
                self.mu.len()
            )));
        }
        MuVector::new(self.mu.clone()).map_err(|e| OpsError::Config(e.to_string()))
    }

    pub fn grid(&self, path: &Path) -> OpsResult<TensorGrid> {
        if self.axes.len() != self.n {
            return Err(OpsError::parse(
                path,
                format!("n = {} but {} axes", self.n, self.axes.len()),
            ));
        }
        let axes = self
            .axes
            .iter()
            .enumerate()
            .map(|(i, rec)| {
                rebuild_axis(rec).map_err(|msg| OpsError::parse(path, format!("axis {i}: {msg}")))
            })
            .collect::<OpsResult<Vec<_>>>()?;
        TensorGrid::new(axes).map_err(|e| OpsError::parse(path, e))
    }
}

fn rebuild_axis(rec: &AxisRecord) -> Result<Axis, String> {
    if rec.nodes.len() != rec.weights.len() {
        return Err(format!(
            "{} nodes but {} weights",
            rec.nodes.len(),
            rec.weights.len()
        ));
    }
    let Some(panels) = &rec.panels else {
        return Axis::new(rec.nodes.clone(), rec.weights.clone()).map_err(|e| e.to_string());
    };
    let specs: Vec<PanelSpec> = panels
        .iter()
        .map(|p| PanelSpec {
            nodes: p.nodes,
            lo: p.lo,
            hi: p.hi,
            power: p.power,
        })
        .collect();
    let axis = Axis::from_panels(&specs).map_err(|e| e.to_string())?;
    let close = |a: &[f64], b: &[f64]| {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| (x - y).abs() <= NODE_MATCH * x.abs().max(y.abs()))
    };
    if !close(axis.nodes(), &rec.nodes) || !close(axis.weights(), &rec.weights) {
        return Err("panels do not reproduce the listed nodes and weights".into());
    }
    Ok(axis)
}

/// Sidecar path for a CSV path.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> OpsResult<()> {
    let file = File::create(path).map_err(|e| OpsError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| OpsError::io(path, e.into()))?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| OpsError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> OpsResult<T> {
    let file = File::open(path).map_err(|e| OpsError::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| OpsError::parse(path, e))
}

/// Write `f` as CSV plus sidecar.
pub fn write_sampled(path: &Path, f: &SampledFn, mu: &MuVector) -> OpsResult<()> {
    write_csv_only(path, f)?;
    write_json(&sidecar_path(path), &Sidecar::new(mu, f.grid()))
}

/// Write `f` as CSV without a sidecar (plot data).
pub fn write_csv_only(path: &Path, f: &SampledFn) -> OpsResult<()> {
    let grid = f.grid();
    let n = grid.dim();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut header: Vec<String> = (1..=n).map(|i| format!("x_{i}")).collect();
    header.push("re".into());
    header.push("im".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    let mut x = vec![0.0; n];
    let mut row = Vec::with_capacity(n + 2);
    for (i, v) in f.values().iter().enumerate() {
        grid.point(i, &mut x);
        row.clear();
        row.extend(x.iter().map(|c| c.to_string()));
        row.push(v.re.to_string());
        row.push(v.im.to_string());
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| OpsError::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> OpsError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => OpsError::io(path, io),
            other => OpsError::parse(path, format!("{other:?}")),
        }
    } else {
        OpsError::parse(path, e)
    }
}

/// Read a CSV and its sidecar. Every row's coordinates must match the grid
/// node at that position.
pub fn read_sampled(path: &Path) -> OpsResult<(SampledFn, MuVector)> {
    let side_path = sidecar_path(path);
    let side: Sidecar = read_json(&side_path)?;
    let mu = side.mu_vector()?;
    let grid = Arc::new(side.grid(&side_path)?);
    let n = grid.dim();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut values = Vec::with_capacity(grid.len());
    let mut x = vec![0.0; n];
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        if rec.len() != n + 2 {
            return Err(OpsError::parse(
                path,
                format!(
                    "row {}: expected {} columns, found {}",
                    i + 1,
                    n + 2,
                    rec.len()
                ),
            ));
        }
        let nums = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| OpsError::parse(path, format!("row {}: {e}", i + 1)))?;
        if i >= grid.len() {
            return Err(OpsError::parse(
                path,
                format!("more rows than the {} grid nodes", grid.len()),
            ));
        }
        grid.point(i, &mut x);
        if x.iter()
            .zip(&nums)
            .any(|(a, b)| (a - b).abs() > 1e-9 * a.abs().max(1e-300))
        {
            return Err(OpsError::parse(
                path,
                format!("row {}: coordinates do not match the grid", i + 1),
            ));
        }
        values.push(Complex64::new(nums[n], nums[n + 1]));
    }
    if values.len() != grid.len() {
        return Err(OpsError::parse(
            path,
            format!("{} rows for {} grid nodes", values.len(), grid.len()),
        ));
    }
    let f = SampledFn::new(grid, values).map_err(|e| OpsError::parse(path, e))?;
    Ok((f, mu))
}
