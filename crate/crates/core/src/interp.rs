//! Interpolation on grid axes.
//!
//! Axes built from mapped Gauss–Legendre panels interpolate with the
//! barycentric formula in each panel's own variable, which is spectrally
//! accurate for smooth data. Axes with arbitrary nodes fall back to local
//! Lagrange stencils.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use crate::weighted_spaces::{Axis, Panel, TensorGrid};
use crate::Complex64;

/// Points of a local Lagrange stencil for axes without panel structure.
pub const LOCAL_STENCIL: usize = 12;

/// Barycentric weights of the Gauss–Legendre nodes `t_j` with weights `λ_j`.
pub(crate) fn legendre_barycentric(nodes: &[f64], weights: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(j, (&t, &w))| {
            let b = ((1.0 - t * t) * w).sqrt();
            if j % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect()
}

/// Lagrange basis of `axis` evaluated at `x`, written into `row` (one entry
/// per node). Points beyond the last node are treated as outside the support
/// and yield a zero row; points below the first node extrapolate within the
/// first panel.
pub fn basis_row(axis: &Axis, x: f64, row: &mut [f64]) {
    debug_assert_eq!(row.len(), axis.len());
    row.fill(0.0);
    if x.is_nan() || x <= 0.0 || x > axis.upper() {
        return;
    }
    match axis.panels() {
        Some(panels) => {
            let panel = panels
                .iter()
                .find(|p| x <= p.hi)
                .unwrap_or_else(|| panels.last().expect("axis has panels"));
            panel_row(panel, x, &mut row[panel.start..panel.start + panel.len]);
        }
        None => local_row(axis.nodes(), x, row),
    }
}

fn panel_row(panel: &Panel, x: f64, row: &mut [f64]) {
    let v = panel.to_unit(x);
    let mut total = 0.0;
    for j in 0..panel.len {
        let d = v - panel.unit_nodes[j];
        if d == 0.0 {
            row.fill(0.0);
            row[j] = 1.0;
            return;
        }
        let c = panel.bary[j] / d;
        row[j] = c;
        total += c;
    }
    for c in row.iter_mut() {
        *c /= total;
    }
}

fn local_row(nodes: &[f64], x: f64, row: &mut [f64]) {
    let n = nodes.len();
    let width = LOCAL_STENCIL.min(n);
    let centre = nodes.partition_point(|&t| t < x);
    let start = centre.saturating_sub(width / 2).min(n - width);
    let stencil = &nodes[start..start + width];
    for (j, &tj) in stencil.iter().enumerate() {
        let mut l = 1.0;
        for (k, &tk) in stencil.iter().enumerate() {
            if k != j {
                l *= (x - tk) / (tj - tk);
            }
        }
        row[start + j] = l;
    }
}

/// Interpolate complex axis data at `x`.
pub fn interpolate(axis: &Axis, values: &[Complex64], x: f64) -> Complex64 {
    let mut row = alloc::vec![0.0; axis.len()];
    basis_row(axis, x, &mut row);
    row.iter().zip(values).map(|(&c, &v)| v * c).sum()
}

/// Interpolate real axis data at `x`.
pub fn interpolate_real(axis: &Axis, values: &[f64], x: f64) -> f64 {
    let mut row = alloc::vec![0.0; axis.len()];
    basis_row(axis, x, &mut row);
    row.iter().zip(values).map(|(c, v)| c * v).sum()
}

/// Interpolate samples on a tensor grid at the point `x` (tensor product of
/// the per-axis bases).
pub fn interpolate_tensor(grid: &TensorGrid, values: &[Complex64], x: &[f64]) -> Complex64 {
    let rows: Vec<Vec<f64>> = grid
        .axes()
        .iter()
        .zip(x)
        .map(|(axis, &xi)| {
            let mut row = alloc::vec![0.0; axis.len()];
            basis_row(axis, xi, &mut row);
            row
        })
        .collect();
    let mut idx = alloc::vec![0; grid.dim()];
    let mut acc = Complex64::new(0.0, 0.0);
    for (flat, v) in values.iter().enumerate() {
        grid.unravel(flat, &mut idx);
        let c: f64 = idx.iter().enumerate().map(|(d, &i)| rows[d][i]).product();
        if c != 0.0 {
            acc += v * c;
        }
    }
    acc
}
