//! Grids on `(0, ∞)ⁿ`, the weights `s` and `r`, weighted norms, the operators
//! `T_j = x_j⁻¹ ∂_j` and the seminorms `γ_{m,k}`.
//!
//! Sup-norms are grid maxima. Integrals over `(L, ∞)` are dropped; every test
//! function used with these grids carries a Gaussian envelope.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use crate::interp::legendre_barycentric;
use crate::quadrature::gauss_legendre;
use crate::special_fn::c_alpha;
use crate::{Complex64, Error, Result};

/// Smallest admissible node count per axis.
pub const MIN_AXIS_NODES: usize = 8;

/// Order vector `μ = (μ_1, …, μ_n)` with every `μ_i > −1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuVector {
    mu: Vec<f64>,
    c_mu: f64,
}

impl MuVector {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (index, &value) in mu.iter().enumerate() {
            if !(value.is_finite() && value > -0.5) {
                return Err(Error::InvalidOrder { index, value });
            }
        }
        let c_mu = mu.iter().map(|&m| c_alpha(m)).product();
        Ok(MuVector { mu, c_mu })
    }

    /// One-dimensional order.
    pub fn scalar(mu: f64) -> Result<Self> {
        Self::new(vec![mu])
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mu
    }

    pub fn get(&self, i: usize) -> f64 {
        self.mu[i]
    }

    /// `C_μ = Π 2^{μ_i} Γ(μ_i + 1)`.
    pub fn c_mu(&self) -> f64 {
        self.c_mu
    }

    /// `|μ| = Σ μ_i`.
    pub fn sum(&self) -> f64 {
        self.mu.iter().sum()
    }

    /// `Σ (μ_i + 1)`, the exponent written `|μ + 1|`.
    pub fn shifted_sum(&self) -> f64 {
        self.sum() + self.dim() as f64
    }

    /// `Π x_i^{a μ_i + b}`.
    pub fn power(&self, x: &[f64], a: f64, b: f64) -> f64 {
        self.mu
            .iter()
            .zip(x)
            .map(|(&m, &xi)| xi.powf(a * m + b))
            .product()
    }
}

/// A Gauss–Legendre panel mapped onto `[lo, hi]` by `x = lo + (hi − lo)·v^q`,
/// `v ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub(crate) start: usize,
    pub(crate) len: usize,
    pub(crate) lo: f64,
    pub(crate) hi: f64,
    pub(crate) power: f64,
    pub(crate) unit_nodes: Vec<f64>,
    pub(crate) bary: Vec<f64>,
}

impl Panel {
    pub(crate) fn to_unit(&self, x: f64) -> f64 {
        let v = ((x - self.lo) / (self.hi - self.lo)).max(0.0);
        if self.power == 1.0 {
            v
        } else {
            v.powf(1.0 / self.power)
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn node_range(&self) -> core::ops::Range<usize> {
        self.start..self.start + self.len
    }

    /// The layout this panel was built from.
    pub fn spec(&self) -> PanelSpec {
        PanelSpec {
            nodes: self.len,
            lo: self.lo,
            hi: self.hi,
            power: self.power,
        }
    }
}

/// One panel of [`Axis::from_panels`]: `nodes` Gauss–Legendre points on
/// `[lo, hi]`, graded by `x = lo + (hi − lo)·v^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelSpec {
    pub nodes: usize,
    pub lo: f64,
    pub hi: f64,
    pub power: f64,
}

/// Layout of the default composite axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisLayout {
    /// Total node count.
    pub nodes: usize,
    /// Truncation point `L`.
    pub length: f64,
    /// End of the graded head panel.
    pub split: f64,
    /// Share of the nodes placed in the head panel.
    pub head_fraction: f64,
    /// Grading exponent `q` of the head panel.
    pub power: f64,
}

impl AxisLayout {
    pub fn new(nodes: usize, length: f64) -> Self {
        AxisLayout {
            nodes,
            length,
            split: 0.5,
            head_fraction: 0.25,
            power: 3.0,
        }
    }
}

/// One grid axis: strictly increasing positive nodes with quadrature weights
/// for `∫₀^∞ · dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: Option<Vec<Panel>>,
}

impl Axis {
    /// Axis with arbitrary nodes; interpolation uses local stencils.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::InvalidAxis("node and weight counts differ"));
        }
        if nodes.len() < MIN_AXIS_NODES {
            return Err(Error::TooFewNodes {
                axis: 0,
                nodes: nodes.len(),
                needed: MIN_AXIS_NODES,
            });
        }
        if !(nodes[0] > 0.0) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidAxis(
                "nodes must be positive and strictly increasing",
            ));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0))
            || !nodes[nodes.len() - 1].is_finite()
        {
            return Err(Error::InvalidAxis("weights must be positive and finite"));
        }
        Ok(Axis {
            nodes,
            weights,
            panels: None,
        })
    }

    /// Default axis on `(0, L]`: a graded head panel `x = v³/2` on `(0, 1/2]`
    /// holding a quarter of the nodes, then plain Gauss–Legendre on `[1/2, L]`.
    pub fn composite(nodes: usize, length: f64) -> Result<Self> {
        Self::from_layout(AxisLayout::new(nodes, length))
    }

    pub fn from_layout(layout: AxisLayout) -> Result<Self> {
        let AxisLayout {
            nodes: n,
            length,
            head_fraction,
            power,
            ..
        } = layout;
        if n < MIN_AXIS_NODES {
            return Err(Error::TooFewNodes {
                axis: 0,
                nodes: n,
                needed: MIN_AXIS_NODES,
            });
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Domain {
                what: "grid length L",
                value: length,
            });
        }
        if !(power >= 1.0 && head_fraction > 0.0 && head_fraction < 1.0) {
            return Err(Error::InvalidAxis("invalid head panel layout"));
        }
        let split = layout.split.min(0.25 * length);
        let head = ((n as f64 * head_fraction).round() as usize).clamp(4, n - 4);
        Self::from_panels(&[
            PanelSpec {
                nodes: head,
                lo: 0.0,
                hi: split,
                power,
            },
            PanelSpec {
                nodes: n - head,
                lo: split,
                hi: length,
                power: 1.0,
            },
        ])
    }

    /// Axis built from consecutive Gauss–Legendre panels. Panels must tile
    /// `(0, hi]` without gaps; the first may be graded towards the origin.
    pub fn from_panels(specs: &[PanelSpec]) -> Result<Self> {
        let total: usize = specs.iter().map(|p| p.nodes).sum();
        if total < MIN_AXIS_NODES || specs.iter().any(|p| p.nodes < 2) {
            return Err(Error::TooFewNodes {
                axis: 0,
                nodes: total,
                needed: MIN_AXIS_NODES,
            });
        }
        let mut prev = 0.0;
        for (k, p) in specs.iter().enumerate() {
            if p.lo != prev || !(p.hi > p.lo) || !p.hi.is_finite() {
                return Err(Error::InvalidAxis("panels must tile (0, L] in order"));
            }
            if !(p.power >= 1.0) || (k > 0 && p.power != 1.0) {
                return Err(Error::InvalidAxis("only the first panel may be graded"));
            }
            prev = p.hi;
        }
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut panels = Vec::with_capacity(specs.len());
        for &PanelSpec {
            nodes: count,
            lo,
            hi,
            power: q,
        } in specs
        {
            let rule = gauss_legendre(count);
            let unit_nodes: Vec<f64> = rule.nodes.iter().map(|t| 0.5 * (1.0 + t)).collect();
            let bary = legendre_barycentric(&rule.nodes, &rule.weights);
            for (v, w) in unit_nodes.iter().zip(&rule.weights) {
                nodes.push(lo + (hi - lo) * v.powf(q));
                weights.push(0.5 * w * (hi - lo) * q * v.powf(q - 1.0));
            }
            panels.push(Panel {
                start: nodes.len() - count,
                len: count,
                lo,
                hi,
                power: q,
                unit_nodes,
                bary,
            });
        }
        Ok(Axis {
            nodes,
            weights,
            panels: Some(panels),
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panels(&self) -> Option<&[Panel]> {
        self.panels.as_deref()
    }

    /// Right end of the represented interval.
    pub fn upper(&self) -> f64 {
        match &self.panels {
            Some(p) => p[p.len() - 1].hi,
            None => self.nodes[self.nodes.len() - 1],
        }
    }
}

/// Default `(nodes per axis, L)` for dimension `n`.
pub fn default_layout(n: usize) -> Result<(usize, f64)> {
    match n {
        1 => Ok((128, 12.0)),
        2 => Ok((64, 10.0)),
        3 => Ok((64, 10.0)),
        _ => Err(Error::DimensionMismatch {
            expected: 3,
            found: n,
        }),
    }
}

/// Tensor product of axes, the discrete stand-in for `(0, ∞)ⁿ`. Flat indices
/// are row-major (the last axis varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGrid {
    axes: Vec<Axis>,
    shape: Vec<usize>,
}

impl TensorGrid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let shape = axes.iter().map(Axis::len).collect();
        Ok(TensorGrid { axes, shape })
    }

    /// `n` identical composite axes.
    pub fn composite(n: usize, nodes: usize, length: f64) -> Result<Self> {
        let axis = Axis::composite(nodes, length)?;
        Self::new(vec![axis; n])
    }

    /// Default grid for dimension `n`: 128 nodes on `(0, 12]` in 1-D, 64 on
    /// `(0, 10]` per axis in 2-D and 3-D.
    ///
    /// The kernel `J(xy)` oscillates with frequency up to `L` across the whole
    /// axis, so resolving it takes roughly `L²/2` nodes; fewer nodes need a
    /// shorter axis. The widest Gaussians in the suites, `e^{−x²/4}`, are
    /// near `1e−11` at `x = 10`.
    pub fn default_for(n: usize) -> Result<Self> {
        let (nodes, length) = default_layout(n)?;
        Self::composite(n, nodes, length)
    }

    /// Composite grid with `nodes` per axis and the length the default layout
    /// would give that many nodes (`L ∝ √nodes`, keeping `J(xy)` resolved).
    pub fn scaled_default(n: usize, nodes: usize) -> Result<Self> {
        let (base_nodes, base_length) = default_layout(n)?;
        let length = base_length * (nodes as f64 / base_nodes as f64).sqrt();
        Self::composite(n, nodes, length)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    /// Multi-index of a flat index.
    pub fn unravel(&self, mut flat: usize, idx: &mut [usize]) {
        for d in (0..self.dim()).rev() {
            idx[d] = flat % self.shape[d];
            flat /= self.shape[d];
        }
    }

    /// Coordinates of the node with flat index `flat`.
    pub fn point(&self, mut flat: usize, x: &mut [f64]) {
        for d in (0..self.dim()).rev() {
            x[d] = self.axes[d].nodes[flat % self.shape[d]];
            flat /= self.shape[d];
        }
    }

    /// Tensor quadrature weight of the node with flat index `flat`.
    pub fn weight(&self, mut flat: usize) -> f64 {
        let mut w = 1.0;
        for d in (0..self.dim()).rev() {
            w *= self.axes[d].weights[flat % self.shape[d]];
            flat /= self.shape[d];
        }
        w
    }

    /// Calls `f(flat, x, w)` for every node in flat order.
    pub fn for_each_node(&self, mut f: impl FnMut(usize, &[f64], f64)) {
        let mut x = vec![0.0; self.dim()];
        for flat in 0..self.len() {
            self.point(flat, &mut x);
            f(flat, &x, self.weight(flat));
        }
    }

    /// Smallest node over all axes.
    pub fn first_node(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| a.nodes[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check_mu(&self, mu: &MuVector) -> Result<()> {
        if mu.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: mu.dim(),
            });
        }
        Ok(())
    }
}

/// Complex samples of a function on a grid, optionally remembering its
/// tensor-product factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFn {
    grid: Arc<TensorGrid>,
    values: Vec<Complex64>,
    factors: Option<Vec<Vec<Complex64>>>,
}

impl SampledFn {
    pub fn new(grid: Arc<TensorGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(SampledFn {
            grid,
            values,
            factors: None,
        })
    }

    pub fn zeros(grid: Arc<TensorGrid>) -> Self {
        let factors = grid
            .shape()
            .iter()
            .map(|&n| vec![Complex64::new(0.0, 0.0); n])
            .collect();
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        SampledFn {
            grid,
            values,
            factors: Some(factors),
        }
    }

    pub fn from_fn(grid: Arc<TensorGrid>, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        grid.for_each_node(|_, x, _| values.push(f(x)));
        SampledFn {
            grid,
            values,
            factors: None,
        }
    }

    pub fn from_real_fn(grid: Arc<TensorGrid>, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// Tensor product `Π_i g_i(x_i)` from per-axis factor samples.
    pub fn separable(grid: Arc<TensorGrid>, factors: Vec<Vec<Complex64>>) -> Result<Self> {
        if factors.len() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                found: factors.len(),
            });
        }
        for (d, fac) in factors.iter().enumerate() {
            if fac.len() != grid.shape()[d] {
                return Err(Error::DimensionMismatch {
                    expected: grid.shape()[d],
                    found: fac.len(),
                });
            }
        }
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut idx = vec![0; grid.dim()];
        for (flat, v) in values.iter_mut().enumerate() {
            grid.unravel(flat, &mut idx);
            *v = idx
                .iter()
                .enumerate()
                .map(|(d, &i)| factors[d][i])
                .product();
        }
        Ok(SampledFn {
            grid,
            values,
            factors: Some(factors),
        })
    }

    /// Tensor product from a per-axis closure `g(axis, x_axis)`.
    pub fn separable_fn(grid: Arc<TensorGrid>, mut g: impl FnMut(usize, f64) -> Complex64) -> Self {
        let factors = grid
            .axes()
            .iter()
            .enumerate()
            .map(|(d, a)| a.nodes().iter().map(|&x| g(d, x)).collect())
            .collect();
        Self::separable(grid, factors).expect("factor shapes follow the grid")
    }

    pub fn grid(&self) -> &Arc<TensorGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn factors(&self) -> Option<&[Vec<Complex64>]> {
        self.factors.as_deref()
    }

    /// Forget the factorization (e.g. before editing values in place).
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        self.factors = None;
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid(&self, other: &SampledFn) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid
    }

    pub fn check_grid(&self, grid: &TensorGrid) -> Result<()> {
        if core::ptr::eq(Arc::as_ptr(&self.grid), grid) || *self.grid == *grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let values = self.values.iter().map(|v| v * c).collect();
        let factors = self.factors.as_ref().map(|f| {
            let mut f = f.clone();
            for v in f[0].iter_mut() {
                *v *= c;
            }
            f
        });
        SampledFn {
            grid: self.grid.clone(),
            values,
            factors,
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    fn zip_with(
        &self,
        other: &SampledFn,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(SampledFn {
            grid: self.grid.clone(),
            values,
            factors: None,
        })
    }

    pub fn add(&self, other: &SampledFn) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SampledFn) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product; separable when both factors are.
    pub fn mul(&self, other: &SampledFn) -> Result<Self> {
        let mut out = self.zip_with(other, |a, b| a * b)?;
        if let (Some(f), Some(g)) = (&self.factors, &other.factors) {
            out.factors = Some(
                f.iter()
                    .zip(g)
                    .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).collect())
                    .collect(),
            );
        }
        Ok(out)
    }

    /// Multiply by `m(x)`; drops the factorization.
    pub fn mul_fn(&self, mut m: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = self.values.clone();
        self.grid.for_each_node(|flat, x, _| values[flat] *= m(x));
        SampledFn {
            grid: self.grid.clone(),
            values,
            factors: None,
        }
    }

    /// Multiply by the tensor product `Π_i m(i, x_i)`; keeps the factorization.
    pub fn mul_separable(&self, mut m: impl FnMut(usize, f64) -> f64) -> Self {
        self.mul_separable_indexed(|d, _, x| m(d, x))
    }

    /// Multiply by `Π_i m(i, k_i, x_i)` where `k_i` is the node index on axis `i`.
    pub fn mul_separable_indexed(&self, mut m: impl FnMut(usize, usize, f64) -> f64) -> Self {
        let per_axis: Vec<Vec<f64>> = self
            .grid
            .axes()
            .iter()
            .enumerate()
            .map(|(d, a)| {
                a.nodes()
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| m(d, k, x))
                    .collect()
            })
            .collect();
        let mut values = self.values.clone();
        let mut idx = vec![0; self.grid.dim()];
        for (flat, v) in values.iter_mut().enumerate() {
            self.grid.unravel(flat, &mut idx);
            *v *= idx
                .iter()
                .enumerate()
                .map(|(d, &i)| per_axis[d][i])
                .product::<f64>();
        }
        let factors = self.factors.as_ref().map(|f| {
            f.iter()
                .zip(&per_axis)
                .map(|(fac, w)| fac.iter().zip(w).map(|(v, c)| v * c).collect())
                .collect()
        });
        SampledFn {
            grid: self.grid.clone(),
            values,
            factors,
        }
    }

    /// Multiply by `x^{aμ+b} = Π x_i^{aμ_i+b}`.
    pub fn mul_power(&self, mu: &MuVector, a: f64, b: f64) -> Self {
        self.mul_separable(|d, x| x.powf(a * mu.get(d) + b))
    }

    /// `r·f = x^{−μ−1/2} f`.
    pub fn times_r(&self, mu: &MuVector) -> Self {
        self.mul_power(mu, -1.0, -0.5)
    }

    /// `r⁻¹·f = x^{μ+1/2} f`.
    pub fn times_r_inv(&self, mu: &MuVector) -> Self {
        self.mul_power(mu, 1.0, 0.5)
    }

    pub fn map(&self, mut op: impl FnMut(Complex64) -> Complex64) -> Self {
        let values = self.values.iter().map(|&v| op(v)).collect();
        SampledFn {
            grid: self.grid.clone(),
            values,
            factors: None,
        }
    }

    /// Grid maximum of `|f|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Grid maximum of `|f − g|`.
    pub fn max_abs_diff(&self, other: &SampledFn) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    /// Grid maximum of `|f − g|` over nodes where `keep(x)` holds.
    pub fn max_abs_diff_where(
        &self,
        other: &SampledFn,
        keep: impl Fn(&[f64]) -> bool,
    ) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let mut worst: f64 = 0.0;
        self.grid.for_each_node(|flat, x, _| {
            if keep(x) {
                worst = worst.max((self.values[flat] - other.values[flat]).norm());
            }
        });
        Ok(worst)
    }

    /// `∫ f dx` by the grid rule.
    pub fn integral(&self) -> Complex64 {
        let mut acc = Neumaier::default();
        self.grid
            .for_each_node(|flat, _, w| acc.add(self.values[flat] * w));
        acc.total()
    }

    /// Bilinear pairing `∫ f g dx`.
    pub fn pairing(&self, other: &SampledFn) -> Result<Complex64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let mut acc = Neumaier::default();
        self.grid
            .for_each_node(|flat, _, w| acc.add(self.values[flat] * other.values[flat] * w));
        Ok(acc.total())
    }

    /// Check that the stored factors reproduce the values (relative to the sup).
    pub fn factor_residual(&self) -> Option<f64> {
        let factors = self.factors.as_ref()?;
        let rebuilt = SampledFn::separable(self.grid.clone(), factors.clone()).ok()?;
        let scale = self.sup_norm().max(f64::MIN_POSITIVE);
        Some(rebuilt.max_abs_diff(self).ok()? / scale)
    }
}

/// Compensated summation, so pairings do not depend on magnitudes cancelling
/// in a lucky order.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: Complex64,
    comp: Complex64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, v: Complex64) {
        self.sum.re = two_sum(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, v.im, &mut self.comp.im);
    }

    pub(crate) fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn two_sum(s: f64, v: f64, comp: &mut f64) -> f64 {
    let t = s + v;
    if s.abs() >= v.abs() {
        *comp += (s - t) + v;
    } else {
        *comp += (v - t) + s;
    }
    t
}

fn check_point(x: &[f64]) -> Result<()> {
    for &xi in x {
        if !(xi > 0.0) {
            return Err(Error::Domain {
                what: "coordinate must be positive",
                value: xi,
            });
        }
    }
    Ok(())
}

/// `s(x) = x^{2μ+1} / C_μ`.
pub fn weight_s(mu: &MuVector, x: &[f64]) -> Result<f64> {
    check_point(x)?;
    if x.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: x.len(),
        });
    }
    Ok(mu.power(x, 2.0, 1.0) / mu.c_mu())
}

/// `r(x) = x^{−μ−1/2}`.
pub fn weight_r(mu: &MuVector, x: &[f64]) -> Result<f64> {
    check_point(x)?;
    if x.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: x.len(),
        });
    }
    Ok(mu.power(x, -1.0, -0.5))
}

/// `‖f‖_{L^p(s r^p)} = (∫ |f|^p s r^p dx)^{1/p}`.
pub fn norm_weighted_lp(f: &SampledFn, mu: &MuVector, p: f64) -> Result<f64> {
    if !(p >= 1.0) || p.is_infinite() {
        return Err(Error::Domain {
            what: "exponent p must lie in [1, ∞)",
            value: p,
        });
    }
    f.grid().check_mu(mu)?;
    // s r^p = x^{(2−p)μ + 1 − p/2} / C_μ
    let (a, b) = (2.0 - p, 1.0 - 0.5 * p);
    let mut acc = 0.0;
    f.grid().for_each_node(|flat, x, w| {
        let v = f.values()[flat].norm();
        if v != 0.0 {
            acc += v.powf(p) * mu.power(x, a, b) * w;
        }
    });
    Ok((acc / mu.c_mu()).powf(1.0 / p))
}

/// `‖f‖_{L^∞(r)}`: grid maximum of `|r f|`.
pub fn norm_weighted_linf(f: &SampledFn, mu: &MuVector) -> Result<f64> {
    f.grid().check_mu(mu)?;
    let mut worst: f64 = 0.0;
    f.grid().for_each_node(|flat, x, _| {
        worst = worst.max(f.values()[flat].norm() * mu.power(x, -1.0, -0.5));
    });
    Ok(worst)
}

/// `‖f‖_{L¹(s)} = ∫ |f| s dx`.
pub fn norm_l1_s(f: &SampledFn, mu: &MuVector) -> Result<f64> {
    f.grid().check_mu(mu)?;
    let mut acc = 0.0;
    f.grid()
        .for_each_node(|flat, x, w| acc += f.values()[flat].norm() * mu.power(x, 2.0, 1.0) * w);
    Ok(acc / mu.c_mu())
}

/// `‖f‖_Y = max(‖f‖_{L¹(sr)}, ‖f‖_{L^∞(r)})`.
pub fn norm_y(f: &SampledFn, mu: &MuVector) -> Result<f64> {
    Ok(norm_weighted_lp(f, mu, 1.0)?.max(norm_weighted_linf(f, mu)?))
}

/// `‖f‖_Z = max(‖f‖_{L¹(s)}, ‖f‖_{L^∞})`.
pub fn norm_z(f: &SampledFn, mu: &MuVector) -> Result<f64> {
    f.grid().check_mu(mu)?;
    Ok(norm_l1_s(f, mu)?.max(f.sup_norm()))
}

/// Apply `op` to every line of `values` along `axis`, producing lines of
/// length `out_len`.
pub(crate) fn map_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    out_len: usize,
    mut op: impl FnMut(&[Complex64], &mut [Complex64]),
) -> Vec<Complex64> {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * out_len * inner];
    let mut line = vec![Complex64::new(0.0, 0.0); len];
    let mut result = vec![Complex64::new(0.0, 0.0); out_len];
    for o in 0..outer {
        for i in 0..inner {
            for k in 0..len {
                line[k] = values[(o * len + k) * inner + i];
            }
            op(&line, &mut result);
            for k in 0..out_len {
                out[(o * out_len + k) * inner + i] = result[k];
            }
        }
    }
    out
}

/// Variable in which local polynomial fits are made.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitVariable {
    /// Fit in `x`.
    X,
    /// Fit in `t = x²`; then `x⁻¹ ∂_x = 2 ∂_t` needs no division by `x`.
    XSquared,
}

/// Local polynomial fitting parameters for finite differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Nearest nodes in each fit; the fitted degree is `points − 1`.
    pub points: usize,
    /// The fit window is widened until it spans at least this half-width,
    /// which keeps the clustered nodes near the origin from amplifying roundoff.
    pub min_half_width: f64,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions {
            points: 11,
            min_half_width: 0.05,
        }
    }
}

/// Weights `(start, row)` such that the `order`-th derivative in the fit
/// variable at node `i` is `Σ_k row[k] f[start + k]`.
pub(crate) fn fd_rows(
    axis: &Axis,
    var: FitVariable,
    order: usize,
    opts: FdOptions,
) -> Vec<(usize, Vec<f64>)> {
    let ts: Vec<f64> = match var {
        FitVariable::X => axis.nodes().to_vec(),
        FitVariable::XSquared => axis.nodes().iter().map(|x| x * x).collect(),
    };
    let n = ts.len();
    let points = opts.points.clamp(order + 2, n);
    (0..n)
        .map(|i| {
            let (mut lo, mut hi) = (i, i + 1);
            let width = |lo: usize, hi: usize| (ts[i] - ts[lo]).max(ts[hi - 1] - ts[i]);
            while hi - lo < n && (hi - lo < points || width(lo, hi) < opts.min_half_width) {
                let left = if lo > 0 {
                    ts[i] - ts[lo - 1]
                } else {
                    f64::INFINITY
                };
                let right = if hi < n {
                    ts[hi] - ts[i]
                } else {
                    f64::INFINITY
                };
                if left <= right {
                    lo -= 1;
                } else {
                    hi += 1;
                }
            }
            // Clustered windows are thinned to the nodes nearest to the
            // Chebyshev points of the window, which keeps the fit well
            // conditioned without losing resolution.
            let (a, b) = (ts[lo], ts[hi - 1]);
            let mut chosen: Vec<usize> = (0..points)
                .map(|k| {
                    let c = 0.5 * (a + b)
                        - 0.5
                            * (b - a)
                            * (core::f64::consts::PI * k as f64 / (points - 1) as f64).cos();
                    let j = lo + ts[lo..hi].partition_point(|&t| t < c);
                    if j > lo && (j == hi || c - ts[j - 1] < ts[j] - c) {
                        j - 1
                    } else {
                        j
                    }
                })
                .collect();
            chosen.push(i);
            chosen.sort_unstable();
            chosen.dedup();
            let gap = (b - a) / (points * points) as f64;
            chosen.retain(|&j| j == i || (ts[j] - ts[i]).abs() >= gap);
            let sub: Vec<f64> = chosen.iter().map(|&j| ts[j]).collect();
            let degree = (points - 1).min(sub.len() - 1);
            let w = fit_weights(&sub, ts[i], degree, order);
            let mut row = vec![0.0; hi - lo];
            for (&j, wj) in chosen.iter().zip(w) {
                row[j - lo] = wj;
            }
            (lo, row)
        })
        .collect()
}

/// Least-squares polynomial fit weights for the `order`-th derivative at
/// `centre`, via modified Gram–Schmidt (applied twice) on the scaled
/// Vandermonde matrix.
fn fit_weights(ts: &[f64], centre: f64, degree: usize, order: usize) -> Vec<f64> {
    let m = ts.len();
    let p = (degree + 1).min(m);
    let h = ts.iter().map(|t| (t - centre).abs()).fold(0.0, f64::max);
    let s: Vec<f64> = ts.iter().map(|t| (t - centre) / h).collect();
    let mut q: Vec<Vec<f64>> = (0..p)
        .map(|c| s.iter().map(|v| v.powi(c as i32)).collect())
        .collect();
    let mut r = vec![vec![0.0; p]; p];
    for c in 0..p {
        for _ in 0..2 {
            for k in 0..c {
                let dot: f64 = q[c].iter().zip(&q[k]).map(|(a, b)| a * b).sum();
                r[k][c] += dot;
                let (head, tail) = q.split_at_mut(c);
                for (a, b) in tail[0].iter_mut().zip(&head[k]) {
                    *a -= dot * b;
                }
            }
        }
        let norm = q[c].iter().map(|a| a * a).sum::<f64>().sqrt();
        r[c][c] = norm;
        for a in q[c].iter_mut() {
            *a /= norm;
        }
    }
    // R^T y = e_order, weights = Q y
    let mut y = vec![0.0; p];
    for row in 0..p {
        let rhs = if row == order { 1.0 } else { 0.0 };
        let acc: f64 = (0..row).map(|k| r[k][row] * y[k]).sum();
        y[row] = (rhs - acc) / r[row][row];
    }
    let factorial: f64 = (1..=order).map(|k| k as f64).product();
    let scale = factorial / h.powi(order as i32);
    (0..m)
        .map(|k| scale * (0..p).map(|c| q[c][k] * y[c]).sum::<f64>())
        .collect()
}

/// `order`-th derivative along axis `j` in the chosen fit variable.
pub fn derivative_along(
    f: &SampledFn,
    j: usize,
    order: usize,
    var: FitVariable,
    opts: FdOptions,
) -> Result<SampledFn> {
    let grid = f.grid().clone();
    if j >= grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            found: j + 1,
        });
    }
    let axis = grid.axis(j);
    if axis.len() < 5 {
        return Err(Error::TooFewNodes {
            axis: j,
            nodes: axis.len(),
            needed: 5,
        });
    }
    let rows = fd_rows(axis, var, order, opts);
    let values = map_axis(f.values(), grid.shape(), j, axis.len(), |line, out| {
        for (o, (start, row)) in out.iter_mut().zip(&rows) {
            *o = row.iter().zip(&line[*start..]).map(|(c, v)| v * c).sum();
        }
    });
    SampledFn::new(grid, values)
}

/// `T_j f = x_j⁻¹ ∂f/∂x_j`, by local polynomial fits in `x_j²`.
#[allow(non_snake_case)]
pub fn apply_T(f: &SampledFn, j: usize) -> Result<SampledFn> {
    apply_T_with(f, j, FdOptions::default())
}

#[allow(non_snake_case)]
pub fn apply_T_with(f: &SampledFn, j: usize, opts: FdOptions) -> Result<SampledFn> {
    Ok(derivative_along(f, j, 1, FitVariable::XSquared, opts)?.scale_real(2.0))
}

/// Largest total derivative order accepted by [`seminorm_gamma`].
pub const MAX_SEMINORM_ORDER: usize = 4;

/// `γ_{m,k}(f) = sup |x^m T^k (r f)|` over the grid.
pub fn seminorm_gamma(f: &SampledFn, mu: &MuVector, m: &[u32], k: &[u32]) -> Result<f64> {
    let grid = f.grid().clone();
    grid.check_mu(mu)?;
    if m.len() != grid.dim() || k.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            found: m.len().min(k.len()),
        });
    }
    let total: usize = k.iter().map(|&v| v as usize).sum();
    if total > MAX_SEMINORM_ORDER {
        return Err(Error::UnsupportedOrder {
            order: total,
            max: MAX_SEMINORM_ORDER,
        });
    }
    let mut g = f.times_r(mu);
    for (j, &kj) in k.iter().enumerate() {
        for _ in 0..kj {
            g = apply_T(&g, j)?;
        }
    }
    let g = g.mul_separable(|d, x| x.powi(m[d] as i32));
    Ok(g.sup_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::{gamma_real, gaussian_moment};

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn mu_vector_validation() {
        assert!(MuVector::new(vec![]).is_err());
        assert!(matches!(
            MuVector::new(vec![0.2, -0.5]),
            Err(Error::InvalidOrder { index: 1, .. })
        ));
        assert!(MuVector::new(vec![f64::NAN]).is_err());
        let mu = MuVector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(mu.c_mu(), 2.0);
        assert_eq!(mu.shifted_sum(), 3.0);
    }

    #[test]
    fn weights_match_examples() {
        let mu0 = MuVector::scalar(0.0).unwrap();
        assert_eq!(weight_s(&mu0, &[1.0]).unwrap(), 1.0);
        assert_eq!(weight_r(&mu0, &[1.0]).unwrap(), 1.0);
        assert_eq!(weight_r(&mu0, &[4.0]).unwrap(), 0.5);
        let mu00 = MuVector::new(vec![0.0, 0.0]).unwrap();
        assert!((weight_s(&mu00, &[2.0, 3.0]).unwrap() - 6.0).abs() < 1e-15);
        let mu_half = MuVector::scalar(0.5).unwrap();
        let want = 4.0 / (2f64.sqrt() * gamma_real(1.5));
        assert!((weight_s(&mu_half, &[2.0]).unwrap() - want).abs() < 1e-14);
        assert!(weight_s(&mu0, &[0.0]).is_err());
        assert!(weight_r(&mu00, &[1.0, -2.0]).is_err());
        // r s = C_μ^{-1} r^{-1}
        let mu = MuVector::new(vec![0.3, 0.7]).unwrap();
        for x in [[0.5, 2.0], [1.3, 0.2], [7.0, 3.5]] {
            let (r, s) = (weight_r(&mu, &x).unwrap(), weight_s(&mu, &x).unwrap());
            assert!((r * s - 1.0 / (mu.c_mu() * r)).abs() < 1e-14 * (r * s));
        }
    }

    #[test]
    fn composite_axis_integrates_weighted_gaussians() {
        let axis = Axis::composite(128, 12.0).unwrap();
        assert_eq!(axis.len(), 128);
        assert!(axis.nodes().windows(2).all(|w| w[0] < w[1]) && axis.nodes()[0] > 0.0);
        for &m in &[-0.3, 0.0, 0.25, 1.5] {
            let got: f64 = axis
                .nodes()
                .iter()
                .zip(axis.weights())
                .map(|(x, w)| w * (-x * x / 2.0).exp() * x.powf(2.0 * m + 1.0))
                .sum();
            let want = gaussian_moment(m, 1.0);
            assert!(
                (got - want).abs() < 1e-12 * want,
                "μ = {m}: {got} vs {want}"
            );
        }
        assert!(Axis::composite(7, 12.0).is_err());
        assert!(Axis::new(vec![1.0; 8], vec![1.0; 8]).is_err());
    }

    #[test]
    fn norms_match_examples() {
        let grid = Arc::new(TensorGrid::default_for(1).unwrap());
        let mu = MuVector::scalar(0.0).unwrap();
        let zero = SampledFn::zeros(grid.clone());
        assert_eq!(norm_weighted_lp(&zero, &mu, 1.0).unwrap(), 0.0);
        assert_eq!(norm_weighted_linf(&zero, &mu).unwrap(), 0.0);
        assert_eq!(norm_y(&zero, &mu).unwrap(), 0.0);
        assert_eq!(norm_z(&zero, &mu).unwrap(), 0.0);
        assert!(norm_weighted_lp(&zero, &mu, 0.5).is_err());

        let g = SampledFn::from_real_fn(grid.clone(), |x| (-x[0] * x[0] / 2.0).exp());
        let want = (core::f64::consts::PI.sqrt() / 2.0).sqrt();
        assert!((norm_weighted_lp(&g, &mu, 2.0).unwrap() - want).abs() < 1e-12);

        for m in [0.0, 0.25, 2.0] {
            let mu = MuVector::scalar(m).unwrap();
            let e = SampledFn::from_real_fn(grid.clone(), |x| {
                x[0].powf(m + 0.5) * (-x[0] * x[0] / 2.0).exp()
            });
            let linf = norm_weighted_linf(&e, &mu).unwrap();
            assert!(linf <= 1.0 && linf > 1.0 - 1e-12);
            let power = SampledFn::from_real_fn(grid.clone(), |x| x[0].powf(m + 0.5));
            assert!((norm_weighted_linf(&power, &mu).unwrap() - 1.0).abs() < 1e-14);
            // ‖e_μ‖_{L¹(sr)} = ∫ e^{−x²/2} x^{2μ+1} dx / C_μ = 1
            let l1 = norm_weighted_lp(&e, &mu, 1.0).unwrap();
            assert!((l1 - gaussian_moment(m, 1.0) / mu.c_mu()).abs() < 1e-12);
            assert!((norm_y(&e, &mu).unwrap() - l1.max(linf)).abs() < 1e-15);
        }
    }

    #[test]
    fn norm_z_of_rf_equals_norm_y() {
        let grid = Arc::new(TensorGrid::composite(2, 32, 10.0).unwrap());
        let mu = MuVector::new(vec![0.3, 0.7]).unwrap();
        let f = SampledFn::from_fn(grid, |x| {
            Complex64::new((x[0] - x[1]).sin(), x[0] * 0.1) * (-(x[0] * x[0] + x[1] * x[1])).exp()
        });
        let y = norm_y(&f, &mu).unwrap();
        let z = norm_z(&f.times_r(&mu), &mu).unwrap();
        assert!((y - z).abs() <= 1e-14 * y);
    }

    #[test]
    fn separable_factors_reproduce_values() {
        let grid = Arc::new(TensorGrid::composite(2, 16, 6.0).unwrap());
        let f = SampledFn::separable_fn(grid.clone(), |d, x| c((d as f64 + 1.0) * x).exp());
        assert!(f.factor_residual().unwrap() < 1e-13);
        let g = f
            .mul_separable(|_, x| x.sqrt())
            .scale(Complex64::new(0.0, 2.0));
        assert!(g.factor_residual().unwrap() < 1e-13);
        let direct = SampledFn::from_fn(grid, |x| {
            Complex64::new(0.0, 2.0) * (x[0] + 2.0 * x[1]).exp() * (x[0] * x[1]).sqrt()
        });
        assert!(g.max_abs_diff(&direct).unwrap() < 1e-13 * direct.sup_norm());
    }

    #[test]
    fn t_operator_examples() {
        let grid = Arc::new(TensorGrid::composite(2, 48, 10.0).unwrap());
        let sq = SampledFn::from_real_fn(grid.clone(), |x| x[0] * x[0] + x[1] * x[1]);
        for j in 0..2 {
            let t = apply_T(&sq, j).unwrap();
            assert!(t.values().iter().all(|v| (v - c(2.0)).norm() < 1e-9));
        }
        let grid1 = Arc::new(TensorGrid::default_for(1).unwrap());
        let g = SampledFn::from_real_fn(grid1.clone(), |x| (-x[0] * x[0] / 2.0).exp());
        let t = apply_T(&g, 0).unwrap();
        assert!(t.max_abs_diff(&g.scale_real(-1.0)).unwrap() < 1e-6);

        let tiny = Axis::new((1..=8).map(f64::from).collect(), vec![1.0; 8]).unwrap();
        let few = TensorGrid::new(vec![tiny]).unwrap();
        assert_eq!(few.len(), 8);
    }

    #[test]
    fn leibniz_rule_for_t_squared() {
        let grid = Arc::new(TensorGrid::default_for(1).unwrap());
        let theta = SampledFn::from_real_fn(grid.clone(), |x| (-x[0] * x[0] / 2.0).exp());
        let phi = SampledFn::from_real_fn(grid.clone(), |x| x[0] * x[0]);
        let t = |f: &SampledFn| apply_T(f, 0).unwrap();
        let lhs = t(&t(&theta.mul(&phi).unwrap()));
        let rhs = t(&t(&theta))
            .mul(&phi)
            .unwrap()
            .add(&t(&theta).mul(&t(&phi)).unwrap().scale_real(2.0))
            .unwrap()
            .add(&theta.mul(&t(&t(&phi))).unwrap())
            .unwrap();
        let keep = |x: &[f64]| x[0] < 8.0;
        assert!(lhs.max_abs_diff_where(&rhs, keep).unwrap() < 1e-4);
    }

    #[test]
    fn seminorm_examples() {
        let grid = Arc::new(TensorGrid::composite(2, 48, 12.0).unwrap());
        let mu = MuVector::new(vec![0.3, 0.7]).unwrap();
        let power = SampledFn::from_real_fn(grid.clone(), |x| mu.power(x, 1.0, 0.5));
        assert!((seminorm_gamma(&power, &mu, &[0, 0], &[0, 0]).unwrap() - 1.0).abs() < 1e-14);
        let e = SampledFn::separable_fn(grid.clone(), |d, x| {
            c(x.powf(mu.get(d) + 0.5) * (-x * x / 2.0).exp())
        });
        let g00 = seminorm_gamma(&e, &mu, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(g00, norm_weighted_linf(&e, &mu).unwrap());
        // sup x³ e^{−x²/2} = (3/e)^{3/2} per axis
        let g33 = seminorm_gamma(&e, &mu, &[3, 3], &[0, 0]).unwrap();
        let want = (3.0 / core::f64::consts::E).powf(1.5).powi(2);
        assert!(g33 <= want && g33 > want * (1.0 - 2e-2));
        assert!(matches!(
            seminorm_gamma(&e, &mu, &[0, 0], &[3, 2]),
            Err(Error::UnsupportedOrder { order: 5, max: 4 })
        ));
        // T^k e^{−x²/2} = (−1)^k e^{−x²/2}: γ_{0,(1,1)} = 1 (attained near the origin)
        let g11 = seminorm_gamma(&e, &mu, &[0, 0], &[1, 1]).unwrap();
        assert!((g11 - 1.0).abs() < 1e-6, "{g11}");
    }

    #[test]
    fn derivative_on_short_axis_is_rejected() {
        let axis = Axis::new((1..=8).map(f64::from).collect(), vec![1.0; 8]).unwrap();
        let grid = Arc::new(TensorGrid::new(vec![axis]).unwrap());
        let f = SampledFn::from_real_fn(grid, |x| x[0]);
        assert!(apply_T(&f, 0).is_ok());
        assert!(apply_T(&f, 1).is_err());
    }
}
