//! Delsarte kernels `D_α`, `𝔇_α` and the Hankel convolutions `♯` and `#`.
//!
//! Substituting `w² = u² + v² − 2uv·t` turns both inner integrals into
//! generalized translations
//!
//! ```text
//! T_{u,v}[ψ] = Γ(α+1)/(Γ(α+1/2)√π) ∫_{−1}^{1} ψ(w(t)) (1 − t²)^{α−1/2} dt,
//! ∫ D_α(u,v,w) w^{α+1/2} ψ(w) dw = C_α⁻¹ (uv)^{α+1/2} T_{u,v}[ψ],
//! ∫ 𝔇_α(u,v,w) g(w) s_α(w) dw   = T_{u,v}[g],
//! ```
//!
//! so the endpoint factor `A^{2α−1}` becomes the Gauss–Jacobi weight with
//! both exponents `α − 1/2`. The translated factor is interpolated from its
//! grid samples (it should be the smoother operand); the other factor is
//! integrated on the grid nodes.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use crate::interp::{basis_row, interpolate_tensor};
use crate::quadrature::gauss_jacobi;
use crate::special_fn::{c_alpha, gamma_real};
use crate::weighted_spaces::{
    map_axis, norm_l1_s, norm_weighted_linf, norm_weighted_lp, MuVector, SampledFn, TensorGrid,
};
use crate::{Complex64, Error, Result};

/// Jacobi nodes per inner integral.
pub const DEFAULT_INNER_NODES: usize = 48;

/// Largest axis a [`ConvPlan`] accepts (its tables hold `N³` entries per axis).
pub const MAX_CONV_NODES: usize = 256;

/// Work cap (multiply-adds) for convolving two non-separable functions.
const DENSE_WORK_LIMIT: f64 = 4e9;

/// The sides `u, v` of a triangle and the admissible range of the third side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSupport {
    pub u: f64,
    pub v: f64,
    pub lo: f64,
    pub hi: f64,
}

impl TriangleSupport {
    pub fn new(u: f64, v: f64) -> Self {
        TriangleSupport {
            u,
            v,
            lo: (u - v).abs(),
            hi: u + v,
        }
    }

    pub fn contains(&self, w: f64) -> bool {
        w > self.lo && w < self.hi
    }
}

/// Area of the triangle with sides `u, v, w`; zero when no such triangle exists.
pub fn triangle_area(u: f64, v: f64, w: f64) -> f64 {
    let t = TriangleSupport::new(u, v);
    if !t.contains(w) {
        return 0.0;
    }
    0.25 * (((t.hi - w) * (t.hi + w)) * ((w - t.lo) * (w + t.lo))).sqrt()
}

/// `A^{2α−1}` on the support, zero off it, `NaN` outside the domain.
fn area_power(alpha: f64, u: f64, v: f64, w: f64) -> f64 {
    if !(alpha > -0.5 && u > 0.0 && v > 0.0 && w > 0.0) {
        return f64::NAN;
    }
    let t = TriangleSupport::new(u, v);
    if w < t.lo || w > t.hi {
        return 0.0;
    }
    // A = 0 at the ends of the support: ∞ for α < 1/2, 0 for α > 1/2
    triangle_area(u, v, w).powf(2.0 * alpha - 1.0)
}

/// Delsarte kernel `D_α(u,v,w) = 2^{α−1}(uvw)^{1/2−α} A^{2α−1} / (Γ(α+1/2)√π)`.
///
/// `NaN` for `α ≤ −1/2` or non-positive sides; infinite at the support's ends
/// when `α < 1/2`.
#[allow(non_snake_case)]
pub fn kernel_D(alpha: f64, u: f64, v: f64, w: f64) -> f64 {
    let a = area_power(alpha, u, v, w);
    if a == 0.0 || a.is_nan() {
        return a;
    }
    2f64.powf(alpha - 1.0) * (u * v * w).powf(0.5 - alpha) * a
        / (gamma_real(alpha + 0.5) * PI.sqrt())
}

/// Hirschman kernel `𝔇_α(u,v,w) = 2^{3α−1}Γ²(α+1)(uvw)^{−2α}A^{2α−1} / (Γ(α+1/2)√π)`.
#[allow(non_snake_case)]
pub fn kernel_frakD(alpha: f64, u: f64, v: f64, w: f64) -> f64 {
    let a = area_power(alpha, u, v, w);
    if a == 0.0 || a.is_nan() {
        return a;
    }
    let g = gamma_real(alpha + 1.0);
    2f64.powf(3.0 * alpha - 1.0) * g * g * (u * v * w).powf(-2.0 * alpha) * a
        / (gamma_real(alpha + 0.5) * PI.sqrt())
}

/// Which Delsarte kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Delsarte,
    Hirschman,
}

/// `∫ K(u,v,w) g(w) dw` over the triangle support by an `n`-point
/// Gauss–Jacobi rule in `w` with the factor `[(u+v−w)(w−|u−v|)]^{α−1/2}`
/// taken as the weight. Used as an independent check of the kernels.
pub fn kernel_integral(
    kind: KernelKind,
    alpha: f64,
    u: f64,
    v: f64,
    mut g: impl FnMut(f64) -> f64,
    n: usize,
) -> f64 {
    let t = TriangleSupport::new(u, v);
    let (c, h) = (0.5 * (t.hi + t.lo), 0.5 * (t.hi - t.lo));
    let (constant, power) = match kind {
        KernelKind::Delsarte => (
            2f64.powf(alpha - 1.0) / (gamma_real(alpha + 0.5) * PI.sqrt()),
            0.5 - alpha,
        ),
        KernelKind::Hirschman => {
            let gm = gamma_real(alpha + 1.0);
            (
                2f64.powf(3.0 * alpha - 1.0) * gm * gm / (gamma_real(alpha + 0.5) * PI.sqrt()),
                -2.0 * alpha,
            )
        }
    };
    if t.lo == 0.0 {
        // u = v closes the support at w = 0; w = hi·τ² makes half-integer
        // powers of w regular and leaves a Jacobi weight in τ
        let k = if kind == KernelKind::Hirschman {
            1.0
        } else {
            0.0
        };
        let b = 4.0 * alpha - 1.0 + 2.0 * power + 2.0 * k;
        let rule = gauss_jacobi(n, alpha - 0.5, b);
        let mut acc = 0.0;
        for (&x, &wq) in rule.nodes.iter().zip(&rule.weights) {
            let tau = 0.5 * (1.0 + x);
            let rest = ((1.0 + tau) * (1.0 + tau * tau)).powf(alpha - 0.5);
            acc += wq * rest * tau.powf(-2.0 * k) * g(t.hi * tau * tau);
        }
        let scale = t.hi.powf(4.0 * alpha - 1.0 + power) * 2f64.powf(0.5 - alpha - b);
        return constant * 4f64.powf(1.0 - 2.0 * alpha) * (u * v).powf(power) * scale * acc;
    }
    let rule = gauss_jacobi(n, alpha - 0.5, alpha - 0.5);
    let mut acc = 0.0;
    for (&x, &wq) in rule.nodes.iter().zip(&rule.weights) {
        let w = c + h * x;
        let rest = ((t.hi + w) * (w + t.lo)).powf(alpha - 0.5);
        acc += wq * (u * v * w).powf(power) * rest * g(w);
    }
    constant * 4f64.powf(1.0 - 2.0 * alpha) * h.powf(2.0 * alpha) * acc
}

/// Normalisation `Γ(α+1)/(Γ(α+1/2)√π)` of the generalized translation.
fn translation_constant(alpha: f64) -> f64 {
    gamma_real(alpha + 1.0) / (gamma_real(alpha + 0.5) * PI.sqrt())
}

/// Per-axis translation tables for the convolutions on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvPlan {
    mu: MuVector,
    grid: Arc<TensorGrid>,
    inner_nodes: usize,
    /// `table[d][(x·N + y)·N + j]`: weight of the `j`-th sample in `T_{x,y}`.
    table: Vec<Vec<f64>>,
}

impl ConvPlan {
    pub fn new(mu: MuVector, grid: Arc<TensorGrid>) -> Result<Self> {
        Self::with_inner_nodes(mu, grid, DEFAULT_INNER_NODES)
    }

    pub fn with_inner_nodes(
        mu: MuVector,
        grid: Arc<TensorGrid>,
        inner_nodes: usize,
    ) -> Result<Self> {
        grid.check_mu(&mu)?;
        let mut table = Vec::with_capacity(mu.dim());
        for d in 0..mu.dim() {
            let axis = grid.axis(d);
            let n = axis.len();
            if n > MAX_CONV_NODES {
                return Err(Error::TooLarge {
                    nodes: n,
                    max: MAX_CONV_NODES,
                });
            }
            let alpha = mu.get(d);
            let rule = gauss_jacobi(inner_nodes, alpha - 0.5, alpha - 0.5);
            let c = translation_constant(alpha);
            let xs = axis.nodes();
            let mut t = vec![0.0; n * n * n];
            let mut row = vec![0.0; n];
            for ix in 0..n {
                for iy in ix..n {
                    let (x, y) = (xs[ix], xs[iy]);
                    let base = (ix * n + iy) * n;
                    for (&tq, &wq) in rule.nodes.iter().zip(&rule.weights) {
                        let w = ((x - y) * (x - y) + 2.0 * x * y * (1.0 - tq)).sqrt();
                        basis_row(axis, w, &mut row);
                        for (dst, r) in t[base..base + n].iter_mut().zip(&row) {
                            *dst += c * wq * r;
                        }
                    }
                    if iy != ix {
                        let mirror = (iy * n + ix) * n;
                        t.copy_within(base..base + n, mirror);
                    }
                }
            }
            table.push(t);
        }
        Ok(ConvPlan {
            mu,
            grid,
            inner_nodes,
            table,
        })
    }

    pub fn mu(&self) -> &MuVector {
        &self.mu
    }

    pub fn grid(&self) -> &Arc<TensorGrid> {
        &self.grid
    }

    pub fn inner_nodes(&self) -> usize {
        self.inner_nodes
    }

    /// `Σ_y F(y) Π_d T^d_{x_d,y_d}[G]` for node data `F` and interpolated `G`.
    fn translate(&self, node_side: &SampledFn, interp_side: &SampledFn) -> Result<SampledFn> {
        let grid = &self.grid;
        let shape = grid.shape();
        let zero = Complex64::new(0.0, 0.0);
        match (node_side.factors(), interp_side.factors()) {
            (Some(ff), Some(gf)) => {
                let factors = (0..grid.dim())
                    .map(|d| {
                        let n = shape[d];
                        let t = &self.table[d];
                        (0..n)
                            .map(|x| {
                                let mut acc = zero;
                                for y in 0..n {
                                    let row = &t[(x * n + y) * n..(x * n + y + 1) * n];
                                    let inner: Complex64 =
                                        row.iter().zip(&gf[d]).map(|(c, g)| g * c).sum();
                                    acc += ff[d][y] * inner;
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect();
                SampledFn::separable(grid.clone(), factors)
            }
            (_, Some(gf)) => {
                // P_d[x][y] = T^d_{x,y}[g_d], swept over the node data
                let mut values = node_side.values().to_vec();
                for d in 0..grid.dim() {
                    let n = shape[d];
                    let t = &self.table[d];
                    let p: Vec<Complex64> = (0..n * n)
                        .map(|xy| {
                            t[xy * n..(xy + 1) * n]
                                .iter()
                                .zip(&gf[d])
                                .map(|(c, g)| g * c)
                                .sum()
                        })
                        .collect();
                    values = map_axis(&values, shape, d, n, |line, out| {
                        for (x, o) in out.iter_mut().enumerate() {
                            *o = p[x * n..(x + 1) * n]
                                .iter()
                                .zip(line)
                                .map(|(a, b)| a * b)
                                .sum();
                        }
                    });
                }
                SampledFn::new(grid.clone(), values)
            }
            (Some(ff), None) => {
                // B_d[x][j] = Σ_y F_d(y) T^d_{x,y,j}, swept over the interpolated data
                let mut values = interp_side.values().to_vec();
                for d in 0..grid.dim() {
                    let n = shape[d];
                    let t = &self.table[d];
                    let mut b = vec![zero; n * n];
                    for x in 0..n {
                        for y in 0..n {
                            let row = &t[(x * n + y) * n..(x * n + y + 1) * n];
                            for (dst, c) in b[x * n..(x + 1) * n].iter_mut().zip(row) {
                                *dst += ff[d][y] * c;
                            }
                        }
                    }
                    values = map_axis(&values, shape, d, n, |line, out| {
                        for (x, o) in out.iter_mut().enumerate() {
                            *o = b[x * n..(x + 1) * n]
                                .iter()
                                .zip(line)
                                .map(|(a, b)| a * b)
                                .sum();
                        }
                    });
                }
                SampledFn::new(grid.clone(), values)
            }
            (None, None) => {
                let len = grid.len() as f64;
                let work = len * shape.iter().map(|&n| n as f64 * len).sum::<f64>();
                if work > DENSE_WORK_LIMIT {
                    return Err(Error::TooLarge {
                        nodes: grid.len(),
                        max: (DENSE_WORK_LIMIT.sqrt()) as usize,
                    });
                }
                let mut out = vec![zero; grid.len()];
                let mut idx = vec![0; grid.dim()];
                for (flat, &fy) in node_side.values().iter().enumerate() {
                    if fy == zero {
                        continue;
                    }
                    grid.unravel(flat, &mut idx);
                    let mut values = interp_side.values().to_vec();
                    for d in 0..grid.dim() {
                        let n = shape[d];
                        let y = idx[d];
                        let t = &self.table[d];
                        values = map_axis(&values, shape, d, n, |line, out| {
                            for (x, o) in out.iter_mut().enumerate() {
                                let row = &t[(x * n + y) * n..(x * n + y + 1) * n];
                                *o = row.iter().zip(line).map(|(c, v)| v * c).sum();
                            }
                        });
                    }
                    for (o, v) in out.iter_mut().zip(values) {
                        *o += fy * v;
                    }
                }
                SampledFn::new(grid.clone(), out)
            }
        }
    }
}

/// `f ♯ g`. `f` is integrated on the grid nodes; `r·g` is interpolated, so
/// `g` should be the operand with the smoother `r·g`.
pub fn conv_sharp(f: &SampledFn, g: &SampledFn, plan: &ConvPlan) -> Result<SampledFn> {
    f.check_grid(&plan.grid)?;
    g.check_grid(&plan.grid)?;
    let mu = &plan.mu;
    let weights: Vec<&[f64]> = plan.grid.axes().iter().map(|a| a.weights()).collect();
    let node_side = f.mul_separable_indexed(|d, k, y| {
        weights[d][k] * y.powf(mu.get(d) + 0.5) / c_alpha(mu.get(d))
    });
    let out = plan.translate(&node_side, &g.times_r(mu))?;
    Ok(out.times_r_inv(mu))
}

/// `f # g`. `f` is integrated on the grid nodes; `g` is interpolated.
pub fn conv_hash(f: &SampledFn, g: &SampledFn, plan: &ConvPlan) -> Result<SampledFn> {
    f.check_grid(&plan.grid)?;
    g.check_grid(&plan.grid)?;
    let mu = &plan.mu;
    let weights: Vec<&[f64]> = plan.grid.axes().iter().map(|a| a.weights()).collect();
    let node_side = f.mul_separable_indexed(|d, k, y| {
        let m = mu.get(d);
        weights[d][k] * y.powf(2.0 * m + 1.0) / c_alpha(m)
    });
    plan.translate(&node_side, g)
}

/// `φ_m(x) = m^{|μ+1|} e^{−m‖x‖²/2}`, normalised in `L¹(s)`.
pub fn approx_identity(m: u32, mu: &MuVector, grid: Arc<TensorGrid>) -> Result<SampledFn> {
    grid.check_mu(mu)?;
    if m == 0 {
        return Err(Error::Domain {
            what: "mollifier index must be at least 1",
            value: 0.0,
        });
    }
    let mf = f64::from(m);
    Ok(SampledFn::separable_fn(grid, |d, x| {
        Complex64::new(mf.powf(mu.get(d) + 1.0) * (-mf * x * x / 2.0).exp(), 0.0)
    }))
}

/// `φ̃_m = x^{μ+1/2} φ_m`, normalised in `L¹(sr)`.
pub fn approx_identity_sr(m: u32, mu: &MuVector, grid: Arc<TensorGrid>) -> Result<SampledFn> {
    Ok(approx_identity(m, mu, grid)?.times_r_inv(mu))
}

/// Exponent for [`young_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YoungExponent {
    /// `L^p(s r^p)`, `1 ≤ p < ∞`.
    Finite(f64),
    /// `L^∞(r)`.
    Infinity,
}

/// `(‖f♯g‖, ‖f‖_{L¹(sr)}·‖g‖)` in the norm selected by `p`.
pub fn young_bound_check(
    f: &SampledFn,
    g: &SampledFn,
    p: YoungExponent,
    plan: &ConvPlan,
) -> Result<(f64, f64)> {
    let conv = conv_sharp(f, g, plan)?;
    let mu = &plan.mu;
    let f1 = norm_weighted_lp(f, mu, 1.0)?;
    Ok(match p {
        YoungExponent::Finite(p) => (
            norm_weighted_lp(&conv, mu, p)?,
            f1 * norm_weighted_lp(g, mu, p)?,
        ),
        YoungExponent::Infinity => (
            norm_weighted_linf(&conv, mu)?,
            f1 * norm_weighted_linf(g, mu)?,
        ),
    })
}

/// `‖f # φ_m − f‖_{L¹(s)}` for each `m`.
pub fn approx_identity_convergence(
    f: &SampledFn,
    m_list: &[u32],
    plan: &ConvPlan,
) -> Result<Vec<f64>> {
    m_list
        .iter()
        .map(|&m| {
            let phi = approx_identity(m, &plan.mu, plan.grid.clone())?;
            norm_l1_s(&conv_hash(&phi, f, plan)?.sub(f)?, &plan.mu)
        })
        .collect()
}

/// `|f ♯ φ̃_m(x₀) − f(x₀)|` for each `m`, with values at `x₀` interpolated.
pub fn approx_identity_pointwise(
    f: &SampledFn,
    x0: &[f64],
    m_list: &[u32],
    plan: &ConvPlan,
) -> Result<Vec<f64>> {
    let mu = &plan.mu;
    if x0.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: x0.len(),
        });
    }
    let at = |h: &SampledFn| {
        interpolate_tensor(&plan.grid, h.times_r(mu).values(), x0) * mu.power(x0, 1.0, 0.5)
    };
    let target = at(f);
    m_list
        .iter()
        .map(|&m| {
            let phi = approx_identity_sr(m, mu, plan.grid.clone())?;
            Ok((at(&conv_sharp(&phi, f, plan)?) - target).norm())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{hankel_h, hankel_z, TransformPlan};
    use crate::quadrature::{integrate, QuadOptions};
    use crate::special_fn::{bessel_j, gaussian_hankel_pair};

    fn e_mu(grid: &Arc<TensorGrid>, mu: &MuVector, a: f64) -> SampledFn {
        SampledFn::separable_fn(grid.clone(), |d, x| {
            Complex64::new(x.powf(mu.get(d) + 0.5) * (-x * x / (2.0 * a)).exp(), 0.0)
        })
    }

    fn gauss(grid: &Arc<TensorGrid>, a: f64) -> SampledFn {
        SampledFn::separable_fn(grid.clone(), |_, x| {
            Complex64::new((-x * x / (2.0 * a)).exp(), 0.0)
        })
    }

    const LATTICE: [(f64, f64); 4] = [(0.4, 1.3), (1.0, 1.0), (2.2, 0.7), (3.1, 2.9)];

    #[test]
    fn triangle_area_examples() {
        assert!((triangle_area(3.0, 4.0, 5.0) - 6.0).abs() < 1e-14);
        assert_eq!(triangle_area(1.0, 1.0, 3.0), 0.0);
        assert!((triangle_area(1.0, 1.0, 1.0) - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(triangle_area(1.0, 2.0, 0.5), 0.0);
    }

    #[test]
    fn kernels_vanish_off_support_and_are_nonnegative() {
        for alpha in [0.0, 0.3, 1.2] {
            assert_eq!(kernel_D(alpha, 1.0, 1.0, 2.5), 0.0);
            assert_eq!(kernel_frakD(alpha, 1.0, 2.0, 0.5), 0.0);
            for (u, v) in LATTICE {
                let t = TriangleSupport::new(u, v);
                for k in 1..20 {
                    let w = t.lo + (t.hi - t.lo) * k as f64 / 20.0;
                    assert!(kernel_D(alpha, u, v, w) >= 0.0);
                    assert!(kernel_frakD(alpha, u, v, w) > 0.0);
                }
            }
        }
        assert!(kernel_D(0.2, 1.0, 2.0, 1.0).is_infinite());
        assert!(kernel_D(-0.6, 1.0, 2.0, 1.5).is_nan());
    }

    #[test]
    fn kernel_relation_with_corrected_exponent() {
        // D_α = C_α^{−2} (uvw)^{α+1/2} 𝔇_α
        for alpha in [0.0, 0.3, 1.2, 2.5] {
            for (u, v) in LATTICE {
                let t = TriangleSupport::new(u, v);
                let w = t.lo + 0.37 * (t.hi - t.lo);
                let c = c_alpha(alpha);
                let via = (u * v * w).powf(alpha + 0.5) * kernel_frakD(alpha, u, v, w) / (c * c);
                let d = kernel_D(alpha, u, v, w);
                assert!((via - d).abs() <= 1e-12 * d, "α = {alpha}");
            }
        }
    }

    #[test]
    fn delsarte_moments_and_product_formula() {
        let unit = kernel_integral(KernelKind::Delsarte, 0.0, 1.0, 1.0, |w| w.sqrt(), 48);
        assert!((unit - 1.0).abs() < 1e-12, "{unit}");
        for alpha in [0.0, 0.3, 1.2] {
            for (u, v) in LATTICE {
                let got = kernel_integral(
                    KernelKind::Delsarte,
                    alpha,
                    u,
                    v,
                    |w| w.powf(alpha + 0.5),
                    48,
                );
                let want = (u * v).powf(alpha + 0.5) / c_alpha(alpha);
                assert!((got - want).abs() <= 1e-7 * want, "α = {alpha}, ({u}, {v})");
                for t in [0.5, 1.7, 4.0] {
                    let zj = |z: f64| (z * t).sqrt() * bessel_j(alpha, z * t);
                    let got = kernel_integral(KernelKind::Delsarte, alpha, u, v, zj, 64);
                    let want = t.powf(-alpha - 0.5) * zj(u) * zj(v);
                    assert!((got - want).abs() < 1e-6, "α = {alpha}, t = {t}");
                }
            }
        }
        for alpha in [0.0, 0.3] {
            for (u, v) in LATTICE {
                let s = |w: f64| w.powf(2.0 * alpha + 1.0) / c_alpha(alpha);
                let got = kernel_integral(KernelKind::Hirschman, alpha, u, v, s, 48);
                assert!((got - 1.0).abs() < 1e-6, "α = {alpha}: {got}");
            }
        }
    }

    #[test]
    fn sharp_against_closed_forms() {
        for (mu, grid) in [
            (
                MuVector::scalar(0.25).unwrap(),
                Arc::new(TensorGrid::default_for(1).unwrap()),
            ),
            (
                MuVector::new(vec![0.3, 0.7]).unwrap(),
                Arc::new(TensorGrid::default_for(2).unwrap()),
            ),
        ] {
            let plan = ConvPlan::new(mu.clone(), grid.clone()).unwrap();
            let e = e_mu(&grid, &mu, 1.0);
            // e_μ ♯ e_μ = Π 2^{−μ_i−1} x^{μ+1/2} e^{−‖x‖²/4}
            let conv = conv_sharp(&e, &e, &plan).unwrap();
            let scale: f64 = mu.as_slice().iter().map(|m| 2f64.powf(-m - 1.0)).product();
            let want = e_mu(&grid, &mu, 2.0).scale_real(scale);
            assert!(
                conv.max_abs_diff(&want).unwrap() < 1e-9,
                "{}",
                conv.max_abs_diff(&want).unwrap()
            );
            // weighted constant: f ♯ x^{μ+1/2} = x^{μ+1/2} ‖f‖_{L¹(sr)}
            let one = SampledFn::separable_fn(grid.clone(), |d, x| {
                Complex64::new(x.powf(mu.get(d) + 0.5), 0.0)
            });
            let f = e_mu(&grid, &mu, 0.5);
            let norm = norm_weighted_lp(&f, &mu, 1.0).unwrap();
            let got = conv_sharp(&f, &one, &plan).unwrap();
            let err = got
                .max_abs_diff_where(&one.scale_real(norm), |x| x.iter().all(|&v| v < 4.0))
                .unwrap();
            assert!(err < 1e-5, "{err:e}");
            // transform law
            let tp = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
            let he = hankel_z(&tp, &e).unwrap();
            let lhs = hankel_z(&tp, &conv).unwrap();
            let rhs = he.mul(&he).unwrap().times_r(&mu);
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-5);
            // commutativity and zero
            let g = e_mu(&grid, &mu, 0.5);
            let ab = conv_sharp(&e, &g, &plan).unwrap();
            let ba = conv_sharp(&g, &e, &plan).unwrap();
            assert!(
                ab.max_abs_diff(&ba).unwrap() < 1e-10,
                "{}",
                ab.max_abs_diff(&ba).unwrap()
            );
            assert_eq!(
                conv_sharp(&SampledFn::zeros(grid.clone()), &e, &plan)
                    .unwrap()
                    .sup_norm(),
                0.0
            );
        }
    }

    #[test]
    fn dense_paths_match_separable_path() {
        let grid = Arc::new(TensorGrid::composite(2, 24, 7.0).unwrap());
        let mu = MuVector::new(vec![0.3, 0.7]).unwrap();
        let plan = ConvPlan::new(mu.clone(), grid.clone()).unwrap();
        let e = e_mu(&grid, &mu, 1.0);
        let g = e_mu(&grid, &mu, 0.6);
        let dense = |h: &SampledFn| SampledFn::new(grid.clone(), h.values().to_vec()).unwrap();
        let reference = conv_sharp(&e, &g, &plan).unwrap();
        for (a, b) in [
            (dense(&e), g.clone()),
            (e.clone(), dense(&g)),
            (dense(&e), dense(&g)),
        ] {
            let got = conv_sharp(&a, &b, &plan).unwrap();
            assert!(got.max_abs_diff(&reference).unwrap() < 1e-13);
        }
    }

    #[test]
    fn hash_transform_law_has_unit_constant() {
        let mu = MuVector::scalar(0.3).unwrap();
        let alpha = 0.3;
        // brute-force f # g at two points, f = g = e^{−x²/2}
        let g = |w: f64| (-w * w / 2.0).exp();
        let s = |w: f64| w.powf(2.0 * alpha + 1.0) / c_alpha(alpha);
        for x in [0.5, 1.7] {
            let outer = |y: f64| {
                g(y) * s(y)
                    * kernel_integral(KernelKind::Hirschman, alpha, x, y, |w| g(w) * s(w), 64)
            };
            let brute = integrate(
                outer,
                0.0,
                12.0,
                QuadOptions {
                    abs_tol: 1e-11,
                    ..Default::default()
                },
            )
            .value;
            // H(f#g) = H f · H g = e^{−y²} ⇒ f#g = H(e^{−y²}) = 2^{−α−1} e^{−x²/4}
            let want = gaussian_hankel_pair(alpha, 2.0, x) * x.powf(-alpha);
            assert!((brute - want).abs() < 1e-8, "x = {x}: {brute} vs {want}");
        }
        let grid = Arc::new(TensorGrid::default_for(1).unwrap());
        let plan = ConvPlan::new(mu.clone(), grid.clone()).unwrap();
        let tp = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
        let f = gauss(&grid, 1.0);
        let conv = conv_hash(&f, &f, &plan).unwrap();
        let hf = hankel_h(&tp, &f).unwrap();
        let lhs = hankel_h(&tp, &conv).unwrap();
        assert!(lhs.max_abs_diff(&hf.mul(&hf).unwrap()).unwrap() < 1e-9);
        // f # 1 = ∫ f s
        let one = SampledFn::separable_fn(grid.clone(), |_, _| Complex64::new(1.0, 0.0));
        let total = norm_l1_s(&f, &mu).unwrap();
        let got = conv_hash(&f, &one, &plan).unwrap();
        let err = got
            .max_abs_diff_where(&one.scale_real(total), |x| x[0] < 4.0)
            .unwrap();
        assert!(err < 1e-5, "{err:e}");
        assert_eq!(
            conv_hash(&f, &SampledFn::zeros(grid.clone()), &plan)
                .unwrap()
                .sup_norm(),
            0.0
        );
    }

    #[test]
    fn young_bounds_hold() {
        let grid = Arc::new(TensorGrid::default_for(1).unwrap());
        let mu = MuVector::scalar(0.25).unwrap();
        let plan = ConvPlan::new(mu.clone(), grid.clone()).unwrap();
        let e = e_mu(&grid, &mu, 1.0);
        let g = e_mu(&grid, &mu, 0.5);
        let (l, r) = young_bound_check(&e, &e, YoungExponent::Finite(1.0), &plan).unwrap();
        assert!(l <= r + 1e-6);
        // equality for nonnegative data at p = 1
        assert!((l - r).abs() < 1e-9);
        let (l, r) = young_bound_check(&e, &g, YoungExponent::Infinity, &plan).unwrap();
        assert!(l <= r + 1e-6);
        let (l, r) = young_bound_check(&e, &g, YoungExponent::Finite(2.0), &plan).unwrap();
        assert!(l <= r + 1e-6);
        let z = SampledFn::zeros(grid.clone());
        assert_eq!(
            young_bound_check(&z, &g, YoungExponent::Finite(1.0), &plan).unwrap(),
            (0.0, 0.0)
        );
    }

    #[test]
    fn approximate_identities() {
        let grid = Arc::new(TensorGrid::default_for(1).unwrap());
        let mu = MuVector::scalar(0.0).unwrap();
        let phi1 = approx_identity(1, &mu, grid.clone()).unwrap();
        assert!((norm_l1_s(&phi1, &mu).unwrap() - 1.0).abs() < 1e-9);
        let mut last = f64::INFINITY;
        for m in [1, 4, 16, 64] {
            let phi = approx_identity(m, &mu, grid.clone()).unwrap();
            assert!(phi.values().iter().all(|v| v.re >= 0.0 && v.im == 0.0));
            let tail = phi
                .mul_fn(|x| Complex64::new(if x[0] > 1.0 { x[0] } else { 0.0 }, 0.0))
                .integral()
                .re;
            assert!(tail < last);
            last = tail;
        }
        assert!(last < 1e-3);

        let plan = ConvPlan::new(mu.clone(), grid.clone()).unwrap();
        let f = gauss(&grid, 1.0);
        let errs = approx_identity_convergence(&f, &[1, 4, 16, 64], &plan).unwrap();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        let zero =
            approx_identity_convergence(&SampledFn::zeros(grid.clone()), &[1, 4], &plan).unwrap();
        assert_eq!(zero, vec![0.0, 0.0]);
        let pts = approx_identity_pointwise(&e_mu(&grid, &mu, 1.0), &[1.0], &[1, 4, 16, 64], &plan)
            .unwrap();
        assert!(pts.windows(2).all(|w| w[1] < w[0]), "{pts:?}");
    }
}
