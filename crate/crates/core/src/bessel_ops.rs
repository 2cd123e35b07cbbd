//! Bessel operators `S_μ`, `Δ_μ` and the resolvent `(λ − S_μ)⁻¹`.
//!
//! `S_μ = Σ ∂²/∂x_i² − (4μ_i² − 1)/(4x_i²)` is diagonalised by `h_μ`
//! (`h_μ S_μ φ = −‖y‖² h_μ φ`), and `Δ_μ = Σ ∂²/∂x_i² + (2μ_i + 1) x_i⁻¹ ∂/∂x_i`
//! is its conjugate `Δ_μ = x^{−μ−1/2} S_μ x^{μ+1/2}`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use crate::delsarte::{conv_sharp, ConvPlan};
use crate::hankel::SpectralPlan;
use crate::weighted_spaces::{
    apply_T, default_layout, derivative_along, Axis, FdOptions, FitVariable, MuVector, PanelSpec,
    SampledFn, TensorGrid,
};
use crate::{Complex64, Error, Result};

/// `𝒩_ν(w) = ∫₀^∞ e^{−t − w²/(4t)} t^{−ν−1} dt` for `w > 0`.
///
/// Evaluated with the trapezoidal rule in `t = e^u`, where the integrand
/// decays doubly exponentially in both directions; the step is halved until
/// two successive sums agree to 1e-10.
#[allow(non_snake_case)]
pub fn script_N(nu: f64, w: f64) -> Result<f64> {
    if !(w > 0.0 && w.is_finite()) || !nu.is_finite() {
        return Err(Error::Domain {
            what: "script N needs w > 0",
            value: w,
        });
    }
    let q = 0.25 * w * w;
    let phi = |u: f64| -nu * u - u.exp() - q * (-u).exp();
    // the peak solves t² + νt − q = 0
    let root = (nu * nu + 4.0 * q).sqrt();
    let t_star = if nu > 0.0 {
        2.0 * q / (nu + root)
    } else {
        0.5 * (root - nu)
    };
    let u_star = t_star.ln();
    let peak = phi(u_star);
    let sigma = 1.0 / (t_star + q / t_star).sqrt();
    // walk out until the integrand drops 40 e-folds below the peak
    let reach = |dir: f64| {
        let mut step = sigma;
        let mut u = u_star;
        while phi(u) > peak - 40.0 {
            u += dir * step;
            step *= 1.5;
        }
        u
    };
    let (a, b) = (reach(-1.0), reach(1.0));
    let f = |u: f64| (phi(u) - peak).exp();
    let mut n = (((b - a) / sigma) * 8.0).ceil().max(64.0) as usize;
    let mut h = (b - a) / n as f64;
    let mut acc = 0.5 * (f(a) + f(b)) + (1..n).map(|k| f(a + h * k as f64)).sum::<f64>();
    let mut prev = acc * h;
    // the error squares each time the step halves, so once two sums agree to
    // 1e-10 the finer one is exact to rounding
    for _ in 0..8 {
        acc += (0..n).map(|k| f(a + h * (k as f64 + 0.5))).sum::<f64>();
        n *= 2;
        h *= 0.5;
        let next = acc * h;
        let done = (next - prev).abs() <= 1e-10 * next;
        prev = next;
        if done {
            break;
        }
    }
    Ok(prev * peak.exp())
}

/// The sampled resolvent kernel
/// `N_λ(x) = 2^{−Σ(μ_i+1)} x^{μ+1/2} λ^{Σμ_i+n−1} 𝒩_{Σμ_i+n−1}(√λ‖x‖)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventKernel {
    pub lambda: f64,
    pub mu: MuVector,
    pub values: SampledFn,
}

/// Sample `N_λ` on `grid`.
pub fn resolvent_kernel(
    lambda: f64,
    mu: &MuVector,
    grid: Arc<TensorGrid>,
) -> Result<ResolventKernel> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain {
            what: "resolvent needs λ > 0",
            value: lambda,
        });
    }
    grid.check_mu(mu)?;
    let n = mu.dim() as f64;
    let nu = mu.sum() + n - 1.0;
    let scale = 2f64.powf(-(mu.sum() + n)) * lambda.powf(nu);
    let sl = lambda.sqrt();
    let mut values = Vec::with_capacity(grid.len());
    let mut err = None;
    // radial, so nodes that permute each other's coordinates share a value
    let mut seen: BTreeMap<u64, f64> = BTreeMap::new();
    let mut squares = Vec::with_capacity(mu.dim());
    grid.for_each_node(|_, x, _| {
        // summed in sorted order so that permuted nodes give identical bits
        squares.clear();
        squares.extend(x.iter().map(|v| v * v));
        squares.sort_by(f64::total_cmp);
        let norm = squares.iter().sum::<f64>().sqrt();
        let v = *seen.entry(norm.to_bits()).or_insert_with(|| {
            script_N(nu, sl * norm).unwrap_or_else(|e| {
                err = Some(e);
                f64::NAN
            })
        });
        values.push(Complex64::new(scale * mu.power(x, 1.0, 0.5) * v, 0.0));
    });
    if let Some(e) = err {
        return Err(e);
    }
    let values = SampledFn::new(grid, values)?;
    Ok(ResolventKernel {
        lambda,
        mu: mu.clone(),
        values,
    })
}

impl ResolventKernel {
    /// `N_λ ♯ f`, with the kernel integrated on the nodes and `f` interpolated.
    pub fn apply(&self, f: &SampledFn, plan: &ConvPlan) -> Result<SampledFn> {
        if plan.mu() != &self.mu {
            return Err(Error::GridMismatch);
        }
        conv_sharp(&self.values, f, plan)
    }
}

/// `√λ·L` for the resolvent grids; `N_λ` has decayed below ~1e-9 there.
const RESOLVENT_REACH: f64 = 22.0;

/// An axis on `(0, length]` that resolves transform kernels up to frequency
/// `band`: the default head panel on `(0, 1/2]`, 96 nodes on `[1/2, 12]`, and
/// beyond 12 panels of length at most 24 with about `band/3` nodes per unit
/// length.
pub fn long_axis(length: f64, band: f64) -> Result<Axis> {
    if !(length >= 12.0 && length.is_finite()) {
        return Err(Error::Domain {
            what: "long axis needs length ≥ 12",
            value: length,
        });
    }
    let mut panels = alloc::vec![
        PanelSpec {
            nodes: 32,
            lo: 0.0,
            hi: 0.5,
            power: 3.0
        },
        PanelSpec {
            nodes: 96,
            lo: 0.5,
            hi: 12.0,
            power: 1.0
        },
    ];
    let tail = length - 12.0;
    if tail > 0.0 {
        let count = (tail / 24.0).ceil();
        let width = tail / count;
        let nodes = ((width * band.max(1.0) / 3.0) / 8.0).ceil() as usize * 8;
        for k in 0..count as usize {
            panels.push(PanelSpec {
                nodes,
                lo: if k == 0 {
                    12.0
                } else {
                    12.0 + width * k as f64
                },
                hi: if k + 1 == count as usize {
                    length
                } else {
                    12.0 + width * (k + 1) as f64
                },
                power: 1.0,
            });
        }
    }
    Axis::from_panels(&panels)
}

/// A [`long_axis`] reaching `L = 22/√λ` (clamped to `[12, 60]`), where `N_λ`,
/// which decays like `e^{−√λ x}`, has dropped below ~1e-9.
pub fn resolvent_axis(lambda: f64, band: f64) -> Result<Axis> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain {
            what: "resolvent needs λ > 0",
            value: lambda,
        });
    }
    long_axis((RESOLVENT_REACH / lambda.sqrt()).clamp(12.0, 60.0), band)
}

/// Transform-side partner of [`resolvent_axis`]: the default head panel and
/// one panel on `[1/2, upper]`, with enough nodes to resolve kernels up to
/// frequency `reach` (the length of the function-side axis).
pub fn transform_axis(upper: f64, reach: f64) -> Result<Axis> {
    if !(upper > 0.5 && upper.is_finite()) {
        return Err(Error::Domain {
            what: "transform axis needs upper > 1/2",
            value: upper,
        });
    }
    let nodes = ((((upper - 0.5) * reach / 3.0) / 8.0).ceil() as usize * 8).max(96);
    let head = (((reach / 2.0) / 8.0).ceil() as usize * 8).max(32);
    Axis::from_panels(&[
        PanelSpec {
            nodes: head,
            lo: 0.0,
            hi: 0.5,
            power: 3.0,
        },
        PanelSpec {
            nodes,
            lo: 0.5,
            hi: upper,
            power: 1.0,
        },
    ])
}

/// Transform-side reach of [`long_grids`]: the default axis length in 1-D
/// and 2-D, 7 in 3-D. Data on long grids has Gaussian-type transforms, near
/// `1e−11` at 7, and every extra unit of reach adds function-side nodes,
/// which 3-D convolutions pay for in the fourth power.
pub fn long_grid_reach(dim: usize) -> Result<f64> {
    match dim {
        3 => Ok(7.0),
        _ => default_layout(dim).map(|(_, upper)| upper),
    }
}

/// Function-side grid on `(0, length]ⁿ` and its transform-side partner, for
/// functions that decay too slowly for the default grid.
pub fn long_grids(dim: usize, length: f64) -> Result<(TensorGrid, TensorGrid)> {
    let upper = long_grid_reach(dim)?;
    let x = long_axis(length, upper)?;
    let y = transform_axis(upper, x.upper())?;
    Ok((
        TensorGrid::new(alloc::vec![x; dim])?,
        TensorGrid::new(alloc::vec![y; dim])?,
    ))
}

/// [`long_grids`] reaching far enough for resolvents at `λ`.
pub fn resolvent_grids(dim: usize, lambda: f64) -> Result<(TensorGrid, TensorGrid)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain {
            what: "resolvent needs λ > 0",
            value: lambda,
        });
    }
    long_grids(dim, (RESOLVENT_REACH / lambda.sqrt()).clamp(12.0, 60.0))
}

/// Nodes with some `x_i` below this are left out of finite-difference
/// comparisons: polynomial fits cannot follow `x^{μ+1/2}` across the graded
/// head panel, where the `1/x²` potential then amplifies the fit error.
pub const FD_INTERIOR: f64 = 0.5;

/// Whether `x` lies in the region where finite differences are trusted.
pub fn fd_interior(x: &[f64]) -> bool {
    x.iter().all(|&v| v >= FD_INTERIOR)
}

/// Grid for finite-difference checks in `dim` dimensions: 128 nodes on
/// `(0, 8]` per axis for `dim ≤ 2`, 64 nodes on `(0, 7]` in 3-D.
pub fn fd_grid(dim: usize) -> Result<TensorGrid> {
    match dim {
        1 | 2 => TensorGrid::composite(dim, 128, 8.0),
        3 => TensorGrid::composite(dim, 64, 7.0),
        _ => Err(Error::DimensionMismatch {
            expected: 3,
            found: dim,
        }),
    }
}

/// `S_μ f` through the transform: `h_μ[−‖y‖² h_μ f]`.
#[allow(non_snake_case)]
pub fn apply_S_spectral(f: &SampledFn, plan: &SpectralPlan) -> Result<SampledFn> {
    plan.apply_multiplier(f, |y| {
        Complex64::new(-y.iter().map(|v| v * v).sum::<f64>(), 0.0)
    })
}

/// `S_μ f` by finite differences: `Σ ∂²f/∂x_i² − (4μ_i² − 1)/(4x_i²) f`.
#[allow(non_snake_case)]
pub fn apply_S_fd(f: &SampledFn, mu: &MuVector) -> Result<SampledFn> {
    let grid = f.grid().clone();
    grid.check_mu(mu)?;
    let mut out = SampledFn::zeros(grid.clone());
    for j in 0..grid.dim() {
        let m = mu.get(j);
        let second = derivative_along(f, j, 2, FitVariable::X, FdOptions::default())?;
        let potential =
            f.mul_fn(|x| Complex64::new(-(4.0 * m * m - 1.0) / (4.0 * x[j] * x[j]), 0.0));
        out = out.add(&second)?.add(&potential)?;
    }
    Ok(out)
}

/// `Δ_μ f = x^{−μ−1/2} S_μ(x^{μ+1/2} f)`, with `S_μ` by finite differences.
#[allow(non_snake_case)]
pub fn apply_Delta(f: &SampledFn, mu: &MuVector) -> Result<SampledFn> {
    Ok(apply_S_fd(&f.times_r_inv(mu), mu)?.times_r(mu))
}

/// `Δ_μ f = Σ ∂²f/∂x_i² + (2μ_i + 1) x_i⁻¹ ∂f/∂x_i` directly.
#[allow(non_snake_case)]
pub fn apply_Delta_fd(f: &SampledFn, mu: &MuVector) -> Result<SampledFn> {
    let grid = f.grid().clone();
    grid.check_mu(mu)?;
    let mut out = SampledFn::zeros(grid.clone());
    for j in 0..grid.dim() {
        let second = derivative_along(f, j, 2, FitVariable::X, FdOptions::default())?;
        let drift = apply_T(f, j)?.scale_real(2.0 * mu.get(j) + 1.0);
        out = out.add(&second)?.add(&drift)?;
    }
    Ok(out)
}

/// Formal transpose of `Δ_μ` with respect to `dx`:
/// `Σ ∂²v/∂x_i² − ∂/∂x_i((2μ_i + 1) v / x_i)`.
///
/// This is how `Δ_μ` acts on a function regarded as a distribution, and it
/// annihilates `x^{2μ+1}`.
#[allow(non_snake_case)]
pub fn apply_Delta_transpose_fd(v: &SampledFn, mu: &MuVector) -> Result<SampledFn> {
    let grid = v.grid().clone();
    grid.check_mu(mu)?;
    let mut out = SampledFn::zeros(grid.clone());
    for j in 0..grid.dim() {
        let m = mu.get(j);
        let second = derivative_along(v, j, 2, FitVariable::X, FdOptions::default())?;
        let flux = v.mul_fn(|x| Complex64::new((2.0 * m + 1.0) / x[j], 0.0));
        let drift = derivative_along(&flux, j, 1, FitVariable::X, FdOptions::default())?;
        out = out.add(&second)?.sub(&drift)?;
    }
    Ok(out)
}

/// `(λ − S_μ)⁻¹ f = N_λ ♯ f` on the plan's grid.
pub fn resolvent_apply_conv(lambda: f64, f: &SampledFn, plan: &ConvPlan) -> Result<SampledFn> {
    resolvent_kernel(lambda, plan.mu(), plan.grid().clone())?.apply(f, plan)
}

/// `(λ − S_μ)⁻¹ f = h_μ[(λ + ‖y‖²)⁻¹ h_μ f]`.
pub fn resolvent_apply_spectral(
    lambda: f64,
    f: &SampledFn,
    plan: &SpectralPlan,
) -> Result<SampledFn> {
    resolvent_power_spectral(lambda, 1, f, plan)
}

/// `(λ − S_μ)^{−m} f = h_μ[(λ + ‖y‖²)^{−m} h_μ f]`.
pub fn resolvent_power_spectral(
    lambda: f64,
    m: i32,
    f: &SampledFn,
    plan: &SpectralPlan,
) -> Result<SampledFn> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain {
            what: "resolvent needs λ > 0",
            value: lambda,
        });
    }
    plan.apply_multiplier(f, |y| {
        Complex64::new(
            (lambda + y.iter().map(|v| v * v).sum::<f64>()).powi(-m),
            0.0,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{hankel_z, TransformPlan};
    use crate::quadrature::{integrate_with_breaks, QuadOptions};
    use crate::weighted_spaces::{norm_weighted_linf, norm_weighted_lp};
    use alloc::vec;
    use core::f64::consts::PI;

    fn e_mu(grid: &Arc<TensorGrid>, mu: &MuVector, a: f64) -> SampledFn {
        SampledFn::separable_fn(grid.clone(), |d, x| {
            Complex64::new(x.powf(mu.get(d) + 0.5) * (-x * x / (2.0 * a)).exp(), 0.0)
        })
    }

    fn brute_script_n(nu: f64, w: f64) -> f64 {
        let q = 0.25 * w * w;
        let f = |t: f64| (-t - q / t).exp() * t.powf(-nu - 1.0);
        let peak = 0.5 * ((nu * nu + 4.0 * q).sqrt() - nu);
        let opts = QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            ..Default::default()
        };
        integrate_with_breaks(f, &[0.0, 0.1 * peak, peak, 10.0 * peak + 1.0, 80.0], opts).value
    }

    #[test]
    fn script_n_matches_oracles() {
        let w: f64 = 1.0;
        assert!((script_N(-0.5, w).unwrap() - PI.sqrt() * (-w).exp()).abs() < 1e-13);
        for nu in [-0.5, 0.0, 0.3, 1.25, 2.7] {
            for w in [0.05, 0.5, 1.0, 3.0, 12.0] {
                let got = script_N(nu, w).unwrap();
                let want = brute_script_n(nu, w);
                assert!((got - want).abs() <= 1e-11 * want.max(1.0), "ν={nu} w={w}");
            }
            assert!(script_N(nu, 1.0).unwrap() > script_N(nu, 2.0).unwrap());
        }
        assert!(script_N(0.0, 0.0).is_err());
        assert!(script_N(0.0, -1.0).is_err());
    }

    #[test]
    fn resolvent_kernel_norm_and_transform() {
        let mu = MuVector::scalar(0.25).unwrap();
        for lambda in [0.5, 1.0, 4.0] {
            let (x, y) = resolvent_grids(1, lambda).unwrap();
            let (x, y) = (Arc::new(x), Arc::new(y));
            let k = resolvent_kernel(lambda, &mu, x.clone()).unwrap();
            assert!(k.values.values().iter().all(|v| v.re > 0.0 && v.im == 0.0));
            let norm = norm_weighted_lp(&k.values, &mu, 1.0).unwrap();
            assert!((norm * lambda - 1.0).abs() < 1e-6, "λ={lambda}: {norm}");
            let plan = TransformPlan::new(mu.clone(), x, y.clone()).unwrap();
            let h = hankel_z(&plan, &k.values).unwrap();
            y.for_each_node(|i, p, _| {
                if p[0] <= 8.0 {
                    let want = p[0].powf(0.75) / (lambda + p[0] * p[0]);
                    assert!((h.values()[i].re - want).abs() <= 1e-5 * want);
                }
            });
        }
        let grid = Arc::new(TensorGrid::default_for(1).unwrap());
        assert!(resolvent_kernel(0.0, &mu, grid.clone()).is_err());
        assert!(resolvent_kernel(-1.0, &mu, grid).is_err());
    }

    #[test]
    fn spectral_and_fd_bessel_operator_agree() {
        for mu in [vec![0.0], vec![0.25], vec![0.7], vec![0.3, 0.7]] {
            let mu = MuVector::new(mu).unwrap();
            let grid = Arc::new(fd_grid(mu.dim()).unwrap());
            let plan = SpectralPlan::square(mu.clone(), grid.clone()).unwrap();
            let e = e_mu(&grid, &mu, 1.0);
            let spectral = apply_S_spectral(&e, &plan).unwrap();
            let fd = apply_S_fd(&e, &mu).unwrap();
            let exact = e.mul_fn(|x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Complex64::new(r2 - 2.0 * mu.shifted_sum(), 0.0)
            });
            assert!(spectral.max_abs_diff(&exact).unwrap() < 1e-9);
            assert!(spectral.max_abs_diff_where(&fd, fd_interior).unwrap() < 1e-4);
            // h_μ S_μ f = −‖y‖² h_μ f
            let lhs = hankel_z(plan.forward(), &spectral).unwrap();
            let rhs = hankel_z(plan.forward(), &e)
                .unwrap()
                .mul_fn(|y| Complex64::new(-y.iter().map(|v| v * v).sum::<f64>(), 0.0));
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
        }
    }

    #[test]
    fn weighted_powers_map_into_the_family() {
        // S_μ(x^{μ+1/2}‖x‖^{2k}) = 4k(k − 1 + Σμ_i + n) x^{μ+1/2}‖x‖^{2k−2}
        for mu in [vec![0.25], vec![0.3, 0.7]] {
            let mu = MuVector::new(mu).unwrap();
            let grid = Arc::new(fd_grid(mu.dim()).unwrap());
            let c = mu.shifted_sum() - 1.0;
            for k in 0..3 {
                let f = SampledFn::from_real_fn(grid.clone(), |x| {
                    mu.power(x, 1.0, 0.5) * x.iter().map(|v| v * v).sum::<f64>().powi(k)
                });
                let want = SampledFn::from_real_fn(grid.clone(), |x| {
                    let r2: f64 = x.iter().map(|v| v * v).sum();
                    let kf = f64::from(k);
                    4.0 * kf * (kf + c) * mu.power(x, 1.0, 0.5) * r2.powi((k - 1).max(0))
                });
                let got = apply_S_fd(&f, &mu).unwrap();
                let scale = f.sup_norm();
                let err = got.max_abs_diff_where(&want, fd_interior).unwrap();
                assert!(err <= 1e-3 * scale.max(1.0), "k={k}: {err:e} vs {scale:e}");
            }
        }
    }

    #[test]
    fn delta_and_similarity() {
        let mu = MuVector::new(vec![0.3, 0.7]).unwrap();
        let grid = Arc::new(fd_grid(2).unwrap());
        let one = SampledFn::from_real_fn(grid.clone(), |_| 1.0);
        let d1 = apply_Delta_fd(&one, &mu).unwrap().sup_norm();
        assert!(d1 < 1e-7, "{d1:e}");
        assert!(
            apply_Delta(&one, &mu)
                .unwrap()
                .max_abs_diff_where(&SampledFn::zeros(grid.clone()), fd_interior)
                .unwrap()
                < 1e-6
        );
        // x^{2μ+1} is annihilated by the transpose, not by Δ_μ itself
        let density = SampledFn::from_real_fn(grid.clone(), |x| mu.power(x, 2.0, 1.0));
        let t = apply_Delta_transpose_fd(&density, &mu).unwrap();
        let scale = density.sup_norm();
        assert!(
            t.max_abs_diff_where(&SampledFn::zeros(grid.clone()), fd_interior)
                .unwrap()
                < 1e-6 * scale
        );
        let direct = apply_Delta_fd(&density, &mu).unwrap();
        assert!(
            direct
                .max_abs_diff_where(&SampledFn::zeros(grid.clone()), fd_interior)
                .unwrap()
                > 1.0
        );
        // S_μ f = x^{μ+1/2} Δ_μ(x^{−μ−1/2} f)
        for a in [1.0, 0.5] {
            let e = e_mu(&grid, &mu, a);
            let s = apply_S_fd(&e, &mu).unwrap();
            let via = apply_Delta_fd(&e.times_r(&mu), &mu)
                .unwrap()
                .times_r_inv(&mu);
            assert!(s.max_abs_diff_where(&via, fd_interior).unwrap() < 1e-4);
        }
    }

    #[test]
    fn resolvent_routes_agree_and_invert() {
        for mu in [vec![0.25], vec![0.3, 0.7]] {
            let mu = MuVector::new(mu).unwrap();
            let lambdas: &[f64] = if mu.dim() == 1 {
                &[0.25, 1.0, 4.0, 16.0]
            } else {
                &[4.0]
            };
            for &lambda in lambdas {
                let (x, y) = resolvent_grids(mu.dim(), lambda).unwrap();
                let x = Arc::new(x);
                let spectral = SpectralPlan::new(mu.clone(), x.clone(), Arc::new(y)).unwrap();
                let conv = ConvPlan::new(mu.clone(), x.clone()).unwrap();
                let f = e_mu(&x, &mu, 1.0);
                let gs = resolvent_apply_spectral(lambda, &f, &spectral).unwrap();
                let gc = resolvent_apply_conv(lambda, &f, &conv).unwrap();
                assert!(gs.max_abs_diff(&gc).unwrap() < 1e-4);
                for g in [&gs, &gc] {
                    let back = g
                        .scale_real(lambda)
                        .sub(&apply_S_spectral(g, &spectral).unwrap())
                        .unwrap();
                    assert!(back.max_abs_diff(&f).unwrap() < 1e-4);
                    let lhs = lambda * norm_weighted_linf(g, &mu).unwrap();
                    assert!(lhs <= norm_weighted_linf(&f, &mu).unwrap() * (1.0 + 1e-6));
                }
                let zero = SampledFn::zeros(x.clone());
                assert_eq!(
                    resolvent_apply_spectral(lambda, &zero, &spectral)
                        .unwrap()
                        .sup_norm(),
                    0.0
                );
                assert_eq!(
                    resolvent_apply_conv(lambda, &zero, &conv)
                        .unwrap()
                        .sup_norm(),
                    0.0
                );
            }
        }
    }

    #[test]
    fn resolvent_powers_compose() {
        let mu = MuVector::scalar(0.7).unwrap();
        // intermediate results decay like e^{−√2 x}, so the x-grid is long
        let (x, y) = resolvent_grids(1, 0.25).unwrap();
        let grid = Arc::new(x);
        let plan = SpectralPlan::new(mu.clone(), grid.clone(), Arc::new(y)).unwrap();
        let f = e_mu(&grid, &mu, 1.0);
        let mut g = f.clone();
        for _ in 0..3 {
            g = resolvent_apply_spectral(2.0, &g, &plan).unwrap();
        }
        let direct = resolvent_power_spectral(2.0, 3, &f, &plan).unwrap();
        let err = g.max_abs_diff(&direct).unwrap();
        assert!(err < 1e-10, "{err:e}");
    }
}
