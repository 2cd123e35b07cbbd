//! The Zemanian transform `h_μ` and the Hirschman transform `H_μ`.
//!
//! Both are computed as dense per-axis matrix products with cached
//! kernel·weight matrices; separable inputs stay separable and cost one 1-D
//! product per axis.

use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use crate::special_fn::bessel_j_scaled;
use crate::weighted_spaces::{map_axis, MuVector, SampledFn, TensorGrid};
use crate::{Complex64, Error, Result};

/// Which transform to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// `h_μ`, kernel `Π √(x_i y_i) J_{μ_i}(x_i y_i)`.
    Zemanian,
    /// `H_μ`, kernel `Π (x_i y_i)^{−μ_i} J_{μ_i}(x_i y_i) x_i^{2μ_i+1}`.
    Hirschman,
}

/// Row-major dense matrix, `rows × cols`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Matrix {
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) data: Vec<f64>,
}

impl Matrix {
    pub(crate) fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in row.iter().zip(x) {
                acc += v * k;
            }
            *o = acc;
        }
    }
}

/// Cached transform matrices between an input and an output grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPlan {
    mu: MuVector,
    in_grid: Arc<TensorGrid>,
    out_grid: Arc<TensorGrid>,
    zemanian: Vec<Matrix>,
    hirschman: Vec<Matrix>,
}

impl TransformPlan {
    pub fn new(mu: MuVector, in_grid: Arc<TensorGrid>, out_grid: Arc<TensorGrid>) -> Result<Self> {
        in_grid.check_mu(&mu)?;
        out_grid.check_mu(&mu)?;
        let mut zemanian = Vec::with_capacity(mu.dim());
        let mut hirschman = Vec::with_capacity(mu.dim());
        for d in 0..mu.dim() {
            let m = mu.get(d);
            let (xs, ws) = (in_grid.axis(d).nodes(), in_grid.axis(d).weights());
            let ys = out_grid.axis(d).nodes();
            let mut z = Vec::with_capacity(xs.len() * ys.len());
            let mut h = Vec::with_capacity(xs.len() * ys.len());
            for &y in ys {
                for (&x, &w) in xs.iter().zip(ws) {
                    let scaled = bessel_j_scaled(m, x * y);
                    z.push((x * y).powf(m + 0.5) * scaled * w);
                    h.push(scaled * x.powf(2.0 * m + 1.0) * w);
                }
            }
            if z.iter().chain(&h).any(|v| !v.is_finite()) {
                return Err(Error::Domain {
                    what: "non-finite transform kernel",
                    value: m,
                });
            }
            zemanian.push(Matrix {
                rows: ys.len(),
                cols: xs.len(),
                data: z,
            });
            hirschman.push(Matrix {
                rows: ys.len(),
                cols: xs.len(),
                data: h,
            });
        }
        Ok(TransformPlan {
            mu,
            in_grid,
            out_grid,
            zemanian,
            hirschman,
        })
    }

    /// Plan whose output grid is its input grid.
    pub fn square(mu: MuVector, grid: Arc<TensorGrid>) -> Result<Self> {
        Self::new(mu, grid.clone(), grid)
    }

    /// Plan in the opposite direction (same kernels, grids swapped).
    pub fn reversed(&self) -> Result<Self> {
        if self.is_square() {
            return Ok(self.clone());
        }
        Self::new(self.mu.clone(), self.out_grid.clone(), self.in_grid.clone())
    }

    pub fn mu(&self) -> &MuVector {
        &self.mu
    }

    pub fn in_grid(&self) -> &Arc<TensorGrid> {
        &self.in_grid
    }

    pub fn out_grid(&self) -> &Arc<TensorGrid> {
        &self.out_grid
    }

    pub fn is_square(&self) -> bool {
        Arc::ptr_eq(&self.in_grid, &self.out_grid) || self.in_grid == self.out_grid
    }

    /// Apply the transform of the given kind to `f` (sampled on the input grid).
    pub fn apply(&self, kind: Kind, f: &SampledFn) -> Result<SampledFn> {
        f.check_grid(&self.in_grid)?;
        let mats = match kind {
            Kind::Zemanian => &self.zemanian,
            Kind::Hirschman => &self.hirschman,
        };
        if let Some(factors) = f.factors() {
            let out: Vec<Vec<Complex64>> = factors
                .iter()
                .zip(mats)
                .map(|(fac, m)| {
                    let mut o = alloc::vec![Complex64::new(0.0, 0.0); m.rows];
                    m.apply(fac, &mut o);
                    o
                })
                .collect();
            return SampledFn::separable(self.out_grid.clone(), out);
        }
        let mut shape: Vec<usize> = self.in_grid.shape().to_vec();
        let mut values = f.values().to_vec();
        for (d, m) in mats.iter().enumerate() {
            values = map_axis(&values, &shape, d, m.rows, |line, out| m.apply(line, out));
            shape[d] = m.rows;
        }
        SampledFn::new(self.out_grid.clone(), values)
    }
}

/// `h_μ f` on the plan's output grid.
pub fn hankel_z(plan: &TransformPlan, f: &SampledFn) -> Result<SampledFn> {
    plan.apply(Kind::Zemanian, f)
}

/// `H_μ f` on the plan's output grid.
pub fn hankel_h(plan: &TransformPlan, f: &SampledFn) -> Result<SampledFn> {
    plan.apply(Kind::Hirschman, f)
}

/// A pair of Zemanian plans `x → y → x` for applying multipliers
/// `h_μ[m(y)·h_μ f]` (using `h_μ⁻¹ = h_μ`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPlan {
    forward: TransformPlan,
    backward: TransformPlan,
}

impl SpectralPlan {
    /// `x_grid` carries the functions, `y_grid` the transform side.
    pub fn new(mu: MuVector, x_grid: Arc<TensorGrid>, y_grid: Arc<TensorGrid>) -> Result<Self> {
        let forward = TransformPlan::new(mu, x_grid, y_grid)?;
        let backward = forward.reversed()?;
        Ok(SpectralPlan { forward, backward })
    }

    pub fn square(mu: MuVector, grid: Arc<TensorGrid>) -> Result<Self> {
        Self::new(mu, grid.clone(), grid)
    }

    pub fn mu(&self) -> &MuVector {
        self.forward.mu()
    }

    pub fn x_grid(&self) -> &Arc<TensorGrid> {
        self.forward.in_grid()
    }

    pub fn y_grid(&self) -> &Arc<TensorGrid> {
        self.forward.out_grid()
    }

    pub fn forward(&self) -> &TransformPlan {
        &self.forward
    }

    pub fn backward(&self) -> &TransformPlan {
        &self.backward
    }

    /// `h_μ[m · h_μ f]`.
    pub fn apply_multiplier(
        &self,
        f: &SampledFn,
        m: impl FnMut(&[f64]) -> Complex64,
    ) -> Result<SampledFn> {
        let hat = hankel_z(&self.forward, f)?.mul_fn(m);
        hankel_z(&self.backward, &hat)
    }
}

fn require_square(plan: &TransformPlan) -> Result<()> {
    if plan.is_square() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Grid sup of `|h_μ(h_μ f) − f|`.
pub fn check_inversion_z(f: &SampledFn, plan: &TransformPlan) -> Result<f64> {
    require_square(plan)?;
    hankel_z(plan, &hankel_z(plan, f)?)?.max_abs_diff(f)
}

/// Grid sup of `|H_μ(H_μ f) − f|`.
pub fn check_inversion_h(f: &SampledFn, plan: &TransformPlan) -> Result<f64> {
    require_square(plan)?;
    hankel_h(plan, &hankel_h(plan, f)?)?.max_abs_diff(f)
}

/// `∫ h_μ f · g − ∫ f · h_μ g`, which vanishes in exact arithmetic.
pub fn parseval_pairing_z(f: &SampledFn, g: &SampledFn, plan: &TransformPlan) -> Result<Complex64> {
    require_square(plan)?;
    Ok(hankel_z(plan, f)?.pairing(g)? - f.pairing(&hankel_z(plan, g)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighted_spaces::{norm_weighted_linf, norm_weighted_lp};
    use alloc::vec;

    fn e_mu(grid: &Arc<TensorGrid>, mu: &MuVector, a: f64) -> SampledFn {
        SampledFn::separable_fn(grid.clone(), |d, x| {
            Complex64::new(x.powf(mu.get(d) + 0.5) * (-x * x / (2.0 * a)).exp(), 0.0)
        })
    }

    fn cases() -> Vec<(MuVector, Arc<TensorGrid>)> {
        vec![
            (
                MuVector::scalar(0.0).unwrap(),
                Arc::new(TensorGrid::default_for(1).unwrap()),
            ),
            (
                MuVector::scalar(0.25).unwrap(),
                Arc::new(TensorGrid::default_for(1).unwrap()),
            ),
            (
                MuVector::new(vec![0.3, 0.7]).unwrap(),
                Arc::new(TensorGrid::default_for(2).unwrap()),
            ),
        ]
    }

    #[test]
    fn zemanian_fixed_point_and_zero() {
        for (mu, grid) in cases() {
            let plan = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
            let e = e_mu(&grid, &mu, 1.0);
            let err = hankel_z(&plan, &e).unwrap().max_abs_diff(&e).unwrap();
            assert!(err <= 1e-8, "μ = {:?}: {err:e}", mu.as_slice());
            let zero = SampledFn::zeros(grid.clone());
            assert_eq!(hankel_z(&plan, &zero).unwrap().sup_norm(), 0.0);
            assert_eq!(hankel_h(&plan, &zero).unwrap().sup_norm(), 0.0);
        }
    }

    #[test]
    fn hirschman_fixed_point_and_consistency() {
        for (mu, grid) in cases() {
            let plan = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
            let g = SampledFn::separable_fn(grid.clone(), |_, x| {
                Complex64::new((-x * x / 2.0).exp(), 0.0)
            });
            let err = hankel_h(&plan, &g).unwrap().max_abs_diff(&g).unwrap();
            assert!(err <= 1e-8, "{err:e}");
            // r·h_μ(f) = H_μ(r f) for a non-separable f
            let f = SampledFn::from_real_fn(grid.clone(), |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                mu.power(x, 1.0, 0.5) * (1.0 + r2) * (-r2 / 1.5).exp()
            });
            let lhs = hankel_z(&plan, &f).unwrap().times_r(&mu);
            let rhs = hankel_h(&plan, &f.times_r(&mu)).unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-9);
        }
    }

    #[test]
    fn inversion_on_gaussian_family() {
        for (mu, grid) in cases() {
            let plan = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
            assert!(check_inversion_z(&e_mu(&grid, &mu, 1.0), &plan).unwrap() <= 1e-7);
            assert!(check_inversion_z(&e_mu(&grid, &mu, 0.5), &plan).unwrap() <= 1e-6);
            let g = |a: f64| {
                SampledFn::separable_fn(grid.clone(), move |_, x| {
                    Complex64::new((-x * x / (2.0 * a)).exp(), 0.0)
                })
            };
            assert!(check_inversion_h(&g(1.0), &plan).unwrap() <= 1e-7);
            assert!(check_inversion_h(&g(2.0), &plan).unwrap() <= 1e-6);
            let zero = SampledFn::zeros(grid.clone());
            assert_eq!(check_inversion_z(&zero, &plan).unwrap(), 0.0);
            assert_eq!(check_inversion_h(&zero, &plan).unwrap(), 0.0);
        }
    }

    #[test]
    fn parseval_pairing_vanishes() {
        for (mu, grid) in cases() {
            let plan = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
            let e = e_mu(&grid, &mu, 1.0);
            let g = e_mu(&grid, &mu, 0.5);
            assert!(parseval_pairing_z(&e, &e, &plan).unwrap().norm() <= 1e-9);
            assert!(parseval_pairing_z(&e, &g, &plan).unwrap().norm() <= 1e-8);
            let zero = SampledFn::zeros(grid.clone());
            assert_eq!(parseval_pairing_z(&zero, &g, &plan).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn separable_and_sweep_paths_agree() {
        let (mu, grid) = cases().pop().unwrap();
        let plan = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
        let e = e_mu(&grid, &mu, 0.7);
        let dense = SampledFn::new(grid.clone(), e.values().to_vec()).unwrap();
        assert!(dense.factors().is_none());
        for kind in [Kind::Zemanian, Kind::Hirschman] {
            let a = plan.apply(kind, &e).unwrap();
            let b = plan.apply(kind, &dense).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-14);
        }
    }

    #[test]
    fn linearity_and_boundedness() {
        for (mu, grid) in cases() {
            let plan = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
            let f = e_mu(&grid, &mu, 1.0);
            let g = SampledFn::from_real_fn(grid.clone(), |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                mu.power(x, 1.0, 0.5) * r2 * (-r2).exp()
            });
            let (a, b) = (Complex64::new(0.3, -1.1), Complex64::new(2.0, 0.5));
            let lhs = hankel_z(&plan, &f.scale(a).add(&g.scale(b)).unwrap()).unwrap();
            let rhs = hankel_z(&plan, &f)
                .unwrap()
                .scale(a)
                .add(&hankel_z(&plan, &g).unwrap().scale(b))
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
            for h in [&f, &g] {
                let bound = norm_weighted_lp(h, &mu, 1.0).unwrap();
                let image = norm_weighted_linf(&hankel_z(&plan, h).unwrap(), &mu).unwrap();
                assert!(image <= bound + 1e-8);
            }
        }
    }

    #[test]
    fn plan_is_deterministic_and_checks_grids() {
        let (mu, grid) = cases().remove(0);
        let a = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
        let b = TransformPlan::square(mu.clone(), grid.clone()).unwrap();
        assert_eq!(a, b);
        let other = Arc::new(TensorGrid::composite(1, 64, 12.0).unwrap());
        let f = SampledFn::zeros(other.clone());
        assert!(matches!(hankel_z(&a, &f), Err(Error::GridMismatch)));
        let rect = TransformPlan::new(mu.clone(), grid.clone(), other).unwrap();
        assert!(check_inversion_z(&SampledFn::zeros(grid), &rect).is_err());
        assert!(
            TransformPlan::square(MuVector::new(vec![0.0, 0.0]).unwrap(), a.in_grid().clone())
                .is_err()
        );
    }
}
