//! Fractional powers `(−S_μ)^α` and `(−Δ_μ)^α`, and Liouville pairings.
//!
//! On the transform side `(−S_μ)^α` is multiplication by `‖y‖^{2α}`. The
//! Balakrishnan representation
//!
//! `(−S_μ)^α φ = Γ(m)/(Γ(α)Γ(m−α)) ∫₀^∞ λ^{α−1} [(−S_μ)(λ − S_μ)⁻¹]^m φ dλ`
//!
//! becomes, after moving the `λ`-integral inside the transform, another
//! multiplier whose value per frequency reduces to a Beta integral. Both routes
//! are provided so they can be checked against each other.
//!
//! The pairings are bilinear: `(u, φ) = ∫ u φ dx`, never conjugated.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use crate::hankel::SpectralPlan;
use crate::quadrature::gauss_legendre;
use crate::special_fn::{beta_integral, gamma};
use crate::weighted_spaces::{seminorm_gamma, MuVector, SampledFn, TensorGrid};
use crate::{Complex64, Error, Result};

/// Largest polynomial degree of a [`WeightedPolynomial`] (in `‖x‖²`).
pub const MAX_POLY_DEGREE: usize = 4;

/// Order `K` of the default [`vanishing_test_function`] used by the
/// Liouville witnesses.
pub const LIOUVILLE_TEST_ORDER: usize = 6;

/// Panels of the direct `λ`-quadrature in [`balakrishnan_multiplier_direct`].
pub const DIRECT_PANELS: usize = 200;

/// A power `α` with `Re α > 0`, together with the Balakrishnan exponent
/// `m > Re α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: Complex64,
    m: u32,
}

impl FracOrder {
    pub fn new(alpha: Complex64, m: u32) -> Result<Self> {
        if !(alpha.re > 0.0 && alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::Domain {
                what: "fractional power needs Re α > 0",
                value: alpha.re,
            });
        }
        if (m as f64) <= alpha.re {
            return Err(Error::Domain {
                what: "Balakrishnan exponent m must exceed Re α",
                value: m as f64,
            });
        }
        Ok(Self { alpha, m })
    }

    /// `α` with the smallest admissible exponent `m = ⌊Re α⌋ + 1`.
    pub fn minimal(alpha: Complex64) -> Result<Self> {
        let m = if alpha.re.is_finite() && alpha.re > 0.0 {
            alpha.re.floor() as u32 + 1
        } else {
            1
        };
        Self::new(alpha, m)
    }

    pub fn real(alpha: f64) -> Result<Self> {
        Self::minimal(Complex64::new(alpha, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `Γ(m)/(Γ(α)Γ(m−α))`.
    pub fn balakrishnan_constant(&self) -> Result<Complex64> {
        let m = Complex64::new(self.m as f64, 0.0);
        Ok(gamma(m)? / (gamma(self.alpha)? * gamma(m - self.alpha)?))
    }
}

/// Weight attached to a [`WeightedPolynomial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// `x^{μ+1/2}`, the kernel of `(−S_μ)^α`.
    Zemanian,
    /// `x^{2μ+1}`, the kernel of `(−Δ_μ)^α`.
    Hirschman,
}

/// `u(x) = w(x) Σ_k c_k ‖x‖^{2k}` with `w` given by the [`WeightMode`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPolynomial {
    mu: MuVector,
    coeffs: Vec<Complex64>,
    mode: WeightMode,
}

impl WeightedPolynomial {
    pub fn new(mu: MuVector, coeffs: Vec<Complex64>, mode: WeightMode) -> Result<Self> {
        if coeffs.len() > MAX_POLY_DEGREE + 1 {
            return Err(Error::Domain {
                what: "weighted polynomial degree exceeds 4",
                value: (coeffs.len() - 1) as f64,
            });
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::Domain {
                what: "non-finite polynomial coefficient",
                value: f64::NAN,
            });
        }
        Ok(Self { mu, coeffs, mode })
    }

    /// `w(x) ‖x‖^{2k}`.
    pub fn monomial(mu: MuVector, k: usize, mode: WeightMode) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self::new(mu, coeffs, mode)
    }

    pub fn mu(&self) -> &MuVector {
        &self.mu
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let s: f64 = x.iter().map(|v| v * v).sum();
        let p = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c);
        let w = match self.mode {
            WeightMode::Zemanian => self.mu.power(x, 1.0, 0.5),
            WeightMode::Hirschman => self.mu.power(x, 2.0, 1.0),
        };
        p * w
    }

    pub fn sample(&self, grid: Arc<TensorGrid>) -> Result<SampledFn> {
        grid.check_mu(&self.mu)?;
        Ok(SampledFn::from_fn(grid, |x| self.eval(x)))
    }

    /// The same polynomial with the weight `x^{μ+1/2}`: for a Hirschman-mode
    /// `u` this is `x^{−μ−1/2} u`.
    pub fn to_zemanian(&self) -> Self {
        Self {
            mode: WeightMode::Zemanian,
            ..self.clone()
        }
    }
}

/// `‖y‖^{2α} = exp(α ln ‖y‖²)`.
pub fn frac_power_multiplier(alpha: Complex64, y: &[f64]) -> Complex64 {
    let s: f64 = y.iter().map(|v| v * v).sum();
    (alpha * s.ln()).exp()
}

/// `(−S_μ)^α f = h_μ[‖y‖^{2α} h_μ f]`.
pub fn frac_power_spectral(
    order: &FracOrder,
    f: &SampledFn,
    plan: &SpectralPlan,
) -> Result<SampledFn> {
    let alpha = order.alpha();
    plan.apply_multiplier(f, |y| frac_power_multiplier(alpha, y))
}

/// The Balakrishnan multiplier at `s = ‖y‖²`,
/// `Γ(m)/(Γ(α)Γ(m−α)) ∫₀^∞ λ^{α−1} s^m (λ+s)^{−m} dλ`, reduced by `λ = s e^t`
/// to `s^α` times the constant and `B(α, m−α)`.
pub fn balakrishnan_multiplier(order: &FracOrder, s: f64) -> Result<Complex64> {
    let alpha = order.alpha();
    let rest = Complex64::new(order.m() as f64, 0.0) - alpha;
    Ok(order.balakrishnan_constant()? * beta_integral(alpha, rest) * (alpha * s.ln()).exp())
}

/// The same multiplier by direct quadrature in `λ`: Gauss–Legendre on
/// [`DIRECT_PANELS`] panels uniform in `ln λ`, over the range where the
/// integrand exceeds about 1e-17 of its peak.
pub fn balakrishnan_multiplier_direct(order: &FracOrder, s: f64) -> Result<Complex64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain {
            what: "multiplier needs ‖y‖² > 0",
            value: s,
        });
    }
    let alpha = order.alpha();
    let m = order.m() as i32;
    let lo = s.ln() - 39.0 / alpha.re;
    let hi = s.ln() + 39.0 / (m as f64 - alpha.re);
    let width = (hi - lo) / DIRECT_PANELS as f64;
    let rule = gauss_legendre(8);
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..DIRECT_PANELS {
        let mid = lo + width * (p as f64 + 0.5);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let ln_lambda = mid + 0.5 * width * t;
            let lambda = ln_lambda.exp();
            // λ^{α−1} dλ = λ^α d(ln λ)
            let ratio = (s / (lambda + s)).powi(m);
            acc += (alpha * ln_lambda).exp() * ratio * (0.5 * width * w);
        }
    }
    Ok(order.balakrishnan_constant()? * acc)
}

/// `(−S_μ)^α f` through the Balakrishnan representation, with the
/// `λ`-integral evaluated per frequency by [`balakrishnan_multiplier`].
pub fn frac_power_balakrishnan(
    order: &FracOrder,
    f: &SampledFn,
    plan: &SpectralPlan,
) -> Result<SampledFn> {
    let alpha = order.alpha();
    let rest = Complex64::new(order.m() as f64, 0.0) - alpha;
    let c = order.balakrishnan_constant()? * beta_integral(alpha, rest);
    plan.apply_multiplier(f, |y| c * frac_power_multiplier(alpha, y))
}

/// `(−Δ_μ)^α f = x^{−μ−1/2} (−S_μ)^α (x^{μ+1/2} f)`.
pub fn frac_power_delta(
    order: &FracOrder,
    f: &SampledFn,
    plan: &SpectralPlan,
) -> Result<SampledFn> {
    let mu = plan.mu();
    Ok(frac_power_spectral(order, &f.times_r_inv(mu), plan)?.times_r(mu))
}

/// A pairing value with the size of the integrand it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairing {
    pub value: Complex64,
    /// `∫ |u| |(−S_μ)^α φ| dx`.
    pub scale: f64,
}

impl Pairing {
    /// `|value| / scale`, or 0 when the integrand vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.norm() / self.scale
        } else {
            0.0
        }
    }
}

fn pair(u: &SampledFn, v: &SampledFn) -> Result<Pairing> {
    let value = u.pairing(v)?;
    let scale = u
        .map(|z| z.norm().into())
        .pairing(&v.map(|z| z.norm().into()))?;
    Ok(Pairing {
        value,
        scale: scale.re,
    })
}

/// `(u, (−S_μ)^α φ)` for a Zemanian-mode `u`.
pub fn liouville_pairing(
    u: &WeightedPolynomial,
    order: &FracOrder,
    phi: &SampledFn,
    plan: &SpectralPlan,
) -> Result<Pairing> {
    if u.mode() != WeightMode::Zemanian {
        return Err(Error::Domain {
            what: "liouville_pairing takes x^{μ+1/2} weights; use liouville_pairing_delta",
            value: 0.0,
        });
    }
    liouville_pairing_with(&u.sample(plan.x_grid().clone())?, order, phi, plan)
}

/// `(u, (−S_μ)^α φ)` for any sampled `u`, e.g. a control that is not a
/// weighted polynomial.
pub fn liouville_pairing_with(
    u: &SampledFn,
    order: &FracOrder,
    phi: &SampledFn,
    plan: &SpectralPlan,
) -> Result<Pairing> {
    pair(u, &frac_power_spectral(order, phi, plan)?)
}

/// `(u, (−Δ_μ)^α φ)` for a Hirschman-mode `u`.
pub fn liouville_pairing_delta(
    u: &WeightedPolynomial,
    order: &FracOrder,
    phi: &SampledFn,
    plan: &SpectralPlan,
) -> Result<Pairing> {
    if u.mode() != WeightMode::Hirschman {
        return Err(Error::Domain {
            what: "liouville_pairing_delta takes x^{2μ+1} weights",
            value: 0.0,
        });
    }
    pair(
        &u.sample(plan.x_grid().clone())?,
        &frac_power_delta(order, phi, plan)?,
    )
}

/// `φ_K = (−S_μ)^K e_μ` in closed form, `x^{μ+1/2} q_K(‖x‖²) e^{−‖x‖²/2}`.
///
/// Its transform `‖y‖^{2K} e_μ(y)` vanishes to order `2K` at the origin, so it
/// pairs to zero with `x^{μ+1/2}‖x‖^{2k}` for `k < K` before any power is
/// applied, and the power `‖y‖^{2α+2K}` is smooth enough that
/// `(−S_μ)^α φ_K` decays like `‖x‖^{−2α−2K}` relative to the weight.
pub fn vanishing_test_function(
    mu: &MuVector,
    order: usize,
    grid: Arc<TensorGrid>,
) -> Result<SampledFn> {
    grid.check_mu(mu)?;
    let q = test_polynomial(mu, order);
    Ok(SampledFn::from_fn(grid, |x| {
        let s: f64 = x.iter().map(|v| v * v).sum();
        let p = q.iter().rev().fold(0.0, |acc, &c| acc * s + c);
        Complex64::new(mu.power(x, 1.0, 0.5) * p * (-0.5 * s).exp(), 0.0)
    }))
}

/// Coefficients of `q_K` in `s = ‖x‖²`. With `S_μ(x^{μ+1/2} g(s)) =
/// x^{μ+1/2}(4 s g'' + 4(Σμ+n) g')` and `g = P e^{−s/2}`, one step of `−S_μ`
/// maps `P` to `−4s(P'' − P' + P/4) − 4(Σμ+n)(P' − P/2)`.
fn test_polynomial(mu: &MuVector, order: usize) -> Vec<f64> {
    let c = mu.shifted_sum();
    let mut p = vec![1.0];
    for _ in 0..order {
        let deg = p.len();
        let mut next = vec![0.0; deg + 1];
        for (k, &a) in p.iter().enumerate() {
            let k_f = k as f64;
            // a s^k contributes through P'' = k(k−1)s^{k−2}, P' = k s^{k−1}
            if k >= 1 {
                next[k - 1] -= 4.0 * k_f * (k_f - 1.0) * a + 4.0 * c * k_f * a;
                next[k] += 4.0 * k_f * a;
            }
            next[k + 1] -= a;
            next[k] += 2.0 * c * a;
        }
        p = next;
    }
    p
}

/// `γ_{m,k}(‖x‖^{−2α} ψ)` for every `m ∈ {0, 2}ⁿ` and `k ∈ {0, e_j, 2e_j}`,
/// for a `ψ` that vanishes on `‖x‖ < a`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffBudget {
    pub entries: Vec<(Vec<u32>, Vec<u32>, f64)>,
}

impl CutoffBudget {
    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|e| e.2.is_finite())
    }

    pub fn get(&self, m: &[u32], k: &[u32]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.0 == m && e.1 == k)
            .map(|e| e.2)
    }
}

/// Finiteness witness for `‖x‖^{−2α} ψ` when `ψ` vanishes near the origin.
pub fn multiplier_cutoff_check(
    order: &FracOrder,
    psi: &SampledFn,
    mu: &MuVector,
    a: f64,
) -> Result<CutoffBudget> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain {
            what: "cutoff radius must be positive",
            value: a,
        });
    }
    let grid = psi.grid().clone();
    grid.check_mu(mu)?;
    let mut inside = 0.0f64;
    grid.for_each_node(|flat, x, _| {
        if x.iter().map(|v| v * v).sum::<f64>() < a * a {
            inside = inside.max(psi.values()[flat].norm());
        }
    });
    if inside > 1e-14 {
        return Err(Error::Domain {
            what: "ψ does not vanish inside the cutoff radius",
            value: inside,
        });
    }
    let alpha = order.alpha();
    let g = psi.mul_fn(|x| frac_power_multiplier(-alpha, x));
    let n = grid.dim();
    let mut entries = Vec::new();
    for mask in 0..(1u32 << n) {
        let m: Vec<u32> = (0..n).map(|j| 2 * ((mask >> j) & 1)).collect();
        let mut ks = vec![vec![0; n]];
        for j in 0..n {
            for step in 1..=2 {
                let mut k = vec![0; n];
                k[j] = step;
                ks.push(k);
            }
        }
        for k in ks {
            let value = seminorm_gamma(&g, mu, &m, &k)?;
            entries.push((m.clone(), k, value));
        }
    }
    Ok(CutoffBudget { entries })
}
