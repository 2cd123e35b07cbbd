use std::f64::consts::PI;
use std::sync::Arc;

use hankel_core::bessel_ops::{
    apply_Delta, apply_S_fd, apply_S_spectral, fd_grid, fd_interior, long_grids,
};
use hankel_core::frac_powers::{
    balakrishnan_multiplier, balakrishnan_multiplier_direct, frac_power_balakrishnan,
    frac_power_delta, frac_power_spectral, multiplier_cutoff_check, FracOrder,
};
use hankel_core::hankel::SpectralPlan;
use hankel_core::{Complex64, MuVector, Result, SampledFn};

use super::{alpha_label, gaussian, weighted_gaussian, Ctx};

/// Orders checked when the configuration names none.
pub const ALPHAS: [(f64, f64); 4] = [(0.3, 0.0), (0.5, 0.0), (1.5, 0.0), (0.5, 0.5)];

/// Function-side length of the semigroup grids per dimension.
pub fn semigroup_length(dim: usize) -> f64 {
    match dim {
        1 => 150.0,
        2 => 44.0,
        _ => 12.0,
    }
}

pub(super) fn run(ctx: &mut Ctx) {
    let mu = ctx.mu().clone();
    let grid = ctx.grid().clone();
    let alphas: Vec<Complex64> = match ctx.input.alpha {
        Some(a) => vec![a],
        None => ALPHAS
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect(),
    };
    let plan = match SpectralPlan::square(mu.clone(), grid.clone()) {
        Ok(p) => p,
        Err(e) => return ctx.setup_failed("power.setup", e),
    };
    let e = weighted_gaussian(&grid, &mu, 1.0);
    let g = weighted_gaussian(&grid, &mu, 0.5);

    ctx.small(
        "power.constant",
        "Γ(m)/(Γ(α)Γ(m−α)) = 1/π at α = 1/2, m = 1",
        FracOrder::real(0.5)
            .and_then(|o| o.balakrishnan_constant())
            .map(|c| (c - 1.0 / PI).norm()),
        1e-14,
    );
    for &alpha in &alphas {
        let label = alpha_label(alpha);
        let order = match FracOrder::minimal(alpha) {
            Ok(o) => o,
            Err(err) => {
                ctx.setup_failed(&format!("power.order[alpha={label}]"), err);
                continue;
            }
        };
        let (mut beta, mut direct) = (0.0f64, 0.0f64);
        let mut failure = None;
        for k in 0..=24 {
            let s = 10f64.powf(-6.0 + 0.5 * k as f64);
            let want = (alpha * s.ln()).exp();
            match (
                balakrishnan_multiplier(&order, s),
                balakrishnan_multiplier_direct(&order, s),
            ) {
                (Ok(b), Ok(d)) => {
                    beta = beta.max((b - want).norm() / want.norm());
                    direct = direct.max((d - want).norm() / want.norm());
                }
                (Err(err), _) | (_, Err(err)) => failure = Some(err),
            }
        }
        let (beta, direct) = match failure {
            Some(err) => (Err(err.clone()), Err(err)),
            None => (Ok(beta), Ok(direct)),
        };
        ctx.small(
            format!("power.multiplier[alpha={label}]"),
            "C(α,m) B(α, m−α) s^α = s^α on s ∈ [1e−6, 1e6], relative",
            beta,
            1e-10,
        );
        ctx.small(
            format!("power.multiplier_direct[alpha={label}]"),
            "C(α,m) ∫₀^∞ λ^{α−1} (s/(λ+s))^m dλ = s^α by direct quadrature, relative",
            direct,
            1e-10,
        );
        let spectral = frac_power_spectral(&order, &e, &plan);
        ctx.small(
            format!("power.route_equivalence[alpha={label}]"),
            "Balakrishnan route = h_μ ‖y‖^{2α} h_μ on e_μ, sup difference",
            (|| frac_power_balakrishnan(&order, &e, &plan)?.max_abs_diff(&spectral.clone()?))(),
            1e-4,
        );
        ctx.small(
            format!("power.duality[alpha={label}]"),
            "((−S_μ)^α f, g) = (f, (−S_μ)^α g), f = e_μ, g = x^{μ+1/2} e^{−‖x‖²}",
            (|| {
                let lhs = spectral.clone()?.pairing(&g)?;
                let rhs = e.pairing(&frac_power_spectral(&order, &g, &plan)?)?;
                Ok((lhs - rhs).norm())
            })(),
            1e-6,
        );
        if let Ok(p) = spectral {
            ctx.field(&format!("power_e_mu_alpha{label}"), p);
        }
    }

    ctx.small(
        "power.alpha_one_spectral",
        "(−S_μ)^1 e_μ = −S_μ e_μ through the transform, sup error",
        (|| {
            let one = frac_power_spectral(&FracOrder::real(1.0)?, &e, &plan)?;
            one.max_abs_diff(&apply_S_spectral(&e, &plan)?.scale_real(-1.0))
        })(),
        1e-6,
    );
    fd_checks(ctx, &mu);
    semigroup(ctx, &mu);

    for alpha in [Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.5)] {
        ctx.small(
            format!("power.delta_weight_algebra[alpha={}]", alpha_label(alpha)),
            "(−Δ_μ)^α (x^{−μ−1/2} f) = x^{−μ−1/2} (−S_μ)^α f, f = e_μ, relative to the sup",
            (|| {
                let order = FracOrder::minimal(alpha)?;
                let via = frac_power_delta(&order, &e.times_r(&mu), &plan)?;
                let direct = frac_power_spectral(&order, &e, &plan)?.times_r(&mu);
                Ok(via.max_abs_diff(&direct)? / direct.sup_norm())
            })(),
            1e-12,
        );
    }

    ctx.small(
        "power.cutoff_budget",
        "γ_{m,k}(‖x‖^{−2α} ψ) finite for ψ vanishing on ‖x‖ < 1: count of non-finite seminorms",
        (|| {
            let psi = bump(&grid, &mu, 1.0);
            let budget = multiplier_cutoff_check(&FracOrder::real(0.5)?, &psi, &mu, 1.0)?;
            Ok(budget.entries.iter().filter(|e| !e.2.is_finite()).count() as f64)
        })(),
        0.0,
    );
}

/// `x^{μ+1/2} b(‖x‖)`, with `b` a smooth bump supported on `[a, 3a]`.
fn bump(grid: &Arc<hankel_core::TensorGrid>, mu: &MuVector, a: f64) -> SampledFn {
    SampledFn::from_real_fn(grid.clone(), |x| {
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let t = (rho - a) / a;
        let b = if t > 0.0 && t < 2.0 {
            (1.0 - 1.0 / (t * (2.0 - t))).exp()
        } else {
            0.0
        };
        mu.power(x, 1.0, 0.5) * b
    })
}

fn fd_checks(ctx: &mut Ctx, mu: &MuVector) {
    let setup = (|| {
        let grid = Arc::new(fd_grid(mu.dim())?);
        let plan = SpectralPlan::square(mu.clone(), grid.clone())?;
        Ok((grid, plan))
    })();
    let (grid, plan) = match setup {
        Ok(s) => s,
        Err(e) => return ctx.setup_failed("power.fd_setup", e),
    };
    ctx.small(
        "power.alpha_one_fd",
        "(−S_μ)^1 e_μ = −S_μ e_μ by finite differences, nodes with every x_i ≥ 1/2",
        (|| {
            let e = weighted_gaussian(&grid, mu, 1.0);
            let one = frac_power_spectral(&FracOrder::real(1.0)?, &e, &plan)?;
            one.max_abs_diff_where(&apply_S_fd(&e, mu)?.scale_real(-1.0), fd_interior)
        })(),
        1e-4,
    );
    ctx.small(
        "power.delta_alpha_one_fd",
        "(−Δ_μ)^1 f = −Δ_μ f by finite differences, f = e^{−‖x‖²/2}, x_i ≥ 1/2",
        (|| {
            let plain = gaussian(&grid, 1.0);
            let one = frac_power_delta(&FracOrder::real(1.0)?, &plain, &plan)?;
            one.max_abs_diff_where(&apply_Delta(&plain, mu)?.scale_real(-1.0), fd_interior)
        })(),
        1e-4,
    );
}

fn semigroup(ctx: &mut Ctx, mu: &MuVector) {
    let length = semigroup_length(mu.dim());
    let result = (|| -> Result<(f64, f64)> {
        let (x, y) = long_grids(mu.dim(), length)?;
        let x = Arc::new(x);
        let plan = SpectralPlan::new(mu.clone(), x.clone(), Arc::new(y))?;
        let e = weighted_gaussian(&x, mu, 1.0);
        let p = |a: f64, f: &SampledFn| frac_power_spectral(&FracOrder::real(a)?, f, &plan);
        let whole = p(1.0, &e)?;
        let err = p(0.4, &p(0.6, &e)?)?.max_abs_diff(&whole)?;
        let half = p(0.5, &e)?;
        let err_half = p(0.2, &p(0.3, &e)?)?.max_abs_diff(&half)?;
        Ok((err, err_half))
    })();
    let (a, b) = match result {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    ctx.small(
        "power.semigroup",
        "(−S_μ)^{0.4} (−S_μ)^{0.6} e_μ = (−S_μ) e_μ, sup error on a long grid",
        a,
        1e-5,
    );
    ctx.small(
        "power.semigroup_half",
        "(−S_μ)^{0.2} (−S_μ)^{0.3} e_μ = (−S_μ)^{0.5} e_μ, sup error on a long grid",
        b,
        1e-4,
    );
}
