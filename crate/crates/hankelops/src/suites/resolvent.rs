use std::f64::consts::PI;
use std::sync::Arc;

use hankel_core::bessel_ops::{
    apply_Delta_fd, apply_Delta_transpose_fd, apply_S_fd, apply_S_spectral, fd_grid, fd_interior,
    resolvent_apply_conv, resolvent_apply_spectral, resolvent_grids, resolvent_kernel,
    resolvent_power_spectral, script_N,
};
use hankel_core::delsarte::ConvPlan;
use hankel_core::hankel::{hankel_z, SpectralPlan, TransformPlan};
use hankel_core::quadrature::{integrate_with_breaks, QuadOptions};
use hankel_core::weighted_spaces::{norm_weighted_linf, norm_weighted_lp};
use hankel_core::{MuVector, SampledFn};

use super::{weighted_gaussian, Ctx};

/// Resolvent parameters checked when the configuration names none.
pub const LAMBDAS: [f64; 4] = [0.25, 1.0, 4.0, 16.0];
/// Parameters of the kernel norm and transform checks.
pub const KERNEL_LAMBDAS: [f64; 3] = [0.5, 1.0, 4.0];
/// Frequencies up to which the kernel transform is compared.
pub const KERNEL_BAND: f64 = 8.0;

pub(super) fn run(ctx: &mut Ctx) {
    let mu = ctx.mu().clone();
    script_n(ctx, &mu);
    for lambda in KERNEL_LAMBDAS {
        kernel(ctx, &mu, lambda);
    }
    let lambdas = ctx.input.lambda.map_or(LAMBDAS.to_vec(), |l| vec![l]);
    for lambda in lambdas {
        identity(ctx, &mu, lambda);
    }
    ctx.small(
        "resolvent.powers_compose",
        "((λ − S_μ)^{−1})³ e_μ = (λ − S_μ)^{−3} e_μ, λ = 2, sup error",
        (|| {
            let (x, y) = resolvent_grids(mu.dim(), 2.0)?;
            let x = Arc::new(x);
            let plan = SpectralPlan::new(mu.clone(), x.clone(), Arc::new(y))?;
            let f = weighted_gaussian(&x, &mu, 1.0);
            let mut g = f.clone();
            for _ in 0..3 {
                g = resolvent_apply_spectral(2.0, &g, &plan)?;
            }
            g.max_abs_diff(&resolvent_power_spectral(2.0, 3, &f, &plan)?)
        })(),
        1e-8,
    );
    operators(ctx, &mu);
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

fn script_n(ctx: &mut Ctx, mu: &MuVector) {
    let own = mu.shifted_sum() - 1.0;
    let err = (|| {
        let mut worst = 0.0f64;
        for nu in [-0.5, 0.0, 0.3, 1.25, own] {
            for w in [0.05, 0.5, 1.0, 3.0, 12.0] {
                let want = brute_script_n(nu, w);
                worst = worst.max((script_N(nu, w)? - want).abs() / want.max(1.0));
            }
        }
        Ok(worst)
    })();
    ctx.small(
        "resolvent.script_n",
        "𝒩_ν(w) = ∫₀^∞ e^{−t − w²/(4t)} t^{−ν−1} dt against adaptive quadrature",
        err,
        1e-11,
    );
    ctx.small(
        "resolvent.script_n_closed_form",
        "𝒩_{−1/2}(w) = √π e^{−w}, relative",
        (|| {
            let mut worst = 0.0f64;
            for w in [0.1f64, 1.0, 5.0] {
                let want = PI.sqrt() * (-w).exp();
                worst = worst.max((script_N(-0.5, w)? - want).abs() / want);
            }
            Ok(worst)
        })(),
        1e-13,
    );
}

fn kernel(ctx: &mut Ctx, mu: &MuVector, lambda: f64) {
    let setup = (|| {
        let (x, y) = resolvent_grids(mu.dim(), lambda)?;
        let (x, y) = (Arc::new(x), Arc::new(y));
        let k = resolvent_kernel(lambda, mu, x.clone())?;
        let plan = TransformPlan::new(mu.clone(), x, y)?;
        Ok((k, plan))
    })();
    let (k, plan) = match setup {
        Ok(s) => s,
        Err(e) => return ctx.setup_failed(&format!("resolvent.kernel_setup[lambda={lambda}]"), e),
    };
    ctx.small(
        format!("resolvent.kernel_norm[lambda={lambda}]"),
        "λ ‖N_λ‖_{L¹(sr)} = 1, absolute deviation",
        norm_weighted_lp(&k.values, mu, 1.0).map(|v| (lambda * v - 1.0).abs()),
        1e-6,
    );
    let err = (|| {
        let h = hankel_z(&plan, &k.values)?;
        let mut worst = 0.0f64;
        plan.out_grid().for_each_node(|i, y, _| {
            let s: f64 = y.iter().map(|v| v * v).sum();
            if s <= KERNEL_BAND * KERNEL_BAND {
                let want = mu.power(y, 1.0, 0.5) / (lambda + s);
                worst = worst.max((h.values()[i].re - want).abs() / want);
            }
        });
        Ok(worst)
    })();
    ctx.small(
        format!("resolvent.kernel_transform[lambda={lambda}]"),
        "h_μ N_λ(y) = y^{μ+1/2} / (λ + ‖y‖²) on ‖y‖ ≤ 8, relative",
        err,
        1e-5,
    );
}

fn identity(ctx: &mut Ctx, mu: &MuVector, lambda: f64) {
    let setup = (|| {
        let (x, y) = resolvent_grids(mu.dim(), lambda)?;
        let x = Arc::new(x);
        let spectral = SpectralPlan::new(mu.clone(), x.clone(), Arc::new(y))?;
        let conv = ConvPlan::new(mu.clone(), x.clone())?;
        Ok((x, spectral, conv))
    })();
    let (x, spectral, conv) = match setup {
        Ok(s) => s,
        Err(e) => return ctx.setup_failed(&format!("resolvent.setup[lambda={lambda}]"), e),
    };
    let f = weighted_gaussian(&x, mu, 1.0);
    let gs = resolvent_apply_spectral(lambda, &f, &spectral);
    let gc = resolvent_apply_conv(lambda, &f, &conv);
    for (route, g) in [("spectral", &gs), ("conv", &gc)] {
        let back = g.clone().and_then(|g| {
            g.scale_real(lambda)
                .sub(&apply_S_spectral(&g, &spectral)?)?
                .max_abs_diff(&f)
        });
        ctx.small(
            format!("resolvent.identity[lambda={lambda},route={route}]"),
            "(λ − S_μ)(λ − S_μ)^{−1} f = f, f = e_μ, sup error",
            back,
            1e-4,
        );
        let ratio = (|| {
            let g = g.clone()?;
            Ok(lambda * norm_weighted_linf(&g, mu)? / norm_weighted_linf(&f, mu)?)
        })();
        ctx.at_most(
            format!("resolvent.contraction[lambda={lambda},route={route}]"),
            "λ ‖(λ − S_μ)^{−1} f‖_{L^∞(r)} ≤ ‖f‖_{L^∞(r)}: ratio",
            ratio,
            1.0,
            1e-6,
        );
    }
    ctx.small(
        format!("resolvent.route_agreement[lambda={lambda}]"),
        "N_λ ♯ f = h_μ[(λ + ‖y‖²)^{−1} h_μ f], f = e_μ, sup difference",
        (|| gs.clone()?.max_abs_diff(&gc.clone()?))(),
        1e-4,
    );
    if lambda == 1.0 {
        if let Ok(g) = gc {
            ctx.field("resolvent_conv_lambda1", g);
        }
    }
}

fn operators(ctx: &mut Ctx, mu: &MuVector) {
    let grid = match fd_grid(mu.dim()) {
        Ok(g) => Arc::new(g),
        Err(e) => return ctx.setup_failed("resolvent.fd_setup", e),
    };
    ctx.small(
        "resolvent.s_routes",
        "S_μ e_μ by transform = S_μ e_μ by finite differences, nodes with every x_i ≥ 1/2",
        (|| {
            let plan = SpectralPlan::square(mu.clone(), grid.clone())?;
            let e = weighted_gaussian(&grid, mu, 1.0);
            apply_S_spectral(&e, &plan)?.max_abs_diff_where(&apply_S_fd(&e, mu)?, fd_interior)
        })(),
        1e-4,
    );
    for a in [1.0, 0.5] {
        ctx.small(
            format!("resolvent.similarity[a={a}]"),
            "S_μ f = x^{μ+1/2} Δ_μ(x^{−μ−1/2} f), f = x^{μ+1/2} e^{−‖x‖²/(2a)}, finite differences on x_i ≥ 1/2",
            (|| {
                let f = weighted_gaussian(&grid, mu, a);
                let via = apply_Delta_fd(&f.times_r(mu), mu)?.times_r_inv(mu);
                apply_S_fd(&f, mu)?.max_abs_diff_where(&via, fd_interior)
            })(),
            1e-4,
        );
    }
    ctx.small(
        "resolvent.delta_constant",
        "Δ_μ 1 = 0",
        apply_Delta_fd(&SampledFn::from_real_fn(grid.clone(), |_| 1.0), mu).map(|d| d.sup_norm()),
        1e-6,
    );
    ctx.small(
        "resolvent.delta_transpose",
        "formal transpose of Δ_μ annihilates x^{2μ+1}, relative to sup x^{2μ+1}, x_i ≥ 1/2",
        (|| {
            let density = SampledFn::from_real_fn(grid.clone(), |x| mu.power(x, 2.0, 1.0));
            let t = apply_Delta_transpose_fd(&density, mu)?;
            Ok(
                t.max_abs_diff_where(&SampledFn::zeros(grid.clone()), fd_interior)?
                    / density.sup_norm(),
            )
        })(),
        1e-6,
    );
}
