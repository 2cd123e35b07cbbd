use hankel_core::delsarte::{
    approx_identity, approx_identity_convergence, approx_identity_pointwise, conv_hash, conv_sharp,
    kernel_D, kernel_frakD, kernel_integral, young_bound_check, ConvPlan, KernelKind,
    TriangleSupport, YoungExponent,
};
use hankel_core::hankel::{hankel_h, hankel_z, TransformPlan};
use hankel_core::special_fn::{bessel_j, c_alpha};
use hankel_core::weighted_spaces::{norm_l1_s, norm_weighted_lp};
use hankel_core::{Complex64, Result, SampledFn};
use rand::Rng;

use super::{gaussian, weighted_gaussian, worst_ratio, Ctx};

/// Mollifier indices of the approximate-identity study.
pub const MOLLIFIERS: [u32; 4] = [1, 4, 16, 64];

/// Points `w` inside the support at which kernel signs are sampled.
const SIGN_SAMPLES: usize = 19;

pub(super) fn run(ctx: &mut Ctx) {
    kernels(ctx);
    convolutions(ctx);
    mollifiers(ctx);
}

fn kernels(ctx: &mut Ctx) {
    let pairs: Vec<(f64, f64)> = (0..4)
        .map(|_| (ctx.rng.gen_range(0.2..4.0), ctx.rng.gen_range(0.2..4.0)))
        .collect();
    let ts: Vec<f64> = (0..4).map(|_| ctx.rng.gen_range(0.3..3.0)).collect();
    let mut orders = vec![0.0, 0.3, 1.2];
    orders.extend(ctx.mu().as_slice().iter().copied());
    orders.sort_by(f64::total_cmp);
    orders.dedup();

    let (mut moment, mut product, mut relation) = (0.0f64, 0.0f64, 0.0f64);
    let mut lowest = f64::INFINITY;
    for &alpha in &orders {
        for &(u, v) in &pairs {
            let got = kernel_integral(
                KernelKind::Delsarte,
                alpha,
                u,
                v,
                |w| w.powf(alpha + 0.5),
                48,
            );
            let want = (u * v).powf(alpha + 0.5) / c_alpha(alpha);
            moment = moment.max((got - want).abs() / want);
            for &t in &ts {
                let zj = |z: f64| (z * t).sqrt() * bessel_j(alpha, z * t);
                let got = kernel_integral(KernelKind::Delsarte, alpha, u, v, zj, 64);
                let want = t.powf(-alpha - 0.5) * zj(u) * zj(v);
                product = product.max((got - want).abs());
            }
            let support = TriangleSupport::new(u, v);
            let c = c_alpha(alpha);
            for k in 1..=SIGN_SAMPLES {
                let w =
                    support.lo + (support.hi - support.lo) * k as f64 / (SIGN_SAMPLES + 1) as f64;
                let d = kernel_D(alpha, u, v, w);
                let frak = kernel_frakD(alpha, u, v, w);
                lowest = lowest.min(d).min(frak);
                let via = (u * v * w).powf(alpha + 0.5) * frak / (c * c);
                relation = relation.max((via - d).abs() / d);
            }
        }
    }
    ctx.small(
        "delsarte.third_moment",
        "∫ w^{α+1/2} D_α(u,v,w) dw = C_α^{−1} (uv)^{α+1/2}, relative, seeded (u,v) lattice",
        Ok(moment),
        1e-7,
    );
    ctx.small(
        "delsarte.product_formula",
        "∫ D_α(u,v,w) √(wt) J_α(wt) dw = t^{−α−1/2} √(ut) J_α(ut) √(vt) J_α(vt), seeded (u,v,t) lattice",
        Ok(product),
        1e-6,
    );
    ctx.small(
        "delsarte.kernel_relation",
        "D_α(u,v,w) = C_α^{−2} (uvw)^{α+1/2} 𝔇_α(u,v,w), relative",
        Ok(relation),
        1e-12,
    );
    ctx.at_least(
        "delsarte.kernel_nonnegative",
        "D_α ≥ 0 and 𝔇_α ≥ 0 inside the triangle support: smallest sampled value",
        Ok(lowest),
        0.0,
        0.0,
    );

    let mut normalization = 0.0f64;
    for &alpha in orders.iter().filter(|a| **a < 1.0) {
        for &(u, v) in &pairs {
            let s = |w: f64| w.powf(2.0 * alpha + 1.0) / c_alpha(alpha);
            let got = kernel_integral(KernelKind::Hirschman, alpha, u, v, s, 48);
            normalization = normalization.max((got - 1.0).abs());
        }
    }
    ctx.small(
        "delsarte.hirschman_normalization",
        "∫ 𝔇_α(u,v,w) s(w) dw = 1, seeded (u,v) lattice",
        Ok(normalization),
        1e-6,
    );
}

fn convolutions(ctx: &mut Ctx) {
    let mu = ctx.mu().clone();
    let grid = ctx.grid().clone();
    let (plan, tplan) = match ConvPlan::new(mu.clone(), grid.clone())
        .and_then(|c| Ok((c, TransformPlan::square(mu.clone(), grid.clone())?)))
    {
        Ok(p) => p,
        Err(e) => return ctx.setup_failed("delsarte.setup", e),
    };
    let e = weighted_gaussian(&grid, &mu, 1.0);
    let g = weighted_gaussian(&grid, &mu, 0.5);
    let ee = conv_sharp(&e, &e, &plan);
    let ee = match ee {
        Ok(c) => c,
        Err(err) => return ctx.setup_failed("delsarte.conv_sharp", err),
    };

    ctx.small(
        "delsarte.closed_form",
        "e_μ ♯ e_μ = Π 2^{−μ_i−1} x^{μ+1/2} e^{−‖x‖²/4}, sup error",
        {
            let scale: f64 = mu.as_slice().iter().map(|m| 2f64.powf(-m - 1.0)).product();
            ee.max_abs_diff(&weighted_gaussian(&grid, &mu, 2.0).scale_real(scale))
        },
        1e-8,
    );
    ctx.small(
        "delsarte.conv_theorem",
        "h_μ(f ♯ g) = r · h_μ f · h_μ g, f = g = e_μ, sup error",
        (|| {
            let he = hankel_z(&tplan, &e)?;
            hankel_z(&tplan, &ee)?.max_abs_diff(&he.mul(&he)?.times_r(&mu))
        })(),
        1e-5,
    );
    ctx.field("conv_sharp_e_mu", ee.clone());
    ctx.small(
        "delsarte.weighted_constant",
        "f ♯ x^{μ+1/2} = ‖f‖_{L¹(sr)} x^{μ+1/2} on ‖x‖_∞ < 4, f = x^{μ+1/2} e^{−‖x‖²}",
        (|| {
            let one = SampledFn::separable_fn(grid.clone(), |d, x| {
                Complex64::new(x.powf(mu.get(d) + 0.5), 0.0)
            });
            let norm = norm_weighted_lp(&g, &mu, 1.0)?;
            conv_sharp(&g, &one, &plan)?
                .max_abs_diff_where(&one.scale_real(norm), |x| x.iter().all(|&v| v < 4.0))
        })(),
        1e-5,
    );
    ctx.small(
        "delsarte.commutativity",
        "f ♯ g = g ♯ f, f = e_μ, g = x^{μ+1/2} e^{−‖x‖²}",
        (|| conv_sharp(&e, &g, &plan)?.max_abs_diff(&conv_sharp(&g, &e, &plan)?))(),
        1e-10,
    );
    for (label, f, h, p) in [
        ("p=1", &e, &e, YoungExponent::Finite(1.0)),
        ("p=2", &e, &g, YoungExponent::Finite(2.0)),
        ("p=inf", &e, &g, YoungExponent::Infinity),
    ] {
        let (lhs, rhs) = match young_bound_check(f, h, p, &plan) {
            Ok((l, r)) => (Ok(l), r),
            Err(err) => (Err(err), 0.0),
        };
        ctx.at_most(
            format!("delsarte.young[{label}]"),
            "‖f ♯ g‖_{L^p(sr^p)} ≤ ‖f‖_{L¹(sr)} ‖g‖_{L^p(sr^p)} (p = ∞: L^∞(r))",
            lhs,
            rhs,
            1e-6,
        );
    }

    let plain = gaussian(&grid, 1.0);
    ctx.small(
        "delsarte.hash_transform",
        "H_μ(f # g) = H_μ f · H_μ g, f = g = e^{−‖x‖²/2}, sup error",
        (|| {
            let hf = hankel_h(&tplan, &plain)?;
            hankel_h(&tplan, &conv_hash(&plain, &plain, &plan)?)?.max_abs_diff(&hf.mul(&hf)?)
        })(),
        1e-8,
    );
    ctx.small(
        "delsarte.hash_constant",
        "f # 1 = ∫ f s on ‖x‖_∞ < 4, f = e^{−‖x‖²/2}",
        (|| {
            let one = SampledFn::separable_fn(grid.clone(), |_, _| Complex64::new(1.0, 0.0));
            let total = norm_l1_s(&plain, &mu)?;
            conv_hash(&plain, &one, &plan)?
                .max_abs_diff_where(&one.scale_real(total), |x| x.iter().all(|&v| v < 4.0))
        })(),
        1e-5,
    );
}

fn mollifiers(ctx: &mut Ctx) {
    let mu = ctx.mu().clone();
    let grid = ctx.grid().clone();
    ctx.small(
        "delsarte.mollifier_normalization",
        "∫ φ_1 s dx = 1",
        approx_identity(1, &mu, grid.clone())
            .and_then(|p| norm_l1_s(&p, &mu))
            .map(|v| (v - 1.0).abs()),
        1e-9,
    );
    let tails: Result<Vec<f64>> = MOLLIFIERS
        .iter()
        .map(|&m| {
            let phi = approx_identity(m, &mu, grid.clone())?;
            let outside = phi.mul_fn(|x| {
                let far = x.iter().map(|v| v * v).sum::<f64>() > 1.0;
                Complex64::new(if far { 1.0 } else { 0.0 }, 0.0)
            });
            norm_l1_s(&outside, &mu)
        })
        .collect();
    let (tail_ratio, tail_last) = match &tails {
        Ok(t) => (Ok(worst_ratio(t)), Ok(*t.last().unwrap_or(&f64::NAN))),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    ctx.at_most(
        "delsarte.mollifier_tail_decreasing",
        "∫_{‖x‖>1} φ_m s dx decreases in m ∈ {1, 4, 16, 64}: largest ratio",
        tail_ratio,
        1.0,
        0.0,
    );
    ctx.small(
        "delsarte.mollifier_tail",
        "∫_{‖x‖>1} φ_64 s dx",
        tail_last,
        1e-3,
    );

    let plan = match ConvPlan::new(mu.clone(), grid.clone()) {
        Ok(p) => p,
        Err(e) => return ctx.setup_failed("delsarte.mollifier_setup", e),
    };
    let plain = gaussian(&grid, 1.0);
    let l1 = approx_identity_convergence(&plain, &MOLLIFIERS, &plan);
    let x0 = vec![1.0; mu.dim()];
    let point =
        approx_identity_pointwise(&weighted_gaussian(&grid, &mu, 1.0), &x0, &MOLLIFIERS, &plan);
    if let (Ok(a), Ok(b)) = (&l1, &point) {
        let rows = MOLLIFIERS
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&m, (&x, &y))| vec![f64::from(m), x, y])
            .collect();
        ctx.curve(
            "approx_identity",
            &["m", "l1_s_error", "pointwise_error"],
            rows,
        );
    }
    let (ratio, slope) = match &l1 {
        Ok(v) => (Ok(worst_ratio(v)), Ok(order_of_decay(v))),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    ctx.at_most(
        "delsarte.approx_identity_decreasing",
        "‖f # φ_m − f‖_{L¹(s)} decreases in m ∈ {1, 4, 16, 64}, f = e^{−‖x‖²/2}: largest ratio",
        ratio,
        1.0,
        0.0,
    );
    ctx.at_most(
        "delsarte.approx_identity_rate",
        "log-log slope of ‖f # φ_m − f‖_{L¹(s)} between m = 16 and 64, f = e^{−‖x‖²/2}; first order or better",
        slope,
        -0.9,
        0.0,
    );
    ctx.at_most(
        "delsarte.approx_identity_pointwise",
        "|f ♯ φ̃_m(x₀) − f(x₀)| decreases in m, x₀ = (1, …, 1), f = e_μ: largest ratio",
        point.map(|v| worst_ratio(&v)),
        1.0,
        0.0,
    );
}

/// Slope of `log e_m` against `log m` over the last two mollifiers.
fn order_of_decay(errors: &[f64]) -> f64 {
    match (errors, MOLLIFIERS) {
        ([.., a, b], [.., ma, mb]) => (b / a).ln() / (f64::from(mb) / f64::from(ma)).ln(),
        _ => f64::NAN,
    }
}
