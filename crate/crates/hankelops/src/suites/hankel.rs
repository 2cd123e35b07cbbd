use std::sync::Arc;

use hankel_core::hankel::{
    check_inversion_h, check_inversion_z, hankel_h, hankel_z, parseval_pairing_z, TransformPlan,
};
use hankel_core::weighted_spaces::{norm_weighted_linf, norm_weighted_lp};
use hankel_core::{Complex64, MuVector, Result, SampledFn, TensorGrid};

use super::{gaussian, weighted_gaussian, worst_ratio, Ctx};

/// Node counts of the inversion refinement study.
pub const REFINEMENT_NODES: [usize; 3] = [32, 64, 128];

pub(super) fn run(ctx: &mut Ctx) {
    let mu = ctx.mu().clone();
    let grid = ctx.grid().clone();
    let plan = match TransformPlan::square(mu.clone(), grid.clone()) {
        Ok(p) => p,
        Err(e) => return ctx.setup_failed("hankel.setup", e),
    };
    let e = weighted_gaussian(&grid, &mu, 1.0);

    let he = hankel_z(&plan, &e);
    let err = match &he {
        Ok(h) => h.max_abs_diff(&e),
        Err(err) => Err(err.clone()),
    };
    ctx.small(
        "hankel.fixed_point_z",
        "h_μ e_μ = e_μ, e_μ = x^{μ+1/2} e^{−‖x‖²/2}, sup error",
        err,
        1e-8,
    );
    if let Ok(h) = he {
        ctx.field("hankel_z_e_mu", h);
    }
    let g = gaussian(&grid, 1.0);
    ctx.small(
        "hankel.fixed_point_h",
        "H_μ e^{−‖x‖²/2} = e^{−‖y‖²/2}, sup error",
        hankel_h(&plan, &g).and_then(|h| h.max_abs_diff(&g)),
        1e-8,
    );
    ctx.small(
        "hankel.consistency",
        "x^{−μ−1/2} h_μ f = H_μ(x^{−μ−1/2} f), f = x^{μ+1/2} e^{−‖x‖²}, sup error",
        (|| {
            let f = weighted_gaussian(&grid, &mu, 0.5);
            let lhs = hankel_z(&plan, &f)?.times_r(&mu);
            let rhs = hankel_h(&plan, &f.times_r(&mu))?;
            lhs.max_abs_diff(&rhs)
        })(),
        1e-9,
    );

    for (a, tol) in [(1.0, 1e-7), (0.5, 1e-6)] {
        ctx.small(
            format!("hankel.inversion_z[a={a}]"),
            "h_μ h_μ f = f, f = x^{μ+1/2} e^{−‖x‖²/(2a)}, sup error",
            check_inversion_z(&weighted_gaussian(&grid, &mu, a), &plan),
            tol,
        );
    }
    for (a, tol) in [(1.0, 1e-7), (2.0, 1e-6)] {
        ctx.small(
            format!("hankel.inversion_h[a={a}]"),
            "H_μ H_μ f = f, f = e^{−‖x‖²/(2a)}, sup error",
            check_inversion_h(&gaussian(&grid, a), &plan),
            tol,
        );
    }
    refinement(ctx, &mu, grid.axis(0).upper());

    ctx.small(
        "hankel.parseval[e_mu,e_mu]",
        "∫ h_μ f · g = ∫ f · h_μ g, f = g = e_μ",
        parseval_pairing_z(&e, &e, &plan).map(|d| d.norm()),
        1e-9,
    );
    ctx.small(
        "hankel.parseval[e_mu,a=0.5]",
        "∫ h_μ f · g = ∫ f · h_μ g, f = e_μ, g = x^{μ+1/2} e^{−‖x‖²}",
        parseval_pairing_z(&e, &weighted_gaussian(&grid, &mu, 0.5), &plan).map(|d| d.norm()),
        1e-8,
    );

    for a in [0.5, 1.0, 2.0] {
        let f = weighted_gaussian(&grid, &mu, a);
        let lhs = hankel_z(&plan, &f).and_then(|h| norm_weighted_linf(&h, &mu));
        let rhs = norm_weighted_lp(&f, &mu, 1.0);
        let (lhs, bound) = match (lhs, rhs) {
            (Ok(l), Ok(r)) => (Ok(l), r),
            (Err(e), _) | (_, Err(e)) => (Err(e), 0.0),
        };
        ctx.at_most(
            format!("hankel.boundedness[a={a}]"),
            "‖h_μ f‖_{L^∞(r)} ≤ ‖f‖_{L¹(sr)}",
            lhs,
            bound,
            1e-8,
        );
    }

    ctx.small(
        "hankel.linearity",
        "h_μ(a f + b g) = a h_μ f + b h_μ g, relative to |a|‖h_μ f‖ + |b|‖h_μ g‖",
        (|| {
            let f = e.clone();
            // a non-separable partner exercises the axis sweep
            let g = SampledFn::from_real_fn(grid.clone(), |x| {
                let s: f64 = x.iter().map(|v| v * v).sum();
                mu.power(x, 1.0, 0.5) * (-0.7 * s).exp() * (1.0 + 0.3 * s)
            });
            let (a, b) = (Complex64::new(1.7, -0.4), Complex64::new(-2.3, 0.0));
            let hf = hankel_z(&plan, &f)?;
            let hg = hankel_z(&plan, &g)?;
            let lhs = hankel_z(&plan, &f.scale(a).add(&g.scale(b))?)?;
            let rhs = hf.scale(a).add(&hg.scale(b))?;
            let scale = a.norm() * hf.sup_norm() + b.norm() * hg.sup_norm();
            Ok(lhs.max_abs_diff(&rhs)? / scale)
        })(),
        1e-12,
    );

    ctx.small(
        "hankel.eigen_relation",
        "h_μ(S_μ e_μ) = −‖y‖² h_μ e_μ, S_μ e_μ in closed form, sup error",
        (|| {
            // S_μ(x^{μ+1/2} g(‖x‖²)) = x^{μ+1/2}(4s g'' + 4(Σμ+n) g')
            let c = mu.shifted_sum();
            let s_e = SampledFn::from_real_fn(grid.clone(), |x| {
                let s: f64 = x.iter().map(|v| v * v).sum();
                mu.power(x, 1.0, 0.5) * (-0.5 * s).exp() * (s - 2.0 * c)
            });
            let lhs = hankel_z(&plan, &s_e)?;
            let rhs = hankel_z(&plan, &e)?
                .mul_fn(|y| Complex64::new(-y.iter().map(|v| v * v).sum::<f64>(), 0.0));
            lhs.max_abs_diff(&rhs)
        })(),
        1e-4,
    );
}

/// Shortest length on which the widest family member, `e^{−‖x‖²/4}`, drops
/// below double precision. On shorter grids the truncated tail sets an error
/// floor that no number of nodes removes.
pub const REFINEMENT_MIN_LENGTH: f64 = 13.0;

/// Double-transform errors at 32, 64 and 128 nodes per axis on
/// `(0, max(L, REFINEMENT_MIN_LENGTH)]`.
fn refinement(ctx: &mut Ctx, mu: &MuVector, length: f64) {
    let length = length.max(REFINEMENT_MIN_LENGTH);
    let errors: Result<Vec<[f64; 4]>> = REFINEMENT_NODES
        .iter()
        .map(|&nodes| {
            let grid = Arc::new(TensorGrid::composite(mu.dim(), nodes, length)?);
            let plan = TransformPlan::square(mu.clone(), grid.clone())?;
            Ok([
                check_inversion_z(&weighted_gaussian(&grid, mu, 1.0), &plan)?,
                check_inversion_z(&weighted_gaussian(&grid, mu, 0.5), &plan)?,
                check_inversion_h(&gaussian(&grid, 1.0), &plan)?,
                check_inversion_h(&gaussian(&grid, 2.0), &plan)?,
            ])
        })
        .collect();
    let errors = match errors {
        Ok(e) => e,
        Err(e) => return ctx.setup_failed("hankel.inversion_refinement", e),
    };
    ctx.curve(
        "inversion_vs_nodes",
        &["nodes", "z_a1", "z_a0.5", "h_a1", "h_a2"],
        REFINEMENT_NODES
            .iter()
            .zip(&errors)
            .map(|(&n, e)| {
                let mut row = vec![n as f64];
                row.extend_from_slice(e);
                row
            })
            .collect(),
    );
    let labels = ["z,a=1", "z,a=0.5", "h,a=1", "h,a=2"];
    for (k, label) in labels.iter().enumerate() {
        let seq: Vec<f64> = errors.iter().map(|e| e[k]).collect();
        ctx.at_most(
            format!("hankel.inversion_refinement[{label}]"),
            "double-transform error decreases from 32 to 64 to 128 nodes per axis: largest ratio of successive errors",
            Ok(worst_ratio(&seq)),
            1.0,
            0.0,
        );
    }
    let finest = errors
        .last()
        .map_or(f64::NAN, |e| e.iter().copied().fold(0.0, f64::max));
    ctx.small(
        "hankel.inversion_finest",
        "double-transform error of the Gaussian family at 128 nodes per axis",
        Ok(finest),
        1e-6,
    );
}
