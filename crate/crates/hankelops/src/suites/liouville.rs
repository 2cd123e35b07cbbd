use std::sync::Arc;

use hankel_core::frac_powers::{
    liouville_pairing, liouville_pairing_delta, liouville_pairing_with, vanishing_test_function,
    FracOrder, WeightMode, WeightedPolynomial, LIOUVILLE_TEST_ORDER,
};
use hankel_core::hankel::SpectralPlan;
use hankel_core::{Complex64, MuVector, Result, SampledFn, TensorGrid};

use super::{alpha_label, Ctx};

/// Required ratio between the control residual and every kernel residual.
pub const SEPARATION: f64 = 100.0;

/// Node counts of the two refinement levels.
pub fn levels(dim: usize) -> [usize; 2] {
    if dim <= 2 {
        [64, 128]
    } else {
        [32, 64]
    }
}

/// Kernel members: Zemanian `k = 0, 1, 2`, then Hirschman `k = 0, 1`.
const MEMBERS: [(WeightMode, usize); 5] = [
    (WeightMode::Zemanian, 0),
    (WeightMode::Zemanian, 1),
    (WeightMode::Zemanian, 2),
    (WeightMode::Hirschman, 0),
    (WeightMode::Hirschman, 1),
];

fn member_label(mode: WeightMode, k: usize) -> String {
    match mode {
        WeightMode::Zemanian => format!("x^(mu+1/2)|x|^{}", 2 * k),
        WeightMode::Hirschman => format!("x^(2mu+1)|x|^{}", 2 * k),
    }
}

/// `x^{μ+1/2} e^{−‖x‖²/4}`, not a weighted polynomial.
fn control(grid: &Arc<TensorGrid>, mu: &MuVector) -> SampledFn {
    SampledFn::from_real_fn(grid.clone(), |x| {
        let s: f64 = x.iter().map(|v| v * v).sum();
        mu.power(x, 1.0, 0.5) * (-s / 4.0).exp()
    })
}

struct Level {
    nodes: usize,
    residuals: [f64; 5],
    control: f64,
    /// Largest `|(u, (−Δ)^α rφ) − (r u, (−S)^α φ)|` relative to the scale.
    mode_gap: f64,
}

fn level(mu: &MuVector, order: &FracOrder, nodes: usize) -> Result<Level> {
    let grid = Arc::new(TensorGrid::scaled_default(mu.dim(), nodes)?);
    let plan = SpectralPlan::square(mu.clone(), grid.clone())?;
    let phi = vanishing_test_function(mu, LIOUVILLE_TEST_ORDER, grid.clone())?;
    let plain = phi.times_r(mu);
    let mut residuals = [0.0; 5];
    let mut mode_gap = 0.0f64;
    for (slot, &(mode, k)) in MEMBERS.iter().enumerate() {
        let u = WeightedPolynomial::monomial(mu.clone(), k, mode)?;
        let p = match mode {
            WeightMode::Zemanian => liouville_pairing(&u, order, &phi, &plan)?,
            WeightMode::Hirschman => {
                let p = liouville_pairing_delta(&u, order, &plain, &plan)?;
                let q = liouville_pairing(&u.to_zemanian(), order, &phi, &plan)?;
                mode_gap = mode_gap.max((p.value - q.value).norm() / p.scale);
                p
            }
        };
        residuals[slot] = p.relative();
    }
    let control = liouville_pairing_with(&control(&grid, mu), order, &phi, &plan)?.relative();
    Ok(Level {
        nodes,
        residuals,
        control,
        mode_gap,
    })
}

pub(super) fn run(ctx: &mut Ctx) {
    let mu = ctx.mu().clone();
    let alpha = ctx.input.alpha.unwrap_or(Complex64::new(0.5, 0.0));
    let label = alpha_label(alpha);
    let result = FracOrder::minimal(alpha).and_then(|order| {
        levels(mu.dim())
            .iter()
            .map(|&n| level(&mu, &order, n))
            .collect::<Result<Vec<_>>>()
    });
    let levels = match result {
        Ok(l) => l,
        Err(e) => return ctx.setup_failed(&format!("liouville.setup[alpha={label}]"), e),
    };
    let mut columns = vec!["nodes".to_string()];
    columns.extend(MEMBERS.iter().map(|&(m, k)| member_label(m, k)));
    columns.push("control".into());
    let rows = levels
        .iter()
        .map(|l| {
            let mut row = vec![l.nodes as f64];
            row.extend_from_slice(&l.residuals);
            row.push(l.control);
            row
        })
        .collect();
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    ctx.curve(&format!("liouville_residuals_alpha{label}"), &cols, rows);

    let (coarse, fine) = (&levels[0], &levels[1]);
    for (slot, &(mode, k)) in MEMBERS.iter().enumerate() {
        let member = member_label(mode, k);
        ctx.at_most(
            format!("liouville.kernel[alpha={label},u={member}]"),
            "(u, (−S_μ)^α φ) = 0 for weighted polynomials u: relative residual at most the control residual / 100",
            Ok(fine.residuals[slot]),
            fine.control / SEPARATION,
            0.0,
        );
        ctx.at_most(
            format!("liouville.refinement[alpha={label},u={member}]"),
            "relative pairing residual at the finer level is at most the coarser one",
            Ok(fine.residuals[slot]),
            coarse.residuals[slot],
            0.0,
        );
    }
    let worst = fine.residuals.iter().copied().fold(0.0, f64::max);
    ctx.at_least(
        format!("liouville.separation[alpha={label}]"),
        "control residual / largest kernel residual",
        Ok(fine.control / worst),
        SEPARATION,
        0.0,
    );
    ctx.small(
        format!("liouville.mode_identity[alpha={label}]"),
        "(u, (−Δ_μ)^α x^{−μ−1/2}φ) = (x^{−μ−1/2}u, (−S_μ)^α φ), relative to the pairing scale",
        Ok(coarse.mode_gap.max(fine.mode_gap)),
        1e-12,
    );
}
