use std::f64::consts::PI;

use hankel_core::quadrature::{
    gaussian_cutoff, integrate, integrate_with_breaks, Quad, QuadOptions,
};
use hankel_core::special_fn::{
    bessel_j, bessel_j_scaled, c_alpha, gamma, gamma_real, gaussian_hankel_pair, gaussian_moment,
    sin_power_integral,
};
use hankel_core::{Complex64, Error, Result};

use super::Ctx;

const ORACLE: QuadOptions = QuadOptions {
    abs_tol: 1e-15,
    rel_tol: 1e-14,
    max_panels: 4000,
};

fn converged(q: Quad, what: &'static str) -> Result<f64> {
    if q.converged {
        Ok(q.value)
    } else {
        Err(Error::Domain {
            what,
            value: q.abs_err,
        })
    }
}

pub(super) fn run(ctx: &mut Ctx) {
    // 50 × 200 lattice, α ∈ [−0.49, 10], z ∈ (0, 100]
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let alpha = -0.49 + 10.49 * i as f64 / 49.0;
        let c = c_alpha(alpha);
        let m = (1..=200)
            .map(|j| (c * bessel_j_scaled(alpha, 0.5 * j as f64)).abs())
            .fold(0.0, f64::max);
        worst = worst.max(m);
        rows.push(vec![alpha, m]);
    }
    ctx.curve("bessel_bound", &["alpha", "max_abs"], rows);
    ctx.at_most(
        "special.bessel_bound",
        "|2^α Γ(α+1) z^{−α} J_α(z)| ≤ 1",
        Ok(worst),
        1.0,
        1e-12,
    );

    ctx.small(
        "special.gamma_recurrence",
        "Γ(z+1) = z Γ(z), relative",
        gamma_recurrence(),
        1e-12,
    );
    ctx.small(
        "special.gamma_reflection",
        "Γ(z) Γ(1−z) = π / sin(πz), relative",
        gamma_reflection(),
        1e-12,
    );
    ctx.small(
        "special.gaussian_pair",
        "∫₀^∞ e^{−a y²/2} J_α(r y) y^{α+1} dy = r^α a^{−α−1} e^{−r²/(2a)}, relative",
        gaussian_pair_lattice(),
        1e-9,
    );

    let mu = ctx.mu().clone();
    for (i, &m) in mu.as_slice().iter().enumerate() {
        for a in [0.5, 1.0, 3.0] {
            let err = (|| {
                let cut = gaussian_cutoff(a);
                let q = integrate_with_breaks(
                    |x| (-x * x / (2.0 * a)).exp() * x.powf(2.0 * m + 1.0),
                    &[0.0, 1.0, cut],
                    ORACLE,
                );
                let want = gaussian_moment(m, a);
                Ok((converged(q, "moment quadrature did not converge")? - want).abs() / want)
            })();
            ctx.small(
                format!("special.gaussian_moment[mu{i}={m},a={a}]"),
                "∫₀^∞ e^{−x²/(2a)} x^{2μ+1} dx = 2^μ Γ(μ+1) a^{μ+1}, relative",
                err,
                1e-10,
            );
        }
    }
    let mut powers = vec![0.0, 0.3, 1.0, 2.5];
    powers.extend(mu.as_slice().iter().filter(|m| **m >= 0.0));
    for r in powers {
        let err = (|| {
            let q = integrate(|t: f64| t.sin().powf(2.0 * r), 0.0, PI / 2.0, ORACLE);
            let want = sin_power_integral(r)?;
            Ok((converged(q, "sine power quadrature did not converge")? - want).abs() / want)
        })();
        ctx.small(
            format!("special.sin_power_integral[r={r}]"),
            "∫₀^{π/2} sin^{2r}θ dθ = √π Γ(r+1/2) / (2Γ(r+1)), relative",
            err,
            1e-10,
        );
    }

    let mut orders = vec![0.0, 0.3, 1.2];
    orders.extend(mu.as_slice().iter().filter(|m| **m >= 0.0));
    ctx.small(
        "special.product_formula",
        "∫₀^π w^{−α}J_α(w) sin^{2α}φ dφ = 2^α Γ(α+1/2) Γ(1/2) y^{−α}J_α(y) z^{−α}J_α(z), w² = y²+z²−2yz cos φ",
        product_formula(&orders),
        1e-8,
    );
}

fn gamma_recurrence() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..20 {
        for j in 0..10 {
            let z = Complex64::new(-9.7 + 1.13 * i as f64, -4.0 + 0.9 * j as f64);
            let lhs = gamma(z + 1.0)?;
            let rhs = z * gamma(z)?;
            worst = worst.max((lhs - rhs).norm() / lhs.norm());
        }
    }
    Ok(worst)
}

fn gamma_reflection() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..10 {
        for im in [0.0, 0.5, 1.5] {
            let z = Complex64::new(0.1 * i as f64, im);
            let lhs = gamma(z)? * gamma(Complex64::new(1.0, 0.0) - z)?;
            let rhs = PI / (z * PI).sin();
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
        }
    }
    Ok(worst)
}

/// Worst relative error of [`gaussian_hankel_pair`] against adaptive
/// quadrature on a 5×5×5 `(α, a, r)` lattice.
pub fn gaussian_pair_lattice() -> Result<f64> {
    let mut worst = 0.0f64;
    for alpha in [-0.4, 0.0, 0.3, 1.0, 2.5] {
        for a in [0.5, 1.0, 1.5, 2.0, 3.0] {
            // e^{−a y²/2} drops below 1e−16 at the cutoff for variance 1/a
            let cut = gaussian_cutoff(1.0 / a);
            let mut breaks: Vec<f64> = (0..cut.ceil() as usize).map(|k| k as f64).collect();
            breaks.push(cut);
            for r in [0.1, 0.5, 1.0, 1.7, 3.0] {
                let q = integrate_with_breaks(
                    |y| (-a * y * y / 2.0).exp() * bessel_j(alpha, r * y) * y.powf(alpha + 1.0),
                    &breaks,
                    ORACLE,
                );
                let got = converged(q, "Gaussian pair quadrature did not converge")?;
                let want = gaussian_hankel_pair(alpha, a, r);
                worst = worst.max((got - want).abs() / want);
            }
        }
    }
    Ok(worst)
}

fn product_formula(orders: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &alpha in orders {
        let c = 2f64.powf(alpha) * gamma_real(alpha + 0.5) * PI.sqrt();
        for (y, z) in [(0.5, 1.3), (2.0, 3.1), (4.2, 0.7), (1.0, 1.0)] {
            let f = |phi: f64| {
                let w = (y * y + z * z - 2.0 * y * z * phi.cos()).max(0.0).sqrt();
                bessel_j_scaled(alpha, w) * phi.sin().powf(2.0 * alpha)
            };
            let q = integrate(f, 0.0, PI, ORACLE);
            let got = converged(q, "product formula quadrature did not converge")?;
            let want = c * bessel_j_scaled(alpha, y) * bessel_j_scaled(alpha, z);
            worst = worst.max((got - want).abs());
        }
    }
    Ok(worst)
}
