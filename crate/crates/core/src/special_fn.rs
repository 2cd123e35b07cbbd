//! Gamma, Bessel `J_α`, and the closed-form integrals used as oracles.
//!
//! Everything here is a pure function of its arguments.

use core::f64::consts::PI;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use num_complex::Complex64;

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Largest argument summed by the ascending series. Above it the series
/// loses digits to cancellation and backward recurrence takes over.
pub const SERIES_MAX: f64 = 8.0;

/// Arguments beyond this use the Hankel asymptotic expansion when it converges.
pub const ASYMPTOTIC_MIN: f64 = 40.0;

/// `sin(πx)` with exact argument reduction.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to [-1, 1]
    let mut r = x - 2.0 * (x * 0.5).round();
    let mut sign = 1.0;
    if r < 0.0 {
        r = -r;
        sign = -1.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    }
    sign * (PI * r).sin()
}

/// `cos(πx)` with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn sin_pi_complex(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    Complex64::new(sin_pi(a) * (PI * b).cosh(), cos_pi(a) * (PI * b).sinh())
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Complex Gamma function.
///
/// Lanczos approximation for `Re z ≥ 1/2`, reflection `Γ(z)Γ(1−z) = π / sin πz` below.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole { at: z.re });
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI, 0.0) / (sin_pi_complex(z) * gamma_unchecked(one - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (z + i as f64);
    }
    let t = z + (LANCZOS_G + 0.5);
    SQRT_2PI * ((z + 0.5) * t.ln() - t).exp() * acc
}

/// Real Gamma function; `NaN` at the poles.
pub fn gamma_real(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_real(1.0 - x));
    }
    if x == x.floor() && x <= 171.0 {
        return (2..x as u32).map(f64::from).product();
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // split the power so Γ(x) stays finite up to x ≈ 171
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_2PI * half * (half * (-t).exp()) * acc
}

/// `C_α = 2^α Γ(α+1)`, the normalisation of `z^{−α} J_α(z)` at the origin.
pub fn c_alpha(alpha: f64) -> f64 {
    2f64.powf(alpha) * gamma_real(alpha + 1.0)
}

/// Bessel function of the first kind `J_α(z)` for `α > −1`, `z ≥ 0`.
///
/// Ascending series for `z ≤ SERIES_MAX`, Miller backward recurrence normalised
/// by `(z/2)^α = Σ_k (α+2k) Γ(α+k)/k! J_{α+2k}(z)` for intermediate `z`, and the
/// Hankel asymptotic expansion for large `z` once its terms drop below `1e−17`.
/// Returns `NaN` outside the domain.
pub fn bessel_j(alpha: f64, z: f64) -> f64 {
    if !(alpha > -1.0) || !(z >= 0.0) {
        return f64::NAN;
    }
    if z == 0.0 {
        return if alpha == 0.0 {
            1.0
        } else if alpha > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if z <= SERIES_MAX {
        return z.powf(alpha) * series_scaled(alpha, z);
    }
    if z >= ASYMPTOTIC_MIN {
        if let Some(v) = asymptotic(alpha, z) {
            return v;
        }
    }
    miller(alpha, z)
}

/// `z^{−α} J_α(z)`, finite at `z = 0` where it equals `1 / C_α`.
pub fn bessel_j_scaled(alpha: f64, z: f64) -> f64 {
    if !(alpha > -1.0) || !(z >= 0.0) {
        return f64::NAN;
    }
    if z <= SERIES_MAX {
        series_scaled(alpha, z)
    } else {
        bessel_j(alpha, z) * z.powf(-alpha)
    }
}

fn series_scaled(alpha: f64, z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0 / gamma_real(alpha + 1.0);
    let mut sum = term;
    let mut n = 1.0;
    loop {
        term *= -q / (n * (alpha + n));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || n > 200.0 {
            break;
        }
        n += 1.0;
    }
    sum * 2f64.powf(-alpha)
}

const MILLER_MAX: usize = 1200;

fn miller(alpha: f64, z: f64) -> f64 {
    let mut top = (z + 24.0 + 6.0 * z.cbrt()).ceil() as usize;
    if top % 2 == 1 {
        top += 1;
    }
    let top = top.min(MILLER_MAX);
    // normalisation coefficients relative to Γ(α+1):
    // c_0 = 1, c_m = (α+2m) g_m, g_1 = 1, g_{m+1} = g_m (α+m)/(m+1)
    let mut coef = [0.0f64; MILLER_MAX / 2 + 1];
    coef[0] = 1.0;
    let mut g = 1.0;
    for m in 1..=top / 2 {
        if m > 1 {
            g *= (alpha + (m - 1) as f64) / m as f64;
        }
        coef[m] = (alpha + 2.0 * m as f64) * g;
    }

    let mut next = 0.0; // j_{k+1}
    let mut cur = 1e-300; // j_k
    let mut norm = if top.is_multiple_of(2) {
        coef[top / 2] * cur
    } else {
        0.0
    };
    for k in (1..=top).rev() {
        let prev = 2.0 * (alpha + k as f64) / z * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx % 2 == 0 {
            norm += coef[idx / 2] * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
    // (z/2)^α = Γ(α+1) Σ c_m J_{α+2m}
    let scale = (alpha * (0.5 * z).ln()).exp() / gamma_real(alpha + 1.0);
    cur / norm * scale
}

fn asymptotic(alpha: f64, z: f64) -> Option<f64> {
    let mu = 4.0 * alpha * alpha;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    let mut converged = false;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * z);
        let mag = term.abs();
        if mag > last && mag > 1e-17 {
            break;
        }
        last = mag;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let chi = z - (0.5 * alpha + 0.25) * PI;
    Some((2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

/// `r^α a^{−α−1} e^{−r²/(2a)}`, the value of `∫₀^∞ e^{−a y²/2} J_α(r y) y^{α+1} dy`.
pub fn gaussian_hankel_pair(alpha: f64, a: f64, r: f64) -> f64 {
    r.powf(alpha) * a.powf(-alpha - 1.0) * (-r * r / (2.0 * a)).exp()
}

/// `∫₀^∞ e^{−x²/(2a)} x^{2μ+1} dx = 2^μ Γ(μ+1) a^{μ+1}`.
pub fn gaussian_moment(mu: f64, a: f64) -> f64 {
    2f64.powf(mu) * gamma_real(mu + 1.0) * a.powf(mu + 1.0)
}

/// `∫₀^{π/2} sin^{2r} θ dθ = √π Γ(r+1/2) / (2 Γ(r+1))` for `r > −1/2`.
pub fn sin_power_integral(r: f64) -> Result<f64> {
    if !(r > -0.5) {
        return Err(Error::Domain {
            what: "sin power exponent must exceed -1/2",
            value: r,
        });
    }
    Ok(PI.sqrt() * gamma_real(r + 0.5) / (2.0 * gamma_real(r + 1.0)))
}

/// `B(a, b) = ∫_ℝ e^{a t} (1+e^t)^{−(a+b)} dt` for complex `a` with `0 < Re a < Re(a+b)`,
/// evaluated by the trapezoid rule on the real line.
///
/// The integrand decays like `e^{Re a · t}` to the left and `e^{−Re b · t}` to the
/// right, so the rule converges geometrically in the step.
pub fn beta_integral(a: Complex64, b: Complex64) -> Complex64 {
    let total = a + b;
    let decay = a.re.min(b.re).max(1e-3);
    // integrand below 1e-18 of its peak at |t| = 42 / decay; the nearest
    // singularity sits at Im t = π, so h = 0.4 leaves an error near e^{-2π²/h}
    let half_width = 42.0 / decay;
    let steps = (2.0 * half_width / 0.4).ceil() as usize;
    let h = 2.0 * half_width / steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=steps {
        let t = -half_width + i as f64 * h;
        // log(1+e^t) without overflow
        let softplus = if t > 0.0 {
            t + (-t).exp().ln_1p()
        } else {
            t.exp().ln_1p()
        };
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        acc += w * (a * t - total * softplus).exp();
    }
    acc * h
}
