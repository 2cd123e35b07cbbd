//! Quadrature rules: Gauss–Legendre, Gauss–Jacobi, and adaptive Gauss–Kronrod.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // unused when std is linked and its inherent float methods win
use num_traits::Float;

use crate::special_fn::gamma_real;

/// Nodes and weights of a rule on `[−1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `n`-point Gauss–Legendre rule by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n`-point Gauss–Jacobi rule for the weight `(1−t)^a (1+t)^b`, `a, b > −1`,
/// by the Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Rule {
    assert!(
        n >= 1 && a > -1.0 && b > -1.0,
        "invalid Jacobi rule parameters"
    );
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag[k] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k >= 1 {
            off[k] = if k == 1 {
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))).sqrt()
            } else {
                (4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0)))
                    .sqrt()
            };
        }
    }
    let mu0 =
        2f64.powf(ab + 1.0) * gamma_real(a + 1.0) * gamma_real(b + 1.0) / gamma_real(ab + 2.0);
    let first = tridiagonal_eigen(&mut diag, &mut off);
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(first.iter())
        .map(|(&x, &v)| (x, mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds the
/// eigenvalues; the result holds the first component of each normalised
/// eigenvector. `off[k]` couples rows `k−1` and `k`.
fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64]) -> Vec<f64> {
    let n = diag.len();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for i in 1..n {
        off[i - 1] = off[i];
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    z
}

const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub abs_err: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Tolerances and panel cap for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-13,
            max_panels: 4000,
        }
    }
}

fn kronrod_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK21[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let x = h * XGK21[j];
        let s = f(c - x) + f(c + x);
        kron += WGK21[j] * s;
        if j % 2 == 1 {
            gauss += WG10[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod (10/21) integration of `f` over `[a, b]`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol·|value|)` or the panel cap is hit.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Quad {
    let mut panels: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = kronrod_panel(&mut f, a, b);
    panels.push((a, b, v, e));
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if err <= target || panels.len() >= opts.max_panels {
            return Quad {
                value,
                abs_err: err,
                panels: panels.len(),
                converged: err <= target,
            };
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|p, q| p.1 .3.total_cmp(&q.1 .3))
            .expect("at least one panel");
        let (lo, hi, _, _) = panels[idx];
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // cannot bisect further in floating point
            return Quad {
                value,
                abs_err: err,
                panels: panels.len(),
                converged: false,
            };
        }
        panels.swap_remove(idx);
        let (v1, e1) = kronrod_panel(&mut f, lo, mid);
        let (v2, e2) = kronrod_panel(&mut f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

/// Integrate over `[a, b]` split at the given interior breakpoints.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    opts: QuadOptions,
) -> Quad {
    let mut total = Quad {
        value: 0.0,
        abs_err: 0.0,
        panels: 0,
        converged: true,
    };
    for w in points.windows(2) {
        let q = integrate(&mut f, w[0], w[1], opts);
        total.value += q.value;
        total.abs_err += q.abs_err;
        total.panels += q.panels;
        total.converged &= q.converged;
    }
    total
}

/// Point beyond which `e^{−x²/(2a)}` stays below `1e−16`.
pub fn gaussian_cutoff(a: f64) -> f64 {
    (2.0 * a * 16.0 * core::f64::consts::LN_10).sqrt()
}
