//! Numerics for n-dimensional Hankel transforms on `(0, ∞)ⁿ`.
//!
//! The crate is `no_std` and needs only `alloc`. It provides
//!
//! - [`special_fn`]: complex Gamma, Bessel `J_α`, and the closed-form Gaussian
//!   and Gamma integrals used as oracles elsewhere,
//! - [`quadrature`]: Gauss–Legendre, Gauss–Jacobi and adaptive Gauss–Kronrod rules,
//! - [`weighted_spaces`]: tensor grids, sampled functions, the weights `s`, `r`,
//!   weighted norms, `T_j = x_j⁻¹ ∂_j` and the `γ_{m,k}` seminorms,
//! - [`hankel`]: the Zemanian (`h_μ`) and Hirschman (`H_μ`) transforms,
//! - [`delsarte`]: Delsarte kernels and the two Hankel convolutions,
//! - [`bessel_ops`]: the Bessel operators `S_μ`, `Δ_μ` and their resolvents,
//! - [`frac_powers`]: fractional powers `(−S_μ)^α`, `(−Δ_μ)^α` and Liouville pairings.
#![no_std]
// negated comparisons reject NaN along with out-of-range values
#![allow(
    clippy::needless_range_loop,
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord
)]

extern crate alloc;

pub mod bessel_ops;
pub mod delsarte;
mod error;
pub mod frac_powers;
pub mod hankel;
pub mod interp;
pub mod quadrature;
pub mod special_fn;
pub mod weighted_spaces;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use weighted_spaces::{Axis, MuVector, SampledFn, TensorGrid};
