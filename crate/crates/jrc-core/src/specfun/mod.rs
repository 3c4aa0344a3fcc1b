//! Self-contained special-function kernel: exponential integrals, modified
//! Bessel functions, incomplete and generalized incomplete gamma functions,
//! and the one Meijer-G instance the capacity analysis needs.
//!
//! Every routine validates its domain and returns `Err` rather than NaN or
//! ±∞; accuracy targets live in [`crate::accuracy::AccuracySpec`].

mod bessel;
mod expint;
mod gamma;
mod meijer;

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_k, BESSEL_K_MIN_X};
pub use expint::{exp_e1_scaled, exp_integral_e1, exp_integral_ei, exp_integral_en};
pub use gamma::{gen_incomplete_gamma, gen_incomplete_gamma_with, upper_incomplete_gamma};
pub use meijer::meijer_g_capacity_kernel;
