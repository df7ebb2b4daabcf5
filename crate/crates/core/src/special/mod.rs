//! Special functions: log-gamma and real-order modified Bessel functions
//! with derivatives, all returned in overflow-safe scaled form.
//!
//! Every routine is pure and deterministic; there is no global state, so
//! unrestricted parallel invocation is safe.

mod bessel;
mod gamma;

pub use bessel::{bessel_iv, bessel_kv, bessel_kv_pair, bessel_quartet, BesselQuartet};
pub use gamma::{ln_gamma, unit_sphere_area};
