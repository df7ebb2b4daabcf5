//! Exact spectra of mixed Steklov boundary problems on product annuli
//! `N x [eps, delta] x S^{d-1}`, together with the machinery needed to
//! study their small-`eps` behaviour:
//!
//! * [`special`] — real-order modified Bessel functions `I_nu`, `K_nu` and
//!   log-gamma in overflow-safe [`ScaledValue`] form;
//! * [`spectra`] — Laplace spectra of the base manifold and of the round
//!   cross-section sphere, with multiplicities;
//! * [`radial`] — closed-form solutions of the radial problem and the
//!   Steklov value `sigma = -R'(eps)/R(eps)` of each separated mode;
//! * [`oracle`] — an independent Runge-Kutta integration of the same radial
//!   ODE, used to certify the closed forms;
//! * [`assemble`] — sorted multiset spectra, cluster summaries, the
//!   Dirichlet-Neumann bracketing audit and the two-sided slit-torus
//!   example;
//! * [`sweep`] — eps-sweeps, limit fits, perimeter-normalized gaps and the
//!   point-excision dual-path check;
//! * [`verify`] — the closed-form vs. oracle agreement grid.
//!
//! All numerical code is generic over the scalar type through the [`Real`]
//! trait; `f64` aliases for the main types are exported at the crate root.
//! Every function here is pure and deterministic, so callers may evaluate
//! modes or sweep points concurrently without further coordination.

pub mod assemble;
pub mod error;
pub mod oracle;
pub mod radial;
pub mod real;
pub mod scaled;
pub mod special;
pub mod spectra;
pub mod sweep;
pub mod verify;

pub use error::{MathError, SolveError};
pub use real::Real;
pub use scaled::ScaledValue;

/// `f64` scaled value.
pub type Scaled64 = ScaledValue<f64>;
/// `f64` Bessel quartet.
pub type Quartet64 = special::BesselQuartet<f64>;
/// `f64` base manifold description.
pub type BaseManifold64 = spectra::BaseManifold<f64>;
/// `f64` problem description.
pub type ProblemSpec64 = radial::ProblemSpec<f64>;
/// `f64` separated mode.
pub type ModeData64 = radial::ModeData<f64>;
/// `f64` spectrum table.
pub type SpectrumTable64 = assemble::SpectrumTable<f64>;
/// `f64` sweep record.
pub type SweepRecord64 = sweep::SweepRecord<f64>;
