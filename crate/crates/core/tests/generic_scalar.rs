//! The whole pipeline instantiates at `f32` as well as `f64`; single
//! precision is only expected to be roughly eps-accurate, so the checks
//! here are loose.  Everything quantitative runs at `f64` elsewhere.

use steklov::assemble::torus_slit_spectrum;
use steklov::radial::{steklov_value, ModeData, OuterBc, ProblemSpec};
use steklov::special::{bessel_quartet, ln_gamma};
use steklov::spectra::BaseManifold;

#[test]
fn bessel_quartet_in_single_precision() {
    let q = bessel_quartet(1.5f32, 2.0f32).unwrap();
    assert!(q.wronskian_residual() < 1e-4);
    let k_exact = (std::f32::consts::PI / 4.0).sqrt() * (-2.0f32).exp() * 1.5;
    assert!((q.k.value().unwrap() - k_exact).abs() / k_exact < 1e-5);
}

#[test]
fn gamma_in_single_precision() {
    assert_eq!(ln_gamma(1.0f32).unwrap(), 0.0);
    assert!((ln_gamma(7.0f32).unwrap() - 720.0f32.ln()).abs() < 1e-4);
}

#[test]
fn steklov_value_in_single_precision() {
    let spec = ProblemSpec {
        m: 4u32,
        n: 1,
        eps: 0.1f32,
        delta: 1.0,
        base: BaseManifold::Circle {
            length: std::f32::consts::TAU,
        },
        outer_bc: OuterBc::Dirichlet,
    };
    let mode = ModeData::for_indices(&spec, 0, 0).unwrap();
    let sigma = steklov_value(&spec, &mode).unwrap();
    assert!((sigma - 1.0 / 0.09).abs() / sigma < 1e-5);
}

#[test]
fn torus_in_single_precision() {
    let table = torus_slit_spectrum(0.25f32, 2).unwrap();
    assert_eq!(table.entries[0].sigma, 0.0);
    assert!((table.entries[1].sigma - 0.24491866f32).abs() < 1e-6);
}
