//! Closed-form vs. ODE-oracle agreement over a grid of problems — the
//! certification pass behind the `verify` command and the acceptance suite.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::oracle::{oracle_sigma, IntegratorConfig};
use crate::radial::{steklov_value, ModeData, OuterBc, ProblemSpec};
use crate::real::Real;
use crate::spectra::{base_spectrum, BaseManifold};

/// Grid description for the agreement pass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyGrid<T> {
    /// `(m, n)` pairs; `n = 0` uses a `Point` base, `n = 1` the circle of
    /// circumference 2 pi, `n >= 2` a `Custom` base carrying that same
    /// circle spectrum (the radial problem only consumes the eigenvalues).
    pub dimension_pairs: Vec<(u32, u32)>,
    pub k_max: usize,
    pub j_max: usize,
    pub eps_list: Vec<T>,
    pub delta: T,
    /// Relative tolerance for nonzero modes.
    pub tolerance: T,
    /// Absolute tolerance for exact-zero modes.
    pub zero_tolerance: T,
}

impl<T: Real> Default for VerifyGrid<T> {
    fn default() -> Self {
        VerifyGrid {
            dimension_pairs: vec![(3, 1), (4, 1), (4, 2), (5, 2), (5, 3), (3, 0), (4, 0)],
            k_max: 4,
            j_max: 4,
            eps_list: vec![T::of(0.1), T::of(0.01)],
            delta: T::one(),
            tolerance: T::of(1e-8),
            zero_tolerance: T::of(1e-10),
        }
    }
}

/// One grid comparison.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VerifyRow<T> {
    pub m: u32,
    pub n: u32,
    pub eps: T,
    pub outer_bc: OuterBc,
    pub k: usize,
    pub j: usize,
    pub sigma_closed: T,
    pub sigma_oracle: T,
    /// Relative deviation (absolute for zero modes).
    pub deviation: T,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport<T> {
    pub rows: Vec<VerifyRow<T>>,
    pub max_deviation: T,
    pub failures: usize,
}

impl<T: Real> VerifyReport<T> {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// CSV rendering with columns
    /// `m,n,eps,outer_bc,k,j,sigma_closed,sigma_oracle,deviation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,eps,outer_bc,k,j,sigma_closed,sigma_oracle,deviation\n");
        for r in &self.rows {
            let bc = match r.outer_bc {
                OuterBc::Dirichlet => "dirichlet",
                OuterBc::Neumann => "neumann",
            };
            out.push_str(&format!(
                "{},{},{:.16e},{},{},{},{:.16e},{:.16e},{:.16e}\n",
                r.m, r.n, r.eps, bc, r.k, r.j, r.sigma_closed, r.sigma_oracle, r.deviation
            ));
        }
        out
    }
}

/// Base manifold used by the grid for a given base dimension `n`: the
/// product model only reads the spectrum, so anything 2-dimensional and up
/// carries the circle's spectrum through the `Custom` kind.
pub fn grid_base<T: Real>(n: u32, k_max: usize) -> BaseManifold<T> {
    match n {
        0 => BaseManifold::Point,
        1 => BaseManifold::Circle {
            length: T::of(2.0) * T::PI(),
        },
        _ => {
            let circle = BaseManifold::Circle {
                length: T::of(2.0) * T::PI(),
            };
            // generous line count so completeness audits can grow rectangles
            let lines = base_spectrum(&circle, (k_max + 2).max(256)).expect("circle spectrum");
            BaseManifold::Custom {
                spectrum: lines
                    .into_iter()
                    .map(|l| (l.value, l.multiplicity))
                    .collect(),
                volume: T::of(2.0) * T::PI(),
            }
        }
    }
}

/// Runs the agreement grid: every mode's closed-form value against the
/// Richardson-extrapolated oracle.
pub fn oracle_agreement<T: Real>(grid: &VerifyGrid<T>) -> Result<VerifyReport<T>, SolveError> {
    let mut rows = Vec::new();
    let mut max_deviation = T::zero();
    let mut failures = 0usize;

    for &(m, n) in &grid.dimension_pairs {
        for &eps in &grid.eps_list {
            for bc in [OuterBc::Neumann, OuterBc::Dirichlet] {
                let spec = ProblemSpec {
                    m,
                    n,
                    eps,
                    delta: grid.delta,
                    base: grid_base(n, grid.k_max),
                    outer_bc: bc,
                };
                spec.validate()?;
                let cfg = IntegratorConfig::recommended_for(&spec);
                let lambdas = base_spectrum(&spec.base, grid.k_max + 1)?;
                for lam in &lambdas {
                    for j in 0..=grid.j_max {
                        let mode = ModeData::for_indices(&spec, lam.index, j)?;
                        let closed = steklov_value(&spec, &mode)?;
                        let oracle = oracle_sigma(&spec, &mode, &cfg)?.sigma;
                        let (deviation, within) = if closed == T::zero() {
                            let dev = oracle.abs();
                            (dev, dev <= grid.zero_tolerance)
                        } else {
                            let dev = ((closed - oracle) / closed).abs();
                            (dev, dev <= grid.tolerance)
                        };
                        max_deviation = max_deviation.max(deviation);
                        if !within {
                            failures += 1;
                        }
                        rows.push(VerifyRow {
                            m,
                            n,
                            eps,
                            outer_bc: bc,
                            k: lam.index,
                            j,
                            sigma_closed: closed,
                            sigma_oracle: oracle,
                            deviation,
                            within_tolerance: within,
                        });
                    }
                }
            }
        }
    }
    Ok(VerifyReport {
        rows,
        max_deviation,
        failures,
    })
}
