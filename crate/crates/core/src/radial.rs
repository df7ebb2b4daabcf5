//! Closed-form solutions of the radial problem
//!
//! ```text
//! r^2 R'' + (m-n-1) r R' - (r^2 lambda + mu_j) R = 0   on [eps, delta],
//! ```
//!
//! with a Dirichlet or Neumann condition at `delta` and the Steklov
//! condition `-R'(eps) = sigma R(eps)` at `eps` (the outward normal at the
//! inner boundary points toward decreasing `r`, hence the sign).
//!
//! Two independent evaluation routes are provided: the generic path
//! ([`steklov_value`]) forms the solution basis once and evaluates
//! `sigma = -R'(eps)/R(eps)` in scaled arithmetic, and the per-case
//! simplified formulas ([`steklov_value_explicit`]) reproduce each branch's
//! hand-reduced expression.  The generic path is authoritative; the tests
//! cross-assert the two everywhere.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::real::Real;
use crate::scaled::ScaledValue;
use crate::special::{bessel_quartet, BesselQuartet};
use crate::spectra::{base_spectrum, cross_section_spectrum, BaseManifold, SpectralLine};

/// Boundary condition imposed at the outer radius `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterBc {
    /// `R(delta) = 0`.
    Dirichlet,
    /// `R'(delta) = 0`.
    Neumann,
}

/// Geometry and boundary data of one mixed problem on
/// `N x [eps, delta] x S^{m-n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec<T> {
    /// Ambient dimension `m >= 2`.
    pub m: u32,
    /// Base dimension `n <= m - 2`.
    pub n: u32,
    /// Inner radius, `0 < eps < delta`.
    pub eps: T,
    /// Outer radius.
    pub delta: T,
    /// The base manifold `N` (only its spectrum and volume are used).
    pub base: BaseManifold<T>,
    /// Condition at the outer boundary.
    pub outer_bc: OuterBc,
}

impl<T: Real> ProblemSpec<T> {
    /// Codimension `d = m - n` of the excised submanifold.
    pub fn codim(&self) -> u32 {
        self.m - self.n
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |msg: String| Err(SolveError::InvalidProblem(msg));
        if self.m < 2 {
            return bad(format!("ambient dimension m must be >= 2, got {}", self.m));
        }
        if self.n + 2 > self.m {
            return bad(format!(
                "codimension m - n must be >= 2 so the cross-section sphere is connected; \
                 got m = {}, n = {}",
                self.m, self.n
            ));
        }
        if !(self.eps > T::zero() && self.eps < self.delta) {
            return bad(format!(
                "radii must satisfy 0 < eps < delta, got eps = {}, delta = {}",
                self.eps, self.delta
            ));
        }
        self.base.validate()?;
        // structured base kinds must match n; Custom carries no dimension
        if let Some(dim) = self.base.dimension() {
            if dim != self.n {
                return bad(format!(
                    "base manifold has dimension {dim} but the problem declares n = {}",
                    self.n
                ));
            }
        } else if self.n == 0 {
            return bad("n = 0 requires the Point base".into());
        }
        Ok(())
    }

    /// Convenience clone with a different inner radius (used by sweeps).
    pub fn with_eps(&self, eps: T) -> Self {
        let mut s = self.clone();
        s.eps = eps;
        s
    }
}

/// One separated mode `(k, j)` with all derived quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeData<T> {
    /// Distinct-value index into the base spectrum.
    pub k: usize,
    /// Distinct-value index into the cross-section spectrum.
    pub j: usize,
    /// Base eigenvalue `lambda_k`.
    pub lambda: T,
    /// Cross-section eigenvalue `mu_j = j(j+m-n-2)`.
    pub mu: T,
    /// Radial exponent shift `l = (2+n-m)/2 <= 0`.
    pub l: T,
    /// Bessel order `nu = (m-n-2+2j)/2 >= 0`.
    pub nu: T,
    /// `mult(lambda_k) * mult(mu_j)`.
    pub multiplicity: u64,
}

impl<T: Real> ModeData<T> {
    /// Builds the mode from two spectral lines.
    pub fn new(
        spec: &ProblemSpec<T>,
        lambda_line: &SpectralLine<T>,
        mu_line: &SpectralLine<T>,
    ) -> Self {
        let d = spec.codim() as i64;
        ModeData {
            k: lambda_line.index,
            j: mu_line.index,
            lambda: lambda_line.value,
            mu: mu_line.value,
            l: T::of((2 - d) as f64) / T::of(2.0),
            nu: (T::of((d - 2) as f64) + T::of(2.0) * T::of_usize(mu_line.index)) / T::of(2.0),
            multiplicity: lambda_line.multiplicity * mu_line.multiplicity,
        }
    }

    /// Computes both spectra and builds mode `(k, j)` directly.
    pub fn for_indices(spec: &ProblemSpec<T>, k: usize, j: usize) -> Result<Self, SolveError> {
        spec.validate()?;
        let lambdas = base_spectrum(&spec.base, k + 1)?;
        let lambda_line = lambdas
            .last()
            .copied()
            .ok_or_else(|| SolveError::InvalidProblem("empty base spectrum".into()))?;
        if lambda_line.index != k {
            return Err(SolveError::InvalidProblem(format!(
                "base spectrum has only {} distinct eigenvalues, mode k = {k} does not exist",
                lambda_line.index + 1
            )));
        }
        let mus = cross_section_spectrum(spec.codim(), j)?;
        Ok(ModeData::new(spec, &lambda_line, &mus[j]))
    }
}

/// Which closed-form case the solver applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialBranch {
    /// `lambda = 0`, `mu = 0`, codimension 2: `R = a + b ln r`.
    Log,
    /// `lambda = 0` otherwise: `R = a r^{e+} + b r^{e-}`.
    Power,
    /// `lambda > 0`, codimension 2: `R = a I_nu + b K_nu`.
    Bessel,
    /// `lambda > 0`, codimension > 2: `R = r^l (a I_nu + b K_nu)`.
    ShiftedBessel,
}

enum RadialForm<T> {
    Log {
        a: T,
        b: T,
    },
    Power {
        a: ScaledValue<T>,
        b: ScaledValue<T>,
        e_plus: T,
        e_minus: T,
    },
    Bessel {
        a: ScaledValue<T>,
        b: ScaledValue<T>,
        l: T,
        sqrt_lambda: T,
        nu: T,
    },
}

/// The one-dimensional solution space selected by the outer boundary
/// condition, with an evaluator for `(R(r), R'(r))`.
pub struct RadialSolution<T> {
    branch: RadialBranch,
    form: RadialForm<T>,
}

impl<T: Real> RadialSolution<T> {
    pub fn branch(&self) -> RadialBranch {
        self.branch
    }

    /// `(R(r), R'(r))` in scaled form.
    pub fn eval(&self, r: T) -> Result<(ScaledValue<T>, ScaledValue<T>), SolveError> {
        match &self.form {
            RadialForm::Log { a, b } => {
                let value = ScaledValue::from_value(*a + *b * r.ln());
                let deriv = ScaledValue::from_value(*b / r);
                Ok((value, deriv))
            }
            RadialForm::Power {
                a,
                b,
                e_plus,
                e_minus,
            } => {
                let ln_r = r.ln();
                let pow = |e: T| ScaledValue::from_ln(T::one(), e * ln_r);
                let value = *a * pow(*e_plus) + *b * pow(*e_minus);
                let deriv = *a * pow(*e_plus - T::one()) * *e_plus
                    + *b * pow(*e_minus - T::one()) * *e_minus;
                Ok((value, deriv))
            }
            RadialForm::Bessel {
                a,
                b,
                l,
                sqrt_lambda,
                nu,
            } => {
                let x = *sqrt_lambda * r;
                let q: BesselQuartet<T> = bessel_quartet(*nu, x).map_err(SolveError::Math)?;
                let core = *a * q.i + *b * q.k;
                let core_prime = *a * q.i_prime + *b * q.k_prime;
                let ln_r = r.ln();
                let r_l = ScaledValue::from_ln(T::one(), *l * ln_r);
                let r_lm1 = ScaledValue::from_ln(T::one(), (*l - T::one()) * ln_r);
                let value = r_l * core;
                let deriv = r_lm1 * core * *l + r_l * core_prime * *sqrt_lambda;
                Ok((value, deriv))
            }
        }
    }
}

/// Selects the closed-form branch for the mode and fixes the coefficient
/// pair `(a, b)` from the condition at `delta`.
pub fn radial_basis<T: Real>(
    spec: &ProblemSpec<T>,
    mode: &ModeData<T>,
) -> Result<RadialSolution<T>, SolveError> {
    spec.validate()?;
    let d = spec.codim();
    let delta = spec.delta;
    let dirichlet = spec.outer_bc == OuterBc::Dirichlet;

    if mode.lambda < T::zero() || mode.mu < T::zero() {
        return Err(SolveError::InvalidProblem(
            "eigenvalues must be nonnegative".into(),
        ));
    }

    let (branch, form) = if mode.lambda == T::zero() {
        if mode.mu == T::zero() && d == 2 {
            // R = a + b ln r
            let (a, b) = if dirichlet {
                (-delta.ln(), T::one())
            } else {
                (T::one(), T::zero())
            };
            (RadialBranch::Log, RadialForm::Log { a, b })
        } else {
            // R = a r^{e+} + b r^{e-}, e+ = j, e- = 2 - d - j
            let e_plus = T::of_usize(mode.j);
            let e_minus = T::of(2.0 - d as f64) - e_plus;
            let ln_delta = delta.ln();
            let (a, b) = if dirichlet {
                // a delta^{e+} + b delta^{e-} = 0
                (
                    -ScaledValue::from_ln(T::one(), (e_minus - e_plus) * ln_delta),
                    ScaledValue::one(),
                )
            } else if mode.j == 0 {
                // R' = b e- r^{e- - 1} vanishes at delta only with b = 0
                (ScaledValue::one(), ScaledValue::zero())
            } else {
                // a e+ delta^{e+ - 1} + b e- delta^{e- - 1} = 0
                (
                    ScaledValue::from_ln(T::one(), (e_minus - e_plus) * ln_delta)
                        * (-e_minus / e_plus),
                    ScaledValue::one(),
                )
            };
            (
                RadialBranch::Power,
                RadialForm::Power {
                    a,
                    b,
                    e_plus,
                    e_minus,
                },
            )
        }
    } else {
        let sqrt_lambda = mode.lambda.sqrt();
        let x_delta = sqrt_lambda * delta;
        let q: BesselQuartet<T> = bessel_quartet(mode.nu, x_delta).map_err(SolveError::Math)?;
        let (a, b) = if dirichlet {
            // a I(x_delta) + b K(x_delta) = 0
            (-q.k, q.i)
        } else {
            // a (l I + x I') + b (l K + x K') = 0 at delta
            let pa = q.i * mode.l + q.i_prime * x_delta;
            let pb = q.k * mode.l + q.k_prime * x_delta;
            (-pb, pa)
        };
        if a.is_zero() && b.is_zero() {
            return Err(SolveError::Internal(
                "both basis coefficients vanished; the outer condition cannot \
                 annihilate the full solution space"
                    .into(),
            ));
        }
        let branch = if d == 2 {
            RadialBranch::Bessel
        } else {
            RadialBranch::ShiftedBessel
        };
        (
            branch,
            RadialForm::Bessel {
                a,
                b,
                l: mode.l,
                sqrt_lambda,
                nu: mode.nu,
            },
        )
    };

    Ok(RadialSolution { branch, form })
}

/// The Steklov value `sigma = -R'(eps) / R(eps)` of one mode, from the
/// generic solution basis.
pub fn steklov_value<T: Real>(spec: &ProblemSpec<T>, mode: &ModeData<T>) -> Result<T, SolveError> {
    let sol = radial_basis(spec, mode)?;
    let (value, deriv) = sol.eval(spec.eps)?;
    if value.is_zero() {
        return Err(SolveError::ModeSingular {
            k: mode.k,
            j: mode.j,
            reason: "R(eps) = 0 to working precision".into(),
        });
    }
    let sigma = (-deriv).ratio(&value).map_err(SolveError::Math)?;
    // the Neumann (0,0) mode is exactly 0; snap away rounding-level dust
    if spec.outer_bc == OuterBc::Neumann
        && mode.k == 0
        && mode.j == 0
        && sigma.abs() < T::of(1e-13) / spec.eps
    {
        return Ok(T::zero());
    }
    Ok(sigma)
}

/// The same Steklov value through the hand-simplified per-case formulas.
///
/// Kept deliberately separate from [`steklov_value`]; the two are
/// cross-asserted in tests so a transcription slip in either is caught.
pub fn steklov_value_explicit<T: Real>(
    spec: &ProblemSpec<T>,
    mode: &ModeData<T>,
) -> Result<T, SolveError> {
    spec.validate()?;
    let d = spec.codim();
    let eps = spec.eps;
    let delta = spec.delta;
    let dirichlet = spec.outer_bc == OuterBc::Dirichlet;
    let jf = T::of_usize(mode.j);

    if mode.lambda == T::zero() {
        if mode.j == 0 {
            if !dirichlet {
                // constant solution
                return Ok(T::zero());
            }
            return if d == 2 {
                // sigma = 1 / (eps ln(delta/eps))
                Ok(((delta / eps).ln() * eps).recip())
            } else {
                // sigma = (d-2) / (eps (1 - (eps/delta)^{d-2}))
                let q = (eps / delta).powi(d as i32 - 2);
                Ok(T::of((d - 2) as f64) / (eps * (T::one() - q)))
            };
        }
        // p = d - 2 + j, q = (eps/delta)^{d-2+2j}
        let p = T::of((d - 2) as f64) + jf;
        let q = (eps / delta).powi(d as i32 - 2 + 2 * mode.j as i32);
        return if dirichlet {
            Ok((p + jf * q) / (eps * (T::one() - q)))
        } else {
            Ok(jf * p * (T::one() - q) / (eps * (jf + p * q)))
        };
    }

    // lambda > 0: Bessel-ratio expressions, grouped so the dominant K-terms
    // never cancel and every intermediate stays in scaled form
    let sqrt_lambda = mode.lambda.sqrt();
    let x_eps = sqrt_lambda * eps;
    let x_delta = sqrt_lambda * delta;
    let qe: BesselQuartet<T> = bessel_quartet(mode.nu, x_eps).map_err(SolveError::Math)?;
    let qd: BesselQuartet<T> = bessel_quartet(mode.nu, x_delta).map_err(SolveError::Math)?;

    let (num, den) = if dirichlet {
        // C = K(x_delta)/I(x_delta); sigma = -l/eps + sqrt(lambda)(C I' - K')/(K - C I)
        let c = qd.k / qd.i;
        (c * qe.i_prime - qe.k_prime, qe.k - c * qe.i)
    } else {
        // C = (l I + x I')/(l K + x K') at x_delta;
        // sigma = -l/eps + sqrt(lambda)(C K' - I')/(I - C K)
        let c = (qd.i * mode.l + qd.i_prime * x_delta) / (qd.k * mode.l + qd.k_prime * x_delta);
        (c * qe.k_prime - qe.i_prime, qe.i - c * qe.k)
    };
    if den.is_zero() {
        return Err(SolveError::ModeSingular {
            k: mode.k,
            j: mode.j,
            reason: "explicit-formula denominator vanished".into(),
        });
    }
    let ratio = num.ratio(&den).map_err(SolveError::Math)?;
    Ok(-mode.l / eps + sqrt_lambda * ratio)
}

/// Leading-order prediction for the mode's Steklov value as `eps -> 0`.
pub fn steklov_asymptotic<T: Real>(
    spec: &ProblemSpec<T>,
    mode: &ModeData<T>,
) -> Result<T, SolveError> {
    spec.validate()?;
    let d = spec.codim();
    let eps = spec.eps;
    let neumann = spec.outer_bc == OuterBc::Neumann;
    if neumann && mode.k == 0 && mode.j == 0 {
        return Ok(T::zero());
    }
    if d == 2 && mode.j == 0 {
        if !neumann {
            // 1 / (eps |log eps|), every k
            return Ok((eps * eps.ln().abs()).recip());
        }
        // Neumann, k > 0: 1 / (eps (|log(sqrt(lambda) eps)| - K_0'(x_delta)/I_0'(x_delta)))
        let sqrt_lambda = mode.lambda.sqrt();
        let x_delta = sqrt_lambda * spec.delta;
        let q: BesselQuartet<T> = bessel_quartet(T::zero(), x_delta).map_err(SolveError::Math)?;
        let ratio = q.k_prime.ratio(&q.i_prime).map_err(SolveError::Math)?;
        let denom = (sqrt_lambda * eps).ln().abs() - ratio;
        return Ok((eps * denom).recip());
    }
    // (m - n - 2 + j) / eps
    Ok((T::of((d - 2) as f64) + T::of_usize(mode.j)) / eps)
}

/// Residual of the outer boundary condition, normalized by the solution
/// size: `|R(delta)| / |delta R'(delta)|` for Dirichlet and the reciprocal
/// arrangement for Neumann.
pub fn outer_residual<T: Real>(
    spec: &ProblemSpec<T>,
    sol: &RadialSolution<T>,
) -> Result<T, SolveError> {
    let (value, deriv) = sol.eval(spec.delta)?;
    let (hit, other) = match spec.outer_bc {
        OuterBc::Dirichlet => (value, deriv * spec.delta),
        OuterBc::Neumann => (deriv * spec.delta, value),
    };
    if other.is_zero() {
        return Ok(if hit.is_zero() {
            T::zero()
        } else {
            T::infinity()
        });
    }
    Ok(hit.ratio(&other).map_err(SolveError::Math)?.abs())
}
