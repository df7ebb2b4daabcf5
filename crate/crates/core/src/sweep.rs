//! Quantitative verification of the limit laws: eps-sweeps with the
//! law-dictated scaling, least-squares limit fits, the perimeter-normalized
//! spectral gap, and the point-excision dual-path identity.

use serde::{Deserialize, Serialize};

use crate::assemble::assemble;
use crate::error::SolveError;
use crate::radial::{steklov_value, ModeData, OuterBc, ProblemSpec};
use crate::real::Real;
use crate::special::unit_sphere_area;
use crate::spectra::BaseManifold;

/// One sweep point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SweepRecord<T> {
    pub eps: T,
    pub sigma: T,
    /// `eps * sigma`, or `eps |ln eps| sigma` under the log-corrected law.
    pub scaled: T,
    /// Limit the scaled value approaches.
    pub target: T,
    /// `scaled - target`, exactly as computed.
    pub residual: T,
}

/// Scaling law a sweep was recorded under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingLaw {
    /// `eps * sigma -> m - n - 2 + j`, power-law corrections.
    Linear,
    /// `eps |ln eps| sigma -> 1` (codimension-2 `j = 0`), log-rate corrections.
    LogCorrected,
}

/// A full sweep: the records plus the law they were scaled under.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sweep<T> {
    pub records: Vec<SweepRecord<T>>,
    pub law: ScalingLaw,
    /// Mode identity, for reporting.
    pub k: usize,
    pub j: usize,
}

impl<T: Real> Sweep<T> {
    /// CSV rendering with columns `eps,sigma,scaled,target,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,sigma,scaled,target,residual\n");
        for r in &self.records {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.eps, r.sigma, r.scaled, r.target, r.residual
            ));
        }
        out
    }
}

/// Sweeps mode `(k, j)` over a strictly decreasing eps list, scaling each
/// value by the law its cluster obeys.
pub fn sweep_mode<T: Real>(
    template: &ProblemSpec<T>,
    k: usize,
    j: usize,
    eps_list: &[T],
) -> Result<Sweep<T>, SolveError> {
    if eps_list.is_empty() {
        return Err(SolveError::InvalidProblem("empty eps list".into()));
    }
    for w in eps_list.windows(2) {
        if !(w[1] < w[0]) {
            return Err(SolveError::InvalidProblem(
                "eps list must be strictly decreasing".into(),
            ));
        }
    }
    if !(eps_list[0] < template.delta) {
        return Err(SolveError::InvalidProblem(
            "every eps must be below delta".into(),
        ));
    }
    let d = template.codim();
    let neumann = template.outer_bc == OuterBc::Neumann;
    let zero_mode = neumann && k == 0 && j == 0;
    let law = if d == 2 && j == 0 {
        ScalingLaw::LogCorrected
    } else {
        ScalingLaw::Linear
    };
    let target = if zero_mode {
        T::zero()
    } else if law == ScalingLaw::LogCorrected {
        T::one()
    } else {
        T::of((d - 2) as f64) + T::of_usize(j)
    };

    let mut records = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let spec = template.with_eps(eps);
        let mode = ModeData::for_indices(&spec, k, j)?;
        let sigma = steklov_value(&spec, &mode)?;
        let scale = match law {
            ScalingLaw::Linear => eps,
            ScalingLaw::LogCorrected => eps * eps.ln().abs(),
        };
        let scaled = scale * sigma;
        records.push(SweepRecord {
            eps,
            sigma,
            scaled,
            target,
            residual: scaled - target,
        });
    }
    Ok(Sweep { records, law, k, j })
}

/// Limit fit extracted from a sweep.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FitReport<T> {
    /// Intercept of the scaled values against the law's regressor.
    pub fitted_limit: T,
    /// Slope of `ln |residual|` against `ln eps` (power laws) or
    /// `ln |ln eps|` (log laws); NaN when the law is exact.
    pub convergence_exponent: T,
    pub r_squared: T,
    /// Residuals were zero to working precision; the exponent is
    /// unidentifiable and `fitted_limit` is the plain mean.
    pub exact_law: bool,
}

fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<(T, T, T), SolveError> {
    // returns (intercept, slope, r^2)
    let n = T::of_usize(xs.len());
    let mx = xs.iter().cloned().sum::<T>() / n;
    let my = ys.iter().cloned().sum::<T>() / n;
    let sxx = xs.iter().map(|&x| (x - mx) * (x - mx)).sum::<T>();
    let sxy = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (x - mx) * (y - my))
        .sum::<T>();
    let syy = ys.iter().map(|&y| (y - my) * (y - my)).sum::<T>();
    if sxx == T::zero() {
        return Err(SolveError::DegenerateFit(
            "regressor has zero variance".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == T::zero() {
        T::one()
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok((intercept, slope, r2))
}

/// Least-squares limit fit: scaled values against `1/|ln eps|` for the
/// log-corrected law, or against `eps^p` (p from the residual decay) for
/// power laws.  Needs at least 4 records.
pub fn fit_limit<T: Real>(sweep: &Sweep<T>) -> Result<FitReport<T>, SolveError> {
    let records = &sweep.records;
    if records.len() < 4 {
        return Err(SolveError::DegenerateFit(format!(
            "need at least 4 records, got {}",
            records.len()
        )));
    }
    let scale = records
        .iter()
        .map(|r| r.target.abs())
        .fold(T::one(), T::max);
    if records
        .iter()
        .all(|r| r.residual.abs() <= T::of(1e-13) * scale)
    {
        let mean = records.iter().map(|r| r.scaled).sum::<T>() / T::of_usize(records.len());
        return Ok(FitReport {
            fitted_limit: mean,
            convergence_exponent: T::nan(),
            r_squared: T::one(),
            exact_law: true,
        });
    }

    // convergence exponent from the residual decay
    let (log_x, log_r): (Vec<T>, Vec<T>) = records
        .iter()
        .filter(|r| r.residual != T::zero())
        .map(|r| {
            let regressor = match sweep.law {
                ScalingLaw::Linear => r.eps.ln(),
                ScalingLaw::LogCorrected => r.eps.ln().abs().ln(),
            };
            (regressor, r.residual.abs().ln())
        })
        .unzip();
    let (_, exponent, _) = linear_fit(&log_x, &log_r)?;

    // limit from the intercept of scaled vs the law's regressor
    let xs: Vec<T> = records
        .iter()
        .map(|r| match sweep.law {
            ScalingLaw::Linear => r.eps.powf(exponent.max(T::of(1e-3))),
            ScalingLaw::LogCorrected => r.eps.ln().abs().recip(),
        })
        .collect();
    let ys: Vec<T> = records.iter().map(|r| r.scaled).collect();
    let (intercept, _, r2) = linear_fit(&xs, &ys)?;
    Ok(FitReport {
        fitted_limit: intercept,
        convergence_exponent: exponent,
        r_squared: r2.min(T::one()).max(T::zero()),
        exact_law: false,
    })
}

/// Perimeter-normalized first eigenvalue at one eps, from the certified
/// Dirichlet-Neumann bracket.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GapRecord<T> {
    pub eps: T,
    /// Steklov-Neumann lower bracket `sigma_1^N`.
    pub sigma1_lower: T,
    /// Steklov-Dirichlet upper bracket `sigma_2^D`.
    pub sigma1_upper: T,
    pub midpoint: T,
    pub interval_width: T,
    /// `|boundary| = vol(N) * omega_{m-n-1} * eps^{m-n-1}` in the product
    /// metric.
    pub boundary_volume: T,
    /// `midpoint * |boundary|^{1/(m-1)}`.
    pub normalized: T,
    pub normalized_lower: T,
    pub normalized_upper: T,
}

/// Computes the perimeter-normalized gap quantity
/// `sigma_1 * |boundary|^{1/(m-1)}`, bracketing `sigma_1` between the
/// certified Neumann and Dirichlet mixed values.
///
/// Fails with a truncation error when the `(k_max, j_max)` rectangle cannot
/// certify both bracket sides.
pub fn normalized_gap<T: Real>(
    spec: &ProblemSpec<T>,
    k_max: usize,
    j_max: usize,
) -> Result<GapRecord<T>, SolveError> {
    spec.validate()?;
    let mut nspec = spec.clone();
    nspec.outer_bc = OuterBc::Neumann;
    let mut dspec = spec.clone();
    dspec.outer_bc = OuterBc::Dirichlet;
    let ntable = assemble(&nspec, k_max, j_max)?;
    let dtable = assemble(&dspec, k_max, j_max)?;

    let neu = ntable.certified_expanded();
    let dir = dtable.certified_expanded();
    if neu.len() < 2 || dir.len() < 2 {
        return Err(SolveError::Uncertified(
            "sigma_1 bracket not certified on this rectangle; enlarge k_max/j_max".into(),
        ));
    }
    let lower = neu[1]; // sigma_1^N (index 0 is the zero mode)
    let upper = dir[1]; // sigma_2^D (Dirichlet indexed from 1)
    let midpoint = (lower + upper) / T::of(2.0);

    let d = spec.codim();
    let area: T = unit_sphere_area(d).map_err(SolveError::Math)?;
    let boundary_volume = spec.base.volume()? * area * spec.eps.powi(d as i32 - 1);
    let norm_factor = boundary_volume.powf((T::of_usize(spec.m as usize) - T::one()).recip());
    Ok(GapRecord {
        eps: spec.eps,
        sigma1_lower: lower,
        sigma1_upper: upper,
        midpoint,
        interval_width: upper - lower,
        boundary_volume,
        normalized: midpoint * norm_factor,
        normalized_lower: lower * norm_factor,
        normalized_upper: upper * norm_factor,
    })
}

/// Log-log slope of the normalized gap across a gap series (least squares).
pub fn gap_series_slope<T: Real>(records: &[GapRecord<T>]) -> Result<T, SolveError> {
    if records.len() < 2 {
        return Err(SolveError::DegenerateFit(
            "need at least 2 gap records".into(),
        ));
    }
    let xs: Vec<T> = records.iter().map(|r| r.eps.ln()).collect();
    let ys: Vec<T> = records.iter().map(|r| r.normalized.ln()).collect();
    let (_, slope, _) = linear_fit(&xs, &ys)?;
    Ok(slope)
}

/// One point-excision comparison row: the explicit annulus formulas for the
/// punctured ball against the generic radial machinery with a `Point` base.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PointExcisionRecord<T> {
    pub k: usize,
    pub sigma_neumann: T,
    pub sigma_dirichlet: T,
    pub generic_neumann: T,
    pub generic_dirichlet: T,
    pub rel_dev_neumann: T,
    pub rel_dev_dirichlet: T,
    /// `eps * sigma_k^N`, approaching `m + k - 2`.
    pub eps_sigma_neumann: T,
    pub limit: T,
}

/// Explicit punctured-ball eigenvalues for `k >= 1`:
///
/// `sigma_k^N = k(m+k-2)(1-q) / (eps (k + (m+k-2) q))` and
/// `sigma_{k+1}^D = ((m+k-2) + k q) / (eps (1-q))`, `q = (eps/delta)^{m+2k-2}`.
pub fn point_annulus_formulas<T: Real>(m: u32, eps: T, delta: T, k: usize) -> (T, T) {
    let kf = T::of_usize(k);
    let p = T::of((m - 2) as f64) + kf; // m + k - 2
    let q = (eps / delta).powi(m as i32 + 2 * k as i32 - 2);
    let neumann = kf * p * (T::one() - q) / (eps * (kf + p * q));
    let dirichlet = (p + kf * q) / (eps * (T::one() - q));
    (neumann, dirichlet)
}

/// Evaluates both the explicit punctured-ball formulas and the generic
/// radial machinery with `Point` base, and insists they agree identically.
///
/// `k = 0` rides along as the log/power branch: `sigma^D_1` is
/// `1/(eps ln(delta/eps))` for `m = 2` and the plain power form otherwise,
/// while `sigma^N_0 = 0`.
pub fn point_excision_check<T: Real>(
    m: u32,
    eps: T,
    delta: T,
    k_max: usize,
) -> Result<Vec<PointExcisionRecord<T>>, SolveError> {
    if m < 2 {
        return Err(SolveError::InvalidProblem(format!(
            "m must be >= 2, got {m}"
        )));
    }
    if k_max < 1 {
        return Err(SolveError::InvalidProblem("k_max must be >= 1".into()));
    }
    let spec_for = |bc: OuterBc| ProblemSpec {
        m,
        n: 0,
        eps,
        delta,
        base: BaseManifold::Point,
        outer_bc: bc,
    };
    let nspec = spec_for(OuterBc::Neumann);
    let dspec = spec_for(OuterBc::Dirichlet);
    let tol = T::of(1e-12);

    let mut records = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        // for a point base the spherical-harmonic index on S^{m-1} is the
        // generic machinery's j
        let (sig_n, sig_d) = if k == 0 {
            let d0 = if m == 2 {
                ((delta / eps).ln() * eps).recip()
            } else {
                let q = (eps / delta).powi(m as i32 - 2);
                T::of((m - 2) as f64) / (eps * (T::one() - q))
            };
            (T::zero(), d0)
        } else {
            point_annulus_formulas(m, eps, delta, k)
        };
        let gen_n = steklov_value(&nspec, &ModeData::for_indices(&nspec, 0, k)?)?;
        let gen_d = steklov_value(&dspec, &ModeData::for_indices(&dspec, 0, k)?)?;

        let rel = |a: T, b: T| {
            if b == T::zero() {
                a.abs()
            } else {
                ((a - b) / b).abs()
            }
        };
        let dev_n = rel(gen_n, sig_n);
        let dev_d = rel(gen_d, sig_d);
        if dev_n > tol || dev_d > tol {
            return Err(SolveError::DualPathMismatch(format!(
                "punctured-ball formulas and generic solver disagree at m={m}, k={k}: \
                 Neumann dev {dev_n:e}, Dirichlet dev {dev_d:e}"
            )));
        }
        records.push(PointExcisionRecord {
            k,
            sigma_neumann: sig_n,
            sigma_dirichlet: sig_d,
            generic_neumann: gen_n,
            generic_dirichlet: gen_d,
            rel_dev_neumann: dev_n,
            rel_dev_dirichlet: dev_d,
            eps_sigma_neumann: eps * sig_n,
            limit: T::of((m - 2) as f64) + T::of_usize(k),
        });
    }
    Ok(records)
}
