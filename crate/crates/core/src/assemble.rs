//! Assembly of per-mode Steklov values into sorted multiset spectra, the
//! cluster view, the Dirichlet-Neumann bracketing audit, the two-sided
//! slit-torus example, and the quasi-isometry comparison interval.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::radial::{steklov_value, ModeData, OuterBc, ProblemSpec};
use crate::real::Real;
use crate::spectra::{base_spectrum, cross_section_spectrum};

/// One eigenvalue of the assembled spectrum, with mode provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueEntry<T> {
    pub sigma: T,
    pub k: usize,
    pub j: usize,
    pub multiplicity: u64,
    /// The limit of `eps * sigma` for this mode's cluster, `m - n - 2 + j`.
    pub cluster_target: T,
}

/// Sorted multiset spectrum of one mixed problem on the computed
/// `(k, j)` rectangle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumTable<T> {
    /// Entries ascending in `sigma`; ties broken by `(j, k)`.
    pub entries: Vec<EigenvalueEntry<T>>,
    pub k_max: usize,
    pub j_max: usize,
    /// Threshold the caller asked to certify, if any.
    pub threshold: Option<T>,
    /// Largest value below which the enumeration is certified complete, when
    /// the monotonicity audit passed.
    pub complete_below: Option<T>,
    pub warnings: Vec<String>,
}

impl<T: Real> SpectrumTable<T> {
    /// Eigenvalues expanded by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<T> {
        let mut out = Vec::new();
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                out.push(e.sigma);
            }
        }
        out
    }

    /// Entries certified complete (below `complete_below`), expanded.
    pub fn certified_expanded(&self) -> Vec<T> {
        match self.complete_below {
            None => Vec::new(),
            Some(cb) => self.expanded().into_iter().filter(|&s| s <= cb).collect(),
        }
    }

    /// CSV rendering with the fixed column contract
    /// `sigma,k,j,multiplicity,cluster_target,scaled_eps_sigma`.
    pub fn to_csv(&self, eps: T) -> String {
        let mut out = String::from("sigma,k,j,multiplicity,cluster_target,scaled_eps_sigma\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{:.16e},{},{},{},{:.16e},{:.16e}\n",
                e.sigma,
                e.k,
                e.j,
                e.multiplicity,
                e.cluster_target,
                eps * e.sigma
            ));
        }
        out
    }
}

/// Computes every mode in the `(0..=k_max) x (0..=j_max)` rectangle and
/// sorts the multiset.
///
/// Completeness is certified by the monotonicity audit: when `sigma` is
/// nondecreasing in `k` along every `j`-row and in `j` along every
/// `k`-column, any mode outside the rectangle dominates the boundary, so
/// everything below the smallest boundary value is complete.  The audit is
/// empirical; if it fails the table is still returned, flagged, with
/// `complete_below` unset.
pub fn assemble<T: Real>(
    spec: &ProblemSpec<T>,
    k_max: usize,
    j_max: usize,
) -> Result<SpectrumTable<T>, SolveError> {
    assemble_with_threshold(spec, k_max, j_max, None)
}

/// [`assemble`], additionally checking that certification reaches a
/// requested threshold (a warning is attached when it does not).
pub fn assemble_with_threshold<T: Real>(
    spec: &ProblemSpec<T>,
    k_max: usize,
    j_max: usize,
    threshold: Option<T>,
) -> Result<SpectrumTable<T>, SolveError> {
    spec.validate()?;
    // ask for one extra line to learn whether the base spectrum is
    // exhausted (a Point has only lambda = 0, Custom data may run out)
    let mut lambdas = base_spectrum(&spec.base, k_max + 2)?;
    let ran_out = lambdas.len() <= k_max + 1;
    lambdas.truncate(k_max + 1);
    // a genuinely finite base spectrum (Point) is complete in the k
    // direction, so the k-side boundary bound does not constrain; a Custom
    // spectrum that merely ran out of provided data stays constrained
    let k_direction_complete = ran_out && matches!(spec.base, crate::spectra::BaseManifold::Point);
    let mus = cross_section_spectrum(spec.codim(), j_max)?;
    let d = spec.codim();

    let mut grid: Vec<Vec<T>> = Vec::with_capacity(lambdas.len());
    let mut entries = Vec::new();
    for lam in &lambdas {
        let mut row = Vec::with_capacity(j_max + 1);
        for mu in &mus {
            let mode = ModeData::new(spec, lam, mu);
            let sigma = steklov_value(spec, &mode)?;
            row.push(sigma);
            entries.push(EigenvalueEntry {
                sigma,
                k: lam.index,
                j: mu.index,
                multiplicity: mode.multiplicity,
                cluster_target: T::of((d - 2) as f64) + T::of_usize(mu.index),
            });
        }
        grid.push(row);
    }

    // monotonicity audit over the computed rectangle
    let tol = T::of(1.0 - 1e-12);
    let mut monotone = true;
    for row in &grid {
        for w in row.windows(2) {
            if w[1] < w[0] * tol {
                monotone = false;
            }
        }
    }
    for j in 0..=j_max {
        for k in 1..grid.len() {
            if grid[k][j] < grid[k - 1][j] * tol {
                monotone = false;
            }
        }
    }

    let mut warnings = Vec::new();
    let complete_below = if monotone {
        // smallest value on the far row/column bounds everything outside
        let k_bound = if k_direction_complete {
            T::infinity()
        } else {
            grid.last()
                .map(|row| row.iter().cloned().fold(T::infinity(), T::min))
                .unwrap_or(T::infinity())
        };
        let j_bound = grid
            .iter()
            .map(|row| row[j_max])
            .fold(T::infinity(), T::min);
        Some(k_bound.min(j_bound))
    } else {
        warnings.push(
            "monotonicity audit failed on the computed rectangle; enumeration \
             completeness cannot be certified"
                .to_string(),
        );
        None
    };

    if let (Some(th), Some(cb)) = (threshold, complete_below) {
        if cb < th {
            warnings.push(format!(
                "requested certification threshold {th} exceeds certified bound {cb}; \
                 enlarge k_max/j_max"
            ));
        }
    }

    entries.sort_by(|a, b| {
        a.sigma
            .partial_cmp(&b.sigma)
            .expect("finite sigma")
            .then(a.j.cmp(&b.j))
            .then(a.k.cmp(&b.k))
    });

    Ok(SpectrumTable {
        entries,
        k_max,
        j_max,
        threshold,
        complete_below,
        warnings,
    })
}

/// Per-cluster view of a table: all entries with a common `j`, rescaled by
/// the cluster's limit law.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterSummary<T> {
    pub j: usize,
    /// Number of distinct entries contributing.
    pub count: usize,
    /// `eps * sigma` statistics (or `eps |ln eps| sigma` for the
    /// codimension-2 `j = 0` cluster, whose linear scaling degenerates).
    pub min_scaled: T,
    pub max_scaled: T,
    pub mean_scaled: T,
    /// Limit the scaled values approach as `eps -> 0`.
    pub law_target: T,
    /// `max |scaled - law_target|` over the cluster.
    pub spread: T,
    /// Whether the log-corrected scaling was applied.
    pub log_scaled: bool,
}

/// Groups a table's entries by `j` and reports scaled statistics per
/// cluster.
///
/// The exact zero mode (Neumann `(0,0)`) is excluded: it is its own
/// eigenvalue `sigma_0 = 0`, not part of any diverging cluster.
pub fn clusters<T: Real>(
    table: &SpectrumTable<T>,
    spec: &ProblemSpec<T>,
) -> Vec<ClusterSummary<T>> {
    let eps = spec.eps;
    let d = spec.codim();
    let mut out: Vec<ClusterSummary<T>> = Vec::new();
    for j in 0..=table.j_max {
        let log_scaled = d == 2 && j == 0;
        let scale = if log_scaled {
            eps * eps.ln().abs()
        } else {
            eps
        };
        let law_target = if log_scaled {
            T::one()
        } else {
            T::of((d - 2) as f64) + T::of_usize(j)
        };
        let scaled: Vec<T> = table
            .entries
            .iter()
            .filter(|e| e.j == j && !(e.k == 0 && e.j == 0 && e.sigma == T::zero()))
            .map(|e| e.sigma * scale)
            .collect();
        if scaled.is_empty() {
            continue;
        }
        let min = scaled.iter().cloned().fold(T::infinity(), T::min);
        let max = scaled.iter().cloned().fold(T::neg_infinity(), T::max);
        let mean = scaled.iter().cloned().sum::<T>() / T::of_usize(scaled.len());
        let spread = scaled
            .iter()
            .map(|&s| (s - law_target).abs())
            .fold(T::neg_infinity(), T::max);
        out.push(ClusterSummary {
            j,
            count: scaled.len(),
            min_scaled: min,
            max_scaled: max,
            mean_scaled: mean,
            law_target,
            spread,
            log_scaled,
        });
    }
    out
}

/// One two-sided bound `sigma_i^N <= sigma_i(domain) <= sigma_{i+1}^D`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BracketInterval<T> {
    pub index: usize,
    pub lower: T,
    pub upper: T,
}

/// Result of the Dirichlet-Neumann bracketing audit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketReport<T> {
    /// Common certification threshold of the two tables.
    pub certified_below: T,
    /// Intervals for every certified index.
    pub intervals: Vec<BracketInterval<T>>,
    /// Indices where `sigma_i^N > sigma_{i+1}^D` (must be empty).
    pub violations: Vec<usize>,
}

impl<T: Real> BracketReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Assembles both outer conditions on the same rectangle and verifies the
/// interlacing `sigma_i^N <= sigma_{i+1}^D` on every certified index.
///
/// The Dirichlet spectrum is indexed from 1, so after multiplicity
/// expansion the comparison is elementwise between the two sorted arrays.
pub fn bracketing_audit<T: Real>(
    spec: &ProblemSpec<T>,
    k_max: usize,
    j_max: usize,
) -> Result<BracketReport<T>, SolveError> {
    let mut nspec = spec.clone();
    nspec.outer_bc = OuterBc::Neumann;
    let mut dspec = spec.clone();
    dspec.outer_bc = OuterBc::Dirichlet;
    let ntable = assemble(&nspec, k_max, j_max)?;
    let dtable = assemble(&dspec, k_max, j_max)?;
    let (Some(ncb), Some(dcb)) = (ntable.complete_below, dtable.complete_below) else {
        return Err(SolveError::Uncertified(
            "bracketing audit requires both tables certified on the rectangle".into(),
        ));
    };
    let certified_below = ncb.min(dcb);
    let neu = ntable.expanded();
    let dir = dtable.expanded();

    let mut intervals = Vec::new();
    let mut violations = Vec::new();
    for (i, (&lo, &hi)) in neu.iter().zip(dir.iter()).enumerate() {
        if lo > certified_below || hi > certified_below {
            break;
        }
        intervals.push(BracketInterval {
            index: i,
            lower: lo,
            upper: hi,
        });
        if lo > hi * (T::one() + T::of(1e-12)) {
            violations.push(i);
        }
    }
    Ok(BracketReport {
        certified_below,
        intervals,
        violations,
    })
}

/// [`bracketing_audit`] on a rectangle grown until at least `min_entries`
/// bracket intervals are certified (doubling `k_max`, widening `j_max`).
pub fn bracketing_audit_certified<T: Real>(
    spec: &ProblemSpec<T>,
    min_entries: usize,
) -> Result<BracketReport<T>, SolveError> {
    let mut k_max = 12usize;
    let mut j_max = 6usize;
    for _ in 0..6 {
        let report = bracketing_audit(spec, k_max, j_max)?;
        if report.intervals.len() >= min_entries {
            return Ok(report);
        }
        k_max *= 2;
        j_max += 4;
    }
    Err(SolveError::Uncertified(format!(
        "could not certify {min_entries} bracket entries below k_max={k_max}, j_max={j_max}"
    )))
}

/// Exact two-sided Steklov spectrum of the flat cylinder
/// `S^1 x [eps, 1-eps]` (the slit flat torus), `0 < eps < 1/2`.
///
/// The eigenvalues are `0`, `2/(1-2 eps)` and, for `k >= 1`, the pairs
/// `k tanh(k(1-2 eps)/2)` and `k coth(k(1-2 eps)/2)`, each with
/// multiplicity 2.  `cluster_target` holds the finite `eps -> 0` limit —
/// the codimension-1 contrast with the diverging tubular clusters.
pub fn torus_slit_spectrum<T: Real>(eps: T, k_max: usize) -> Result<SpectrumTable<T>, SolveError> {
    if !(eps > T::zero() && eps < T::of(0.5)) {
        return Err(SolveError::InvalidProblem(format!(
            "slit half-width must satisfy 0 < eps < 1/2, got {eps}"
        )));
    }
    let width = T::one() - T::of(2.0) * eps;
    let mut entries = Vec::new();
    // k = 0: constant (sigma = 0, symmetric) and linear (antisymmetric)
    entries.push(EigenvalueEntry {
        sigma: T::zero(),
        k: 0,
        j: 0,
        multiplicity: 1,
        cluster_target: T::zero(),
    });
    entries.push(EigenvalueEntry {
        sigma: T::of(2.0) / width,
        k: 0,
        j: 1,
        multiplicity: 1,
        cluster_target: T::of(2.0),
    });
    for k in 1..=k_max {
        let kf = T::of_usize(k);
        let arg = kf * width / T::of(2.0);
        let half = kf / T::of(2.0);
        entries.push(EigenvalueEntry {
            sigma: kf * arg.tanh(),
            k,
            j: 0,
            multiplicity: 2,
            cluster_target: kf * half.tanh(),
        });
        entries.push(EigenvalueEntry {
            sigma: kf * (arg.tanh().recip()),
            k,
            j: 1,
            multiplicity: 2,
            cluster_target: kf * (half.tanh().recip()),
        });
    }
    entries.sort_by(|a, b| {
        a.sigma
            .partial_cmp(&b.sigma)
            .expect("finite sigma")
            .then(a.j.cmp(&b.j))
            .then(a.k.cmp(&b.k))
    });
    // the smallest value not enumerated is the next symmetric one,
    // (k_max+1) tanh((k_max+1) width / 2)
    let next = T::of_usize(k_max + 1);
    let complete_below = next * (next * width / T::of(2.0)).tanh();
    Ok(SpectrumTable {
        entries,
        k_max,
        j_max: 1,
        threshold: None,
        complete_below: Some(complete_below),
        warnings: Vec::new(),
    })
}

/// Guaranteed range of a Steklov eigenvalue under a `K`-quasi-isometric
/// change of metric: `[sigma / K^{m+1/2}, sigma * K^{m+1/2}]`.
pub fn quasi_isometry_interval<T: Real>(
    sigma: T,
    k_const: T,
    m: u32,
) -> Result<(T, T), SolveError> {
    if !(k_const >= T::one()) {
        return Err(SolveError::InvalidProblem(format!(
            "quasi-isometry constant must be >= 1, got {k_const}"
        )));
    }
    if !(sigma >= T::zero()) {
        return Err(SolveError::InvalidProblem(format!(
            "sigma must be >= 0, got {sigma}"
        )));
    }
    let exponent = T::of_usize(m as usize) + T::of(0.5);
    let factor = (exponent * k_const.ln()).exp();
    Ok((sigma / factor, sigma * factor))
}
