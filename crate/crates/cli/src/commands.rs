//! Command implementations: each returns the artifact files to write plus
//! an audit verdict, and the caller handles I/O and exit codes.

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use steklov::assemble::{assemble, clusters, torus_slit_spectrum, ClusterSummary};
use steklov::radial::{steklov_asymptotic, steklov_value, ModeData, ProblemSpec};
use steklov::spectra::base_spectrum;
use steklov::sweep::{
    fit_limit, gap_series_slope, normalized_gap, point_excision_check, sweep_mode,
};
use steklov::verify::{oracle_agreement, VerifyGrid, VerifyReport};

use crate::config::{
    GapConfig, PointConfig, RectangleConfig, SweepConfig, TorusConfig, VerifyConfig,
};

/// One output file: `<prefix>.<suffix>` with the given contents.
pub struct Artifact {
    pub suffix: &'static str,
    pub contents: String,
}

/// Outcome of a command: artifacts plus whether every audit passed.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub audits_passed: bool,
    pub summary: String,
}

fn json_artifact<T: Serialize>(value: &T) -> Result<Artifact> {
    let contents = serde_json::to_string_pretty(value).context("serializing JSON metadata")?;
    Ok(Artifact {
        suffix: "json",
        contents: contents + "\n",
    })
}

fn spec_from(c: &RectangleConfig) -> Result<ProblemSpec<f64>> {
    let spec = ProblemSpec {
        m: c.m,
        n: c.n,
        eps: c.eps,
        delta: c.delta,
        base: c.base.clone(),
        outer_bc: c.outer_bc,
    };
    spec.validate().map_err(|e| anyhow!(e))?;
    Ok(spec)
}

pub fn run_modes(c: &RectangleConfig) -> Result<Outcome> {
    let spec = spec_from(c)?;
    let lambdas = base_spectrum(&spec.base, c.k_max + 1).map_err(|e| anyhow!(e))?;
    let mut csv = String::from("k,j,lambda,mu,nu,l,multiplicity,sigma,sigma_asymptotic\n");
    let mut count = 0usize;
    for lam in &lambdas {
        for j in 0..=c.j_max {
            let mode = ModeData::for_indices(&spec, lam.index, j).map_err(|e| anyhow!(e))?;
            let sigma = steklov_value(&spec, &mode).map_err(|e| anyhow!(e))?;
            let asym = steklov_asymptotic(&spec, &mode).map_err(|e| anyhow!(e))?;
            csv.push_str(&format!(
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e}\n",
                mode.k,
                mode.j,
                mode.lambda,
                mode.mu,
                mode.nu,
                mode.l,
                mode.multiplicity,
                sigma,
                asym
            ));
            count += 1;
        }
    }

    #[derive(Serialize)]
    struct Meta<'a> {
        spec: &'a ProblemSpec<f64>,
        k_max: usize,
        j_max: usize,
        mode_count: usize,
    }
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                suffix: "modes.csv",
                contents: csv,
            },
            json_artifact(&Meta {
                spec: &spec,
                k_max: c.k_max,
                j_max: c.j_max,
                mode_count: count,
            })?,
        ],
        audits_passed: true,
        summary: format!("modes: {count} separated modes evaluated"),
    })
}

pub fn run_spectrum(c: &RectangleConfig) -> Result<Outcome> {
    let spec = spec_from(c)?;
    let table = assemble(&spec, c.k_max, c.j_max).map_err(|e| anyhow!(e))?;
    let cluster_rows = clusters(&table, &spec);

    let mut cluster_csv =
        String::from("j,count,min_scaled,max_scaled,mean_scaled,law_target,spread,log_scaled\n");
    for cl in &cluster_rows {
        cluster_csv.push_str(&format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            cl.j,
            cl.count,
            cl.min_scaled,
            cl.max_scaled,
            cl.mean_scaled,
            cl.law_target,
            cl.spread,
            cl.log_scaled
        ));
    }

    #[derive(Serialize)]
    struct Meta<'a> {
        spec: &'a ProblemSpec<f64>,
        k_max: usize,
        j_max: usize,
        complete_below: Option<f64>,
        warnings: &'a [String],
        clusters: &'a [ClusterSummary<f64>],
        entry_count: usize,
    }
    let meta = Meta {
        spec: &spec,
        k_max: table.k_max,
        j_max: table.j_max,
        complete_below: table.complete_below,
        warnings: &table.warnings,
        clusters: &cluster_rows,
        entry_count: table.entries.len(),
    };
    let summary = match table.complete_below {
        Some(cb) => format!(
            "spectrum: {} entries, certified complete below {cb:.6e}",
            table.entries.len()
        ),
        None => format!(
            "spectrum: {} entries, completeness not certified (see warnings)",
            table.entries.len()
        ),
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                suffix: "spectrum.csv",
                contents: table.to_csv(spec.eps),
            },
            Artifact {
                suffix: "clusters.csv",
                contents: cluster_csv,
            },
            json_artifact(&meta)?,
        ],
        audits_passed: true,
        summary,
    })
}

pub fn run_sweep(c: &SweepConfig) -> Result<Outcome> {
    let template = ProblemSpec {
        m: c.m,
        n: c.n,
        eps: *c
            .eps_list
            .first()
            .ok_or_else(|| anyhow!("eps_list must not be empty"))?,
        delta: c.delta,
        base: c.base.clone(),
        outer_bc: c.outer_bc,
    };
    template.validate().map_err(|e| anyhow!(e))?;
    let sweep = sweep_mode(&template, c.k, c.j, &c.eps_list).map_err(|e| anyhow!(e))?;
    let fit = fit_limit(&sweep).map_err(|e| anyhow!(e))?;

    #[derive(Serialize)]
    struct Meta<'a> {
        spec: &'a ProblemSpec<f64>,
        k: usize,
        j: usize,
        law: steklov::sweep::ScalingLaw,
        fit: steklov::sweep::FitReport<f64>,
    }
    let meta = Meta {
        spec: &template,
        k: c.k,
        j: c.j,
        law: sweep.law,
        fit,
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                suffix: "sweep.csv",
                contents: sweep.to_csv(),
            },
            json_artifact(&meta)?,
        ],
        audits_passed: true,
        summary: format!(
            "sweep: {} records, fitted limit {:.6} (law {:?})",
            sweep.records.len(),
            fit.fitted_limit,
            sweep.law
        ),
    })
}

pub fn run_verify(c: &VerifyConfig) -> Result<Outcome> {
    let defaults = VerifyGrid::<f64>::default();
    let grid = VerifyGrid {
        dimension_pairs: c.pairs.clone().unwrap_or(defaults.dimension_pairs),
        k_max: c.k_max.unwrap_or(defaults.k_max),
        j_max: c.j_max.unwrap_or(defaults.j_max),
        eps_list: c.eps_list.clone().unwrap_or(defaults.eps_list),
        delta: c.delta.unwrap_or(defaults.delta),
        tolerance: c.tolerance.unwrap_or(defaults.tolerance),
        zero_tolerance: defaults.zero_tolerance,
    };
    // pairs are independent; run them in parallel, merge in input order
    let sub_reports: Vec<VerifyReport<f64>> = grid
        .dimension_pairs
        .par_iter()
        .map(|&pair| {
            let sub = VerifyGrid {
                dimension_pairs: vec![pair],
                ..grid.clone()
            };
            oracle_agreement(&sub)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| anyhow!(e))?;
    let mut report = VerifyReport {
        rows: Vec::new(),
        max_deviation: 0.0f64,
        failures: 0,
    };
    for sub in sub_reports {
        report.max_deviation = report.max_deviation.max(sub.max_deviation);
        report.failures += sub.failures;
        report.rows.extend(sub.rows);
    }

    #[derive(Serialize)]
    struct Meta {
        mode_count: usize,
        max_relative_deviation: f64,
        failures: usize,
        tolerance: f64,
    }
    let meta = Meta {
        mode_count: report.rows.len(),
        max_relative_deviation: report.max_deviation,
        failures: report.failures,
        tolerance: grid.tolerance,
    };
    let passed = report.passed();
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                suffix: "verify.csv",
                contents: report.to_csv(),
            },
            json_artifact(&meta)?,
        ],
        audits_passed: passed,
        summary: format!(
            "verify: {} modes, max relative deviation {:.3e} ({})",
            report.rows.len(),
            report.max_deviation,
            if passed {
                "within tolerance"
            } else {
                "TOLERANCE EXCEEDED"
            }
        ),
    })
}

pub fn run_torus(c: &TorusConfig) -> Result<Outcome> {
    let table = torus_slit_spectrum(c.eps, c.k_max).map_err(|e| anyhow!(e))?;

    #[derive(Serialize)]
    struct Meta {
        eps: f64,
        k_max: usize,
        complete_below: Option<f64>,
        entry_count: usize,
    }
    let meta = Meta {
        eps: c.eps,
        k_max: c.k_max,
        complete_below: table.complete_below,
        entry_count: table.entries.len(),
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                suffix: "spectrum.csv",
                contents: table.to_csv(c.eps),
            },
            json_artifact(&meta)?,
        ],
        audits_passed: true,
        summary: format!("torus: {} entries at eps = {}", table.entries.len(), c.eps),
    })
}

pub fn run_point(c: &PointConfig) -> Result<Outcome> {
    // a dual-path mismatch surfaces as a hard error here
    let records = point_excision_check(c.m, c.eps, c.delta, c.k_max).map_err(|e| anyhow!(e))?;
    let mut csv = String::from(
        "k,sigma_neumann,sigma_dirichlet,generic_neumann,generic_dirichlet,\
         rel_dev_neumann,rel_dev_dirichlet,eps_sigma_neumann,limit\n",
    );
    let mut max_dev = 0.0f64;
    for r in &records {
        max_dev = max_dev.max(r.rel_dev_neumann).max(r.rel_dev_dirichlet);
        csv.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.k,
            r.sigma_neumann,
            r.sigma_dirichlet,
            r.generic_neumann,
            r.generic_dirichlet,
            r.rel_dev_neumann,
            r.rel_dev_dirichlet,
            r.eps_sigma_neumann,
            r.limit
        ));
    }

    #[derive(Serialize)]
    struct Meta {
        m: u32,
        eps: f64,
        delta: f64,
        k_max: usize,
        max_dual_path_deviation: f64,
    }
    let meta = Meta {
        m: c.m,
        eps: c.eps,
        delta: c.delta,
        k_max: c.k_max,
        max_dual_path_deviation: max_dev,
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                suffix: "point.csv",
                contents: csv,
            },
            json_artifact(&meta)?,
        ],
        audits_passed: true,
        summary: format!(
            "point: k <= {} verified, max dual-path deviation {max_dev:.3e}",
            c.k_max
        ),
    })
}

pub fn run_gap(c: &GapConfig) -> Result<Outcome> {
    if c.eps_list.len() < 2 {
        return Err(anyhow!("gap needs at least two eps values for a slope"));
    }
    let mut records = Vec::with_capacity(c.eps_list.len());
    for &eps in &c.eps_list {
        let spec = ProblemSpec {
            m: c.m,
            n: c.n,
            eps,
            delta: c.delta,
            base: c.base.clone(),
            outer_bc: steklov::radial::OuterBc::Neumann,
        };
        spec.validate().map_err(|e| anyhow!(e))?;
        records.push(normalized_gap(&spec, c.k_max, c.j_max).map_err(|e| anyhow!(e))?);
    }
    let slope = gap_series_slope(&records).map_err(|e| anyhow!(e))?;

    let mut csv = String::from(
        "eps,sigma1_lower,sigma1_upper,midpoint,interval_width,boundary_volume,\
         normalized_lower,normalized,normalized_upper\n",
    );
    for r in &records {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.eps,
            r.sigma1_lower,
            r.sigma1_upper,
            r.midpoint,
            r.interval_width,
            r.boundary_volume,
            r.normalized_lower,
            r.normalized,
            r.normalized_upper
        ));
    }

    #[derive(Serialize)]
    struct Meta {
        m: u32,
        n: u32,
        delta: f64,
        loglog_slope: f64,
        point_count: usize,
    }
    let meta = Meta {
        m: c.m,
        n: c.n,
        delta: c.delta,
        loglog_slope: slope,
        point_count: records.len(),
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                suffix: "gap.csv",
                contents: csv,
            },
            json_artifact(&meta)?,
        ],
        audits_passed: true,
        summary: format!("gap: {} points, log-log slope {slope:.4}", records.len()),
    })
}
