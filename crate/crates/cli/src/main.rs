//! Batch front end: parse a JSON problem configuration, run the requested
//! computation, and emit deterministic CSV/JSON artifacts.
//!
//! Repeated runs on the same input produce byte-identical outputs,
//! independent of the thread count.

mod commands;
mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use commands::Outcome;
use config::RunConfig;

#[derive(Parser, Debug)]
#[command(
    name = "steklov",
    about = "Mixed Steklov spectra of product annuli: exact values, ODE cross-checks, \
             and asymptotic sweeps"
)]
struct Cli {
    /// JSON run configuration (see the README for per-command schemas)
    #[arg(long)]
    config: PathBuf,

    /// Output path prefix; artifacts are written as <prefix>.<name>.csv and
    /// <prefix>.json
    #[arg(long)]
    out: String,

    /// Worker threads, 0 = auto; the STEKLOV_THREADS environment variable
    /// overrides this flag
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn effective_threads(flag: usize) -> usize {
    match std::env::var("STEKLOV_THREADS") {
        Ok(v) => v.trim().parse().unwrap_or(flag),
        Err(_) => flag,
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let threads = effective_threads(cli.threads);
    if threads > 0 {
        // ignore failure: the global pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let text = fs::read_to_string(&cli.config)
        .with_context(|| format!("reading config {}", cli.config.display()))?;
    match config::parse_config(&text)? {
        RunConfig::Modes(c) => commands::run_modes(&c),
        RunConfig::Spectrum(c) => commands::run_spectrum(&c),
        RunConfig::Sweep(c) => commands::run_sweep(&c),
        RunConfig::Verify(c) => commands::run_verify(&c),
        RunConfig::Torus(c) => commands::run_torus(&c),
        RunConfig::Point(c) => commands::run_point(&c),
        RunConfig::Gap(c) => commands::run_gap(&c),
    }
}

/// Writes every artifact through a temp file and renames at the end, so a
/// failed run leaves no partial outputs behind.
fn write_artifacts(prefix: &str, outcome: &Outcome) -> Result<Vec<PathBuf>> {
    if let Some(parent) = Path::new(prefix).parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating output directory {}", parent.display()))?;
        }
    }
    let mut temps = Vec::new();
    let mut finals = Vec::new();
    let result = (|| -> Result<()> {
        for artifact in &outcome.artifacts {
            let path = PathBuf::from(format!("{prefix}.{}", artifact.suffix));
            let tmp = PathBuf::from(format!("{prefix}.{}.tmp", artifact.suffix));
            fs::write(&tmp, &artifact.contents)
                .with_context(|| format!("writing {}", tmp.display()))?;
            temps.push(tmp.clone());
            fs::rename(&tmp, &path)
                .with_context(|| format!("renaming {} into place", tmp.display()))?;
            temps.pop();
            finals.push(path);
        }
        Ok(())
    })();
    if let Err(e) = result {
        for p in temps.iter().chain(finals.iter()) {
            let _ = fs::remove_file(p);
        }
        return Err(e);
    }
    Ok(finals)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let paths = match write_artifacts(&cli.out, &outcome) {
                Ok(paths) => paths,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            };
            println!("{}", outcome.summary);
            for p in paths {
                println!("wrote {}", p.display());
            }
            if outcome.audits_passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: audit failed (see artifacts for details)");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
