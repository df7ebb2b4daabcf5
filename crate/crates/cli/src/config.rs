//! Strict JSON run configurations, one shape per command.
//!
//! Parsing is two-phase: the `command` field selects the shape, then the
//! full document is parsed against it with unknown keys rejected.  Radii
//! are dimensionless; every run is fully deterministic (there is no random
//! state anywhere to seed).

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use steklov::radial::OuterBc;
use steklov::spectra::BaseManifold;

#[derive(Debug, Deserialize)]
struct CommandProbe {
    command: String,
}

/// Shared geometry block of the mode-rectangle commands.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectangleConfig {
    #[serde(rename = "command")]
    pub _command: String,
    pub m: u32,
    pub n: u32,
    pub eps: f64,
    pub delta: f64,
    pub base: BaseManifold<f64>,
    pub outer_bc: OuterBc,
    pub k_max: usize,
    pub j_max: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(rename = "command")]
    pub _command: String,
    pub m: u32,
    pub n: u32,
    pub delta: f64,
    pub base: BaseManifold<f64>,
    pub outer_bc: OuterBc,
    pub k: usize,
    pub j: usize,
    /// Strictly decreasing inner radii.
    pub eps_list: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(rename = "command")]
    pub _command: String,
    /// `(m, n)` pairs; defaults to the certification grid.
    pub pairs: Option<Vec<(u32, u32)>>,
    pub k_max: Option<usize>,
    pub j_max: Option<usize>,
    pub eps_list: Option<Vec<f64>>,
    pub delta: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusConfig {
    #[serde(rename = "command")]
    pub _command: String,
    /// Slit half-width, `0 < eps < 1/2`.
    pub eps: f64,
    pub k_max: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    #[serde(rename = "command")]
    pub _command: String,
    pub m: u32,
    pub eps: f64,
    pub delta: f64,
    pub k_max: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapConfig {
    #[serde(rename = "command")]
    pub _command: String,
    pub m: u32,
    pub n: u32,
    pub delta: f64,
    pub base: BaseManifold<f64>,
    pub eps_list: Vec<f64>,
    pub k_max: usize,
    pub j_max: usize,
}

/// Parsed run configuration.
#[derive(Debug, Clone)]
pub enum RunConfig {
    Modes(RectangleConfig),
    Spectrum(RectangleConfig),
    Sweep(SweepConfig),
    Verify(VerifyConfig),
    Torus(TorusConfig),
    Point(PointConfig),
    Gap(GapConfig),
}

/// Parses and validates a JSON config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let probe: CommandProbe =
        serde_json::from_str(text).context("config must be a JSON object with a 'command' key")?;
    let parse = |what: &str| format!("invalid '{what}' configuration");
    let config = match probe.command.as_str() {
        "modes" => RunConfig::Modes(serde_json::from_str(text).with_context(|| parse("modes"))?),
        "spectrum" => {
            RunConfig::Spectrum(serde_json::from_str(text).with_context(|| parse("spectrum"))?)
        }
        "sweep" => RunConfig::Sweep(serde_json::from_str(text).with_context(|| parse("sweep"))?),
        "verify" => RunConfig::Verify(serde_json::from_str(text).with_context(|| parse("verify"))?),
        "torus" => RunConfig::Torus(serde_json::from_str(text).with_context(|| parse("torus"))?),
        "point" => RunConfig::Point(serde_json::from_str(text).with_context(|| parse("point"))?),
        "gap" => RunConfig::Gap(serde_json::from_str(text).with_context(|| parse("gap"))?),
        other => bail!(
            "unknown command '{other}'; expected one of \
             modes, spectrum, sweep, verify, torus, point, gap"
        ),
    };
    Ok(config)
}
