use std::path::Path;

use relayic::audit::RegimeSpec;
use relayic::model::ChannelParams;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepStrategy {
    Ghf,
    Cf1,
    Cf2,
    Af,
    Baseline,
    Outer,
}

impl SweepStrategy {
    pub fn name(self) -> &'static str {
        match self {
            SweepStrategy::Ghf => "ghf",
            SweepStrategy::Cf1 => "cf1",
            SweepStrategy::Cf2 => "cf2",
            SweepStrategy::Af => "af",
            SweepStrategy::Baseline => "baseline",
            SweepStrategy::Outer => "outer",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
            .map_err(|_| CliError::Usage(format!("unknown strategy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "snr_db")]
    SnrDb,
    #[serde(rename = "g2")]
    G2,
    #[serde(rename = "R0")]
    R0,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "rho")]
    Rho,
}

impl SweepVariable {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| CliError::Usage(format!("unknown sweep variable `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ChannelParams,
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub strategies: Vec<SweepStrategy>,
    /// Operating SNR in dB for `alpha` and `rho` sweeps.
    #[serde(default = "default_snr_db")]
    pub snr_db: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
}

fn default_snr_db() -> f64 {
    60.0
}

fn default_alpha() -> f64 {
    0.5
}

fn default_rho() -> f64 {
    0.25
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            base: ChannelParams::symmetric(1.0, 0.5, 0.5, 0.5, 10.0, 1.0, 1.0),
            variable: SweepVariable::SnrDb,
            values: (0..=12).map(|i| 5.0 * i as f64).collect(),
            strategies: vec![
                SweepStrategy::Ghf,
                SweepStrategy::Cf1,
                SweepStrategy::Af,
                SweepStrategy::Baseline,
            ],
            snr_db: default_snr_db(),
            alpha: default_alpha(),
            rho: default_rho(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        self.base
            .validate()
            .map_err(|e| CliError::Config(format!("base: {e}")))?;
        if self.strategies.is_empty() {
            return Err(CliError::Usage("strategy set is empty".into()));
        }
        if self.values.is_empty() {
            return Err(CliError::Usage("no sweep values".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("sweep values must be finite".into()));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(
                "sweep values must be strictly ascending".into(),
            ));
        }
        let lo = self.values[0];
        let hi = self.values[self.values.len() - 1];
        match self.variable {
            SweepVariable::R0 | SweepVariable::Rho if lo < 0.0 => {
                return Err(CliError::Config(
                    "R0 and rho values must be nonnegative".into(),
                ));
            }
            SweepVariable::Alpha if lo <= 0.0 || hi >= 1.0 => {
                return Err(CliError::Config("alpha values must lie in (0, 1)".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    #[serde(default = "default_count")]
    pub count: usize,
    /// When set, draw until this many admissible channels were checked.
    #[serde(default)]
    pub target_admissible: Option<usize>,
    #[serde(default = "default_max_draws")]
    pub max_draws: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub regime: RegimeSpec,
}

fn default_count() -> usize {
    1000
}

fn default_max_draws() -> usize {
    1_000_000
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            count: default_count(),
            target_admissible: None,
            max_draws: default_max_draws(),
            seed: None,
            regime: RegimeSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MapMode {
    /// `(alpha1, alpha2)` grid at fixed rho.
    Alpha,
    /// Symmetric `(alpha, rho)` grid.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    #[serde(default = "default_mode")]
    pub mode: MapMode,
    /// Points per axis when explicit lists are absent.
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_lo")]
    pub alpha_min: f64,
    #[serde(default = "default_hi")]
    pub alpha_max: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_rho_max")]
    pub rho_max: f64,
    #[serde(default)]
    pub alphas: Option<Vec<f64>>,
    #[serde(default)]
    pub alpha2s: Option<Vec<f64>>,
    #[serde(default)]
    pub rhos: Option<Vec<f64>>,
}

fn default_mode() -> MapMode {
    MapMode::Alpha
}

fn default_n() -> usize {
    19
}

fn default_lo() -> f64 {
    0.05
}

fn default_hi() -> f64 {
    0.95
}

fn default_rho_max() -> f64 {
    1.0
}

impl Default for MapConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Accepts `a,b,c` or `start:stop:step`.
pub fn parse_values(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse values `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| start + step * i as f64).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}
