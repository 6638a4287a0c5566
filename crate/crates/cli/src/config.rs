//! JSON experiment configuration. Command-line flags are overlaid on the file
//! as JSON values, so both routes share one parse path.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use signlab::pattern::{SignField, SignPattern};
use signlab::short_interval::{ArithmeticFunction, Twist};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    /// Master seed; required by `graph` and `ensemble`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Window ends `N₁ < N₂ < …`; each scale is the window `[1, Nᵢ]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Edgelist,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "edgelist" => Ok(Format::Edgelist),
            _ => Err(format!("unknown format `{s}` (json, csv, edgelist)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "lowercase")]
pub enum Command {
    Sieve(SieveParams),
    Pattern(PatternParams),
    Pairs(PairsParams),
    Interval(IntervalParams),
    RunDensity(RunDensityParams),
    Graph(GraphParams),
    Ensemble(EnsembleParams),
    Triples(TriplesParams),
    Report(ReportParams),
}

/// Decodes `params` on its own so errors carry the field path, which the
/// flattened tagged decode below loses.
fn check_params(value: &serde_json::Value) -> Result<()> {
    fn decode<T: serde::de::DeserializeOwned>(params: &serde_json::Value) -> Result<()> {
        serde_path_to_error::deserialize::<_, T>(params.clone())
            .map(|_| ())
            .map_err(|e| CliError::config(format!("params.{}", e.path()), e.inner().to_string()))
    }
    let Some(name) = value.get("command").and_then(|c| c.as_str()) else {
        return Ok(());
    };
    let params = value.get("params").cloned().unwrap_or(serde_json::Value::Null);
    match name {
        "sieve" => decode::<SieveParams>(&params),
        "pattern" => decode::<PatternParams>(&params),
        "pairs" => decode::<PairsParams>(&params),
        "interval" => decode::<IntervalParams>(&params),
        "rundensity" => decode::<RunDensityParams>(&params),
        "graph" => decode::<GraphParams>(&params),
        "ensemble" => decode::<EnsembleParams>(&params),
        "triples" => decode::<TriplesParams>(&params),
        "report" => decode::<ReportParams>(&params),
        _ => Ok(()),
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sieve(_) => "sieve",
            Command::Pattern(_) => "pattern",
            Command::Pairs(_) => "pairs",
            Command::Interval(_) => "interval",
            Command::RunDensity(_) => "rundensity",
            Command::Graph(_) => "graph",
            Command::Ensemble(_) => "ensemble",
            Command::Triples(_) => "triples",
            Command::Report(_) => "report",
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, Command::Graph(_) | Command::Ensemble(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SieveParams {
    pub start: u64,
    pub len: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u64>,
    /// Cache file, or a directory in which a name is derived from the range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternParams {
    pub expr: String,
    #[serde(rename = "fn", default = "default_field")]
    pub field: SignField,
    /// Largest scale when `scales` is absent; the default ladder halves down from it.
    #[serde(default = "default_n")]
    pub n: u64,
}

fn default_field() -> SignField {
    SignField::Lambda
}

fn default_n() -> u64 {
    10_000_000
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairsParams {
    #[serde(default = "default_n")]
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalParams {
    #[serde(rename = "fn")]
    pub function: ArithmeticFunction,
    #[serde(default = "default_twist")]
    pub twist: Twist,
    pub h: Vec<u64>,
    #[serde(default = "default_n")]
    pub n: u64,
}

fn default_twist() -> Twist {
    Twist::None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDensityParams {
    pub a: Vec<f64>,
    #[serde(default = "default_n")]
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    Profinite,
    Integer,
}

impl std::str::FromStr for ModeName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "profinite" => Ok(ModeName::Profinite),
            "integer" => Ok(ModeName::Integer),
            _ => Err(format!("unknown mode `{s}` (profinite, integer)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphParams {
    #[serde(default)]
    pub mode: ModeName,
    /// Base integer for integer mode; trial `t` uses `n0 + t`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    pub x: i64,
    /// Defaults to `[0, 2X]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    #[serde(default = "default_w")]
    pub w: u64,
    /// Defaults to the window diameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub trials: u64,
}

fn default_w() -> u64 {
    50
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleParams {
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_imin")]
    pub imin: u64,
    #[serde(default = "default_imax")]
    pub imax: u64,
    pub trials: u64,
    #[serde(default = "default_w")]
    pub w: u64,
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
}

fn default_k() -> usize {
    3
}

fn default_imin() -> u64 {
    100
}

fn default_imax() -> u64 {
    10_000
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriplesParams {
    pub x: u64,
    #[serde(default = "default_m")]
    pub m: i64,
    #[serde(default)]
    pub shift: i64,
    #[serde(default = "default_triple_w")]
    pub w: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
}

fn default_m() -> i64 {
    1
}

fn default_triple_w() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportParams {
    #[serde(rename = "in")]
    pub inputs: Vec<PathBuf>,
}

impl ExperimentConfig {
    /// Deserialize with the failing field's path in the error.
    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        check_params(&value)?;
        let config: ExperimentConfig = serde_path_to_error::deserialize(value)
            .map_err(|e| CliError::config(e.path().to_string(), e.inner().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::config(".", e.to_string()))?;
        Self::from_value(value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn format(&self) -> Format {
        self.output.as_ref().map(|o| o.format).unwrap_or_default()
    }

    pub fn output_path(&self) -> Option<&PathBuf> {
        self.output.as_ref().and_then(|o| o.path.as_ref())
    }

    pub fn validate(&self) -> Result<()> {
        if self.command.is_stochastic() && self.seed.is_none() {
            return Err(CliError::config("seed", "stochastic commands need a seed"));
        }
        if let Some(scales) = &self.scales {
            if scales.is_empty() || scales[0] == 0 {
                return Err(CliError::config("scales", "scales must be positive and nonempty"));
            }
            if scales.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::config("scales", "scales must be strictly increasing"));
            }
        }
        let edgelist = self.format() == Format::Edgelist;
        if edgelist && !matches!(self.command, Command::Graph(_)) {
            return Err(CliError::config("output.format", "edge lists are produced by `graph` only"));
        }
        match &self.command {
            Command::Pattern(p) => {
                p.expr
                    .parse::<SignPattern>()
                    .map_err(|e| CliError::config("params.expr", e.to_string()))?;
            }
            Command::Interval(p) if p.h.is_empty() || p.h.contains(&0) => {
                return Err(CliError::config("params.h", "need interval lengths of at least 1"));
            }
            Command::RunDensity(p) if p.a.iter().any(|a| !(*a > 0.0) || !a.is_finite()) => {
                return Err(CliError::config("params.a", "half-widths must be positive"));
            }
            Command::Graph(p) if p.mode == ModeName::Integer && p.n0.is_none() => {
                return Err(CliError::config("params.n0", "integer mode needs n0"));
            }
            Command::Ensemble(p) if p.mode == ModeName::Integer && p.n0.is_none() => {
                return Err(CliError::config("params.n0", "integer mode needs n0"));
            }
            Command::Triples(p) => {
                let classes = [p.a1.is_some(), p.a2.is_some()];
                if p.k.is_none() && classes.iter().any(|&c| c) {
                    return Err(CliError::config("params.k", "a1/a2 need a modulus k"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_names() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("edgelist".parse::<Format>().unwrap(), Format::Edgelist);
        assert!("xml".parse::<Format>().is_err());
    }

    #[test]
    fn defaults_fill_missing_params() {
        let c = ExperimentConfig::from_json(r#"{"command":"ensemble","params":{"trials":5},"seed":1}"#).unwrap();
        let Command::Ensemble(p) = &c.command else { panic!() };
        assert_eq!((p.k, p.imin, p.imax, p.w), (3, 100, 10_000, 50));
    }

    #[test]
    fn validation_rules() {
        let bad = [
            r#"{"command":"pairs","params":{"n":10},"output":{"format":"edgelist"}}"#,
            r#"{"command":"pattern","params":{"expr":"++"}}"#,
            r#"{"command":"interval","params":{"h":[0]}}"#,
            r#"{"command":"rundensity","params":{"a":[-1.0]}}"#,
            r#"{"command":"graph","params":{"mode":"integer","x":10,"trials":1},"seed":1}"#,
            r#"{"command":"triples","params":{"x":100,"a1":1}}"#,
        ];
        for text in bad {
            let err = ExperimentConfig::from_json(text).unwrap_err();
            assert_eq!(err.exit_code(), crate::EXIT_CONFIG, "{text}");
        }
        assert!(ExperimentConfig::from_json(r#"{"command":"pattern","params":{"expr":"*^+-"}}"#).is_ok());
    }
}
