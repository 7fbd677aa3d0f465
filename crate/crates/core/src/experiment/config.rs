use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aoi::EpochConfig;
use crate::error::{Error, Result};
use crate::mobility::MobilityExperimentConfig;
use crate::multi_source::{Feedback, FpwlState, DEFAULT_BUDGET};
use crate::record::OutputFormat;
use crate::single_source::{Exp3State, FtplState};

use super::generators::GeneratorSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Single,
    Multi,
    Mobility,
    Oracle,
    Bounds,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Single => "single",
            ExperimentKind::Multi => "multi",
            ExperimentKind::Mobility => "mobility",
            ExperimentKind::Oracle => "oracle",
            ExperimentKind::Bounds => "bounds",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(ExperimentKind::Single),
            "multi" => Ok(ExperimentKind::Multi),
            "mobility" => Ok(ExperimentKind::Mobility),
            "oracle" => Ok(ExperimentKind::Oracle),
            "bounds" => Ok(ExperimentKind::Bounds),
            other => Err(Error::validation("kind", format!("unknown experiment kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// Everything one CLI invocation needs. Parsed from TOML; see the README for
/// the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Experiment id written into every record; the kind name when unset.
    #[serde(default)]
    pub experiment: Option<String>,
    /// Must match the subcommand when given.
    #[serde(default)]
    pub kind: Option<ExperimentKind>,
    #[serde(default = "default_slots")]
    pub slots: usize,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_sources")]
    pub sources: usize,
    #[serde(default)]
    pub transmission_cost: f64,
    /// Cost bound `D`.
    #[serde(default = "default_bound")]
    pub bound: f64,
    /// Empty means the defaults for the kind.
    #[serde(default)]
    pub algorithms: Vec<String>,
    /// FTPL noise scale; `sqrt(T)` when unset.
    #[serde(default)]
    pub eta: Option<f64>,
    /// EXP3 step (single source) or FPWL perturbation parameter (several
    /// sources); the matching default rate when unset.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default = "default_feedback")]
    pub feedback: Feedback,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub generator: GeneratorSpec,
    #[serde(default)]
    pub mobility: Option<MobilityExperimentConfig>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_slots() -> usize {
    10
}

fn default_epochs() -> usize {
    1000
}

fn default_sources() -> usize {
    1
}

fn default_bound() -> f64 {
    1.0
}

fn default_feedback() -> Feedback {
    Feedback::Full
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("all fields have defaults")
    }
}

impl RunConfig {
    pub fn experiment_id(&self, kind: ExperimentKind) -> String {
        self.experiment.clone().unwrap_or_else(|| kind.name().to_string())
    }

    pub fn epoch_config(&self) -> Result<EpochConfig> {
        EpochConfig::new(self.slots, self.epochs, self.sources, self.transmission_cost)
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    /// Algorithms to run, with the kind's defaults filled in.
    pub fn algorithm_names(&self, kind: ExperimentKind) -> Vec<String> {
        if !self.algorithms.is_empty() {
            return self.algorithms.clone();
        }
        let names: &[&str] = match (kind, self.sources) {
            (ExperimentKind::Mobility, _) => &["fpwl", "fdwl", "max-aoi"],
            (ExperimentKind::Oracle, _) => &[],
            (_, 1) => &["ftpl", "exp3"],
            (ExperimentKind::Bounds, _) => &["fpwl", "fdwl"],
            _ => &["fpwl", "fdwl", "max-aoi"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Fills in default rates and checks every field for `kind`.
    pub fn resolve(mut self, kind: ExperimentKind) -> Result<Self> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(Error::validation(
                    "kind",
                    format!("config is for `{k}` but the `{kind}` command was run"),
                ));
            }
        }
        self.kind = Some(kind);
        if self.seeds.is_empty() {
            self.seeds.push(0);
        }
        if !(self.bound.is_finite() && self.bound > 0.0) {
            return Err(Error::validation("bound", "must be finite and positive"));
        }
        self.generator.validate()?;
        match kind {
            ExperimentKind::Mobility => {
                let mobility = self.mobility.get_or_insert_with(MobilityExperimentConfig::default);
                mobility.validate()?;
                if self.algorithms.is_empty() {
                    self.algorithms = mobility.schedulers.iter().map(|s| s.name().to_string()).collect();
                }
                for name in &self.algorithms {
                    name.parse::<crate::mobility::TrackingScheduler>()?;
                }
            }
            _ => {
                let config = self.epoch_config()?;
                if self.sources == 1 && kind != ExperimentKind::Oracle {
                    self.eta.get_or_insert(FtplState::default_eta(config.epochs));
                    self.epsilon
                        .get_or_insert(Exp3State::default_epsilon(config.slots, config.epochs));
                } else if self.sources > 1 {
                    self.epsilon.get_or_insert(FpwlState::default_epsilon(
                        config.slots,
                        config.sources,
                        self.bound,
                        config.epochs,
                    ));
                }
                if let Some(eta) = self.eta {
                    if !(eta.is_finite() && eta >= 0.0) {
                        return Err(Error::validation("eta", "must be finite and nonnegative"));
                    }
                }
                if let Some(eps) = self.epsilon {
                    if eps.is_nan() || eps <= 0.0 {
                        return Err(Error::validation("epsilon", "must be positive"));
                    }
                }
                if kind == ExperimentKind::Single && self.sources != 1 {
                    return Err(Error::validation("sources", "single-source runs need sources = 1"));
                }
                if kind == ExperimentKind::Multi && self.sources < 2 {
                    return Err(Error::validation(
                        "sources",
                        "multi-source runs need at least 2 sources",
                    ));
                }
            }
        }
        Ok(self)
    }
}

/// Parses and resolves a TOML config for `kind`.
pub fn parse_config(text: &str, kind: ExperimentKind) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    config.resolve(kind)
}

pub fn load_config(path: &Path, kind: ExperimentKind) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, kind).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_single_gets_default_eta() {
        let c = parse_config(
            "slots = 10\nepochs = 400\n[generator]\nname = \"iid-random-monotone\"\n",
            ExperimentKind::Single,
        )
        .unwrap();
        assert_eq!(c.eta, Some(20.0));
        let eps = (10f64.ln() / 4000.0).sqrt();
        assert!((c.epsilon.unwrap() - eps).abs() < 1e-15);
        assert_eq!(c.seeds, vec![0]);
    }

    #[test]
    fn unknown_key_named() {
        let err = parse_config("slots = 10\nfoo = 3\n", ExperimentKind::Single).unwrap_err();
        assert!(matches!(&err, Error::Parse(msg) if msg.contains("foo")), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_generator_rejected() {
        let err = parse_config("[generator]\nname = \"brownian\"\n", ExperimentKind::Single).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn class_split_checked() {
        let err = parse_config("[mobility]\nnodes = 7\n", ExperimentKind::Mobility).unwrap_err();
        assert!(
            matches!(&err, Error::Validation { field, .. } if field == "nodes"),
            "{err}"
        );
    }

    #[test]
    fn generator_parameters() {
        let c = parse_config(
            "sources = 2\nslots = 6\n[generator]\nname = \"drifting\"\nstep = 0.01\n",
            ExperimentKind::Multi,
        )
        .unwrap();
        assert_eq!(c.generator, GeneratorSpec::Drifting { step: 0.01, floor: 0.1 });
        assert!(c.eta.is_none());
        assert!(c.epsilon.is_some());
    }

    #[test]
    fn kind_mismatch() {
        assert!(parse_config("kind = \"multi\"\n", ExperimentKind::Single).is_err());
    }

    #[test]
    fn parse_error_has_location() {
        let err = parse_config("slots = \"ten\"\n", ExperimentKind::Single).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }
}
