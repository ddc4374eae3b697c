//! JSON fit configuration.
//!
//! ```json
//! {
//!   "model": "one-dataset",
//!   "priors": {
//!     "se_a": {"a": 20, "b": 4},
//!     "sp_a": {"mode": 0.8636, "threshold": 0.8, "tail_mass": 0.66},
//!     "pi": {"a": 1, "b": 1}
//!   },
//!   "sampler": {"n_iterations": 20000, "burn_in": 5000, "thin": 5, "n_chains": 4, "seed": 7},
//!   "ppv_convention": "paper",
//!   "report": {"classifier": "A", "count_n": 150},
//!   "data": {"tabs": [[40, 3, 7, 100]]}
//! }
//! ```
//!
//! Every prior may be omitted, in which case it is Beta(1, 1).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{Classifier, PpvConvention};
use crate::error::{Error, Result};
use crate::model::{CrossTab, ModelVariant};
use crate::oracle::{DEFAULT_POINTS_PER_DIM, DEFAULT_POINTS_PER_DIM_TWO_DATASETS};
use crate::prior::{elicit_beta, BetaParams, PriorSet};
use crate::sampler::SamplerConfig;

/// A prior given either as explicit shapes or as an elicitation statement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_mass: Option<f64>,
}

impl PriorSpec {
    pub fn explicit(a: f64, b: f64) -> Self {
        PriorSpec { a: Some(a), b: Some(b), ..Default::default() }
    }

    pub fn statement(mode: f64, threshold: f64, tail_mass: f64) -> Self {
        PriorSpec {
            mode: Some(mode),
            threshold: Some(threshold),
            tail_mass: Some(tail_mass),
            ..Default::default()
        }
    }

    pub fn resolve(&self, parameter: &str) -> Result<BetaParams> {
        let explicit = [self.a, self.b];
        let statement = [self.mode, self.threshold, self.tail_mass];
        let any_explicit = explicit.iter().any(Option::is_some);
        let any_statement = statement.iter().any(Option::is_some);
        match (any_explicit, any_statement) {
            (true, true) => Err(Error::Config(format!(
                "prior for {parameter} mixes explicit a/b with an elicitation statement; give exactly one"
            ))),
            (false, false) => Err(Error::Config(format!("prior for {parameter} is empty"))),
            (true, false) => match explicit {
                [Some(a), Some(b)] => BetaParams::new(a, b)
                    .map_err(|e| Error::Config(format!("prior for {parameter}: {e}"))),
                _ => Err(Error::Config(format!("prior for {parameter} needs both a and b"))),
            },
            (false, true) => match statement {
                [Some(m), Some(x), Some(q)] => elicit_beta(m, x, q),
                _ => Err(Error::Config(format!(
                    "prior for {parameter} needs mode, threshold and tail_mass"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorsConfig {
    pub se_a: Option<PriorSpec>,
    pub sp_a: Option<PriorSpec>,
    pub se_b: Option<PriorSpec>,
    pub sp_b: Option<PriorSpec>,
    /// Prevalence of the (first) dataset.
    pub pi: Option<PriorSpec>,
    /// Prevalence of the second dataset; two-dataset model only.
    pub pi_beta: Option<PriorSpec>,
}

impl PriorsConfig {
    pub fn resolve(&self, variant: ModelVariant) -> Result<PriorSet> {
        let get = |spec: &Option<PriorSpec>, name: &str| -> Result<BetaParams> {
            spec.as_ref().map_or(Ok(BetaParams::uniform()), |s| s.resolve(name))
        };
        if variant == ModelVariant::OneDataset && self.pi_beta.is_some() {
            return Err(Error::Config("pi_beta prior given for the one-dataset model".into()));
        }
        let mut prevalences = vec![get(&self.pi, "pi")?];
        if variant == ModelVariant::TwoDatasets {
            prevalences.push(get(&self.pi_beta, "pi_beta")?);
        }
        PriorSet::new(
            get(&self.se_a, "se_a")?,
            get(&self.sp_a, "sp_a")?,
            get(&self.se_b, "se_b")?,
            get(&self.sp_b, "sp_b")?,
            prevalences,
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportOptions {
    /// Classifier whose confusion matrix and metrics are reported.
    pub classifier: Classifier,
    /// Prevalence paired with the classifier's rates (0 = `pi`, 1 = `pi_beta`).
    pub prevalence_index: usize,
    /// When set, the confusion matrix also carries counts scaled by this `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_n: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionFiles {
    pub a: PathBuf,
    pub b: PathBuf,
}

/// Where the cross-tabs come from; exactly one field must be set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSource {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tabs: Option<Vec<[u64; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predictions: Option<Vec<PredictionFiles>>,
}

impl DataSource {
    /// Load the tables, resolving relative prediction paths against `base_dir`.
    pub fn load(&self, base_dir: Option<&Path>) -> Result<Vec<CrossTab>> {
        match (&self.tabs, &self.predictions) {
            (Some(tabs), None) => Ok(tabs.iter().map(|&c| CrossTab::from_counts(c)).collect()),
            (None, Some(files)) => files
                .iter()
                .map(|f| {
                    let resolve = |p: &Path| match base_dir {
                        Some(dir) if p.is_relative() => dir.join(p),
                        _ => p.to_path_buf(),
                    };
                    crate::io::crosstab(&resolve(&f.a), &resolve(&f.b))
                })
                .collect(),
            _ => Err(Error::Config("data must give exactly one of tabs or predictions".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_per_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub model: ModelVariant,
    #[serde(default)]
    pub priors: PriorsConfig,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub ppv_convention: PpvConvention,
    #[serde(default)]
    pub report: ReportOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataSource>,
    #[serde(default)]
    pub oracle: OracleOptions,
}

impl FitConfig {
    pub fn new(model: ModelVariant) -> Self {
        FitConfig {
            model,
            priors: PriorsConfig::default(),
            sampler: SamplerConfig::default(),
            ppv_convention: PpvConvention::default(),
            report: ReportOptions::default(),
            data: None,
            oracle: OracleOptions::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Check everything that can be checked without data and return the priors.
    pub fn validate(&self) -> Result<PriorSet> {
        let priors = self.priors.resolve(self.model)?;
        self.sampler.validate()?;
        if self.report.prevalence_index >= self.model.n_prevalences() {
            return Err(Error::Config(format!(
                "report.prevalence_index {} is out of range for the {:?} model",
                self.report.prevalence_index, self.model
            )));
        }
        if let Some(data) = &self.data {
            let n = match (&data.tabs, &data.predictions) {
                (Some(t), None) => t.len(),
                (None, Some(p)) => p.len(),
                _ => return Err(Error::Config("data must give exactly one of tabs or predictions".into())),
            };
            if n != self.model.n_prevalences() {
                return Err(Error::Config(format!(
                    "{:?} model needs {} dataset(s), data gives {n}",
                    self.model,
                    self.model.n_prevalences()
                )));
            }
        }
        Ok(priors)
    }

    pub fn oracle_points(&self) -> usize {
        self.oracle.points_per_dim.unwrap_or(match self.model {
            ModelVariant::OneDataset => DEFAULT_POINTS_PER_DIM,
            ModelVariant::TwoDatasets => DEFAULT_POINTS_PER_DIM_TWO_DATASETS,
        })
    }
}
