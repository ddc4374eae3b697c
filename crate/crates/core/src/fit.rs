//! End-to-end fit: sample, derive metrics, summarize and diagnose.

use serde::Serialize;

use crate::analysis::{confusion_matrix, derived_chains, summarize, ConfusionMatrix, PosteriorSummary};
use crate::chains::ChainSet;
use crate::config::FitConfig;
use crate::diagnostics::{diagnose, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::model::{CrossTab, Rate};
use crate::prior::PriorSet;
use crate::sampler::run_chain;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionReport {
    pub classifier: char,
    pub se_hat: f64,
    pub sp_hat: f64,
    pub se_std: f64,
    pub sp_std: f64,
    #[serde(flatten)]
    pub matrix: ConfusionMatrix,
}

/// Everything the `fit` command reports besides the chains themselves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Seconds since the Unix epoch; filled in by the caller, excluded from
    /// determinism comparisons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub config: FitConfig,
    pub seed: u64,
    pub priors: PriorSet,
    pub crosstabs: Vec<CrossTab>,
    pub parameters: PosteriorSummary,
    pub metrics: PosteriorSummary,
    pub confusion_matrix: ConfusionReport,
    pub diagnostics: DiagnosticsReport,
    pub warnings: Vec<String>,
}

pub struct FitOutput {
    /// Parameter chains followed by the derived metric chains.
    pub chains: ChainSet,
    pub report: FitReport,
}

pub fn run_fit(config: &FitConfig, tabs: &[CrossTab]) -> Result<FitOutput> {
    let priors = config.validate()?;
    if tabs.len() != config.model.n_prevalences() {
        return Err(Error::Config(format!(
            "{:?} model needs {} cross-tab(s), got {}",
            config.model,
            config.model.n_prevalences(),
            tabs.len()
        )));
    }

    let params = run_chain(config.model, tabs, &priors, &config.sampler)?;
    let derived = derived_chains(
        &params,
        config.report.classifier,
        config.ppv_convention,
        config.report.prevalence_index,
    )?;
    let parameters = summarize(&params)?;
    let metrics = summarize(&derived)?;

    let (se_name, sp_name) = config.report.classifier.rate_names();
    let se = parameters.get(se_name).expect("rate summarized");
    let sp = parameters.get(sp_name).expect("rate summarized");
    let confusion = ConfusionReport {
        classifier: config.report.classifier.label(),
        se_hat: se.mean,
        sp_hat: sp.mean,
        se_std: se.std,
        sp_std: sp.std,
        matrix: confusion_matrix(Rate::new(se.mean)?, Rate::new(sp.mean)?, config.report.count_n),
    };

    let mut chains = params;
    chains.extend(&derived)?;
    let diagnostics = diagnose(&chains)?;
    let warnings = diagnostics.warnings();

    Ok(FitOutput {
        report: FitReport {
            generated_at: None,
            config: config.clone(),
            seed: config.sampler.seed,
            priors,
            crosstabs: tabs.to_vec(),
            parameters,
            metrics,
            confusion_matrix: confusion,
            diagnostics,
            warnings,
        },
        chains,
    })
}

/// Summaries and diagnostics recomputed from an existing chain file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub draws: usize,
    pub chains: usize,
    pub summary: PosteriorSummary,
    pub diagnostics: DiagnosticsReport,
    pub warnings: Vec<String>,
}

pub fn reanalyze(chains: &ChainSet) -> Result<ChainReport> {
    let diagnostics = diagnose(chains)?;
    Ok(ChainReport {
        draws: chains.len(),
        chains: chains.n_chains(),
        summary: summarize(chains)?,
        warnings: diagnostics.warnings(),
        diagnostics,
    })
}
