//! Accuracy of two binary classifiers estimated from their predictions on
//! unlabeled data.
//!
//! Two latent-class models are supported: both classifiers applied to one
//! dataset (sensitivities, specificities and one prevalence), and both applied
//! to two datasets that share the classifiers' accuracies but differ in
//! prevalence. Posteriors are sampled with a conjugate Gibbs sampler that
//! augments each cross-tab cell with the unknown true labels.
//!
//! ```no_run
//! use latacc::{run_chain, summarize, BetaParams, CrossTab, ModelVariant, PriorSet, SamplerConfig};
//!
//! let tab = CrossTab::new(40, 3, 7, 100);
//! let priors = PriorSet::shared(
//!     ModelVariant::OneDataset,
//!     BetaParams::new(20.0, 4.0)?,
//!     BetaParams::uniform(),
//! );
//! let chains = run_chain(ModelVariant::OneDataset, &[tab], &priors, &SamplerConfig::default())?;
//! let summary = summarize(&chains)?;
//! println!("{}", summary.to_csv());
//! # Ok::<(), latacc::Error>(())
//! ```

pub mod analysis;
pub mod chains;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod fit;
pub mod io;
pub mod model;
pub mod oracle;
pub mod prior;
pub mod sampler;
pub mod special;

pub use analysis::{
    confusion_matrix, derived_chains, metrics, summarize, Classifier, ConfusionMatrix, Metrics,
    PosteriorSummary, PpvConvention, QuantitySummary,
};
pub use chains::ChainSet;
pub use config::FitConfig;
pub use diagnostics::{diagnose, effective_sample_size, split_rhat, DiagnosticsReport};
pub use error::{Error, Result};
pub use fit::{run_fit, FitOutput, FitReport};
pub use model::{cell_probs, joint_log_posterior, log_likelihood, CellProbs, CrossTab, ModelVariant, ParamState, Rate};
pub use oracle::{grid_posterior_means, GridPosterior};
pub use prior::{beta_tail, elicit_beta, BetaParams, PriorSet};
pub use sampler::{run_chain, sample_latents, update_parameters, LatentSplit, SamplerConfig};
