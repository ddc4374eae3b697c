//! Posterior summaries, the confusion matrix of a classifier, and chains of
//! derived accuracy statistics.

use serde::{Deserialize, Serialize};

use crate::chains::ChainSet;
use crate::error::{Error, Result};
use crate::model::{ModelVariant, Rate};

/// Summary statistics of one quantity's draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantitySummary {
    pub name: String,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    #[serde(rename = "25%")]
    pub q25: f64,
    #[serde(rename = "50%")]
    pub median: f64,
    #[serde(rename = "75%")]
    pub q75: f64,
    pub max: f64,
}

/// One [`QuantitySummary`] per quantity, in chain-set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PosteriorSummary {
    pub rows: Vec<QuantitySummary>,
}

impl PosteriorSummary {
    pub const CSV_HEADER: &'static str = "quantity,count,mean,std,min,25%,50%,75%,max";

    pub fn get(&self, name: &str) -> Option<&QuantitySummary> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.name, r.count, r.mean, r.std, r.min, r.q25, r.median, r.q75, r.max
            ));
        }
        out
    }
}

/// Quantile by linear interpolation between order statistics (type 7).
/// `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize_values(name: &str, values: &[f64]) -> Result<QuantitySummary> {
    if values.is_empty() {
        return Err(Error::EmptyChain(name.to_string()));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(QuantitySummary {
        name: name.to_string(),
        count: n,
        mean,
        std,
        min: sorted[0],
        q25: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q75: quantile_sorted(&sorted, 0.75),
        max: sorted[n - 1],
    })
}

/// Summarize every quantity in the chain set.
pub fn summarize(chains: &ChainSet) -> Result<PosteriorSummary> {
    if chains.names().is_empty() {
        return Err(Error::EmptyChain("<no quantities>".into()));
    }
    let rows = chains
        .columns()
        .map(|(name, values)| summarize_values(name, values))
        .collect::<Result<_>>()?;
    Ok(PosteriorSummary { rows })
}

/// Confusion matrix of one classifier. Rows are the actual value (1, 0),
/// columns the prediction (1, 0).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionMatrix {
    pub proportions: [[f64; 2]; 2],
    /// Proportions scaled by `n` and rounded half away from zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<[[u64; 2]; 2]>,
}

pub fn confusion_matrix(se_hat: Rate, sp_hat: Rate, n: Option<u64>) -> ConfusionMatrix {
    let (se, sp) = (se_hat.get(), sp_hat.get());
    let proportions = [[se, 1.0 - se], [1.0 - sp, sp]];
    let counts = n.map(|n| proportions.map(|row| row.map(|p| (p * n as f64).round() as u64)));
    ConfusionMatrix { proportions, counts }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Classifier {
    #[default]
    A,
    B,
}

impl Classifier {
    pub fn label(self) -> char {
        match self {
            Classifier::A => 'A',
            Classifier::B => 'B',
        }
    }

    pub fn rate_names(self) -> (&'static str, &'static str) {
        match self {
            Classifier::A => ("Se_A", "Sp_A"),
            Classifier::B => ("Se_B", "Sp_B"),
        }
    }
}

/// Which positive-predictive-value formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PpvConvention {
    /// `Se*pi / (Se*pi + (1-Sp)*(1-pi))`.
    #[default]
    Standard,
    /// `Se*pi / (Se*pi + (1-Se)*(1-pi))`. Does not involve specificity; kept
    /// because it reproduces the worked example's published PPV and F1.
    Paper,
}

/// Accuracy statistics at a single draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub recall: f64,
    pub ppv: f64,
    pub f1: f64,
}

/// Accuracy, recall, PPV and F1 of a classifier with the given rates at prevalence `pi`.
/// Returns `None` when a denominator vanishes.
pub fn metrics(se: f64, sp: f64, pi: f64, convention: PpvConvention) -> Option<Metrics> {
    let accuracy = se * pi + sp * (1.0 - pi);
    let hit = se * pi;
    let false_pos = match convention {
        PpvConvention::Standard => (1.0 - sp) * (1.0 - pi),
        PpvConvention::Paper => (1.0 - se) * (1.0 - pi),
    };
    let ppv_den = hit + false_pos;
    if ppv_den == 0.0 {
        return None;
    }
    let ppv = hit / ppv_den;
    let f1_den = se + ppv;
    if f1_den == 0.0 {
        return None;
    }
    Some(Metrics { accuracy, recall: se, ppv, f1: 2.0 * se * ppv / f1_den })
}

pub const METRIC_NAMES: [&str; 4] = ["accuracy", "recall", "ppv", "f1"];

/// Element-wise accuracy, recall, PPV and F1 chains for one classifier,
/// paired with the prevalence chain at `prevalence_index`.
pub fn derived_chains(
    chains: &ChainSet,
    classifier: Classifier,
    convention: PpvConvention,
    prevalence_index: usize,
) -> Result<ChainSet> {
    if chains.is_empty() {
        return Err(Error::EmptyChain("parameters".into()));
    }
    let (se_name, sp_name) = classifier.rate_names();
    let pi_name = match (chains.variant, prevalence_index) {
        (_, 0) => "pi",
        (ModelVariant::TwoDatasets, 1) => "pi_beta",
        (v, i) => return Err(Error::Index { index: i, len: v.n_prevalences() }),
    };
    let se = chains.get(se_name)?;
    let sp = chains.get(sp_name)?;
    let pi = chains.get(pi_name)?;

    let n = chains.len();
    let mut cols: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(n));
    for draw in 0..n {
        let m = metrics(se[draw], sp[draw], pi[draw], convention)
            .ok_or(Error::Denominator { metric: "ppv/f1", draw })?;
        cols[0].push(m.accuracy);
        cols[1].push(m.recall);
        cols[2].push(m.ppv);
        cols[3].push(m.f1);
    }

    let mut out = ChainSet::new(chains.variant, chains.chain_labels().to_vec(), chains.iterations().to_vec())?;
    if let Some(cfg) = chains.config {
        out = out.with_config(cfg);
    }
    for (name, col) in METRIC_NAMES.iter().zip(cols) {
        out.push_column(*name, col)?;
    }
    Ok(out)
}
