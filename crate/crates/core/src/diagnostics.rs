//! Convergence diagnostics: split-R̂, effective sample size and Monte Carlo
//! standard error.

use serde::Serialize;

use crate::analysis::summarize_values;
use crate::chains::ChainSet;
use crate::error::{Error, Result};

/// R̂ above this draws a warning.
pub const RHAT_WARN: f64 = 1.05;
/// ESS below this draws a warning.
pub const ESS_WARN: f64 = 400.0;
/// ESS is capped at this multiple of the draw count (antithetic chains).
pub const ESS_CAP_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantityDiagnostics {
    pub name: String,
    /// `None` when there are fewer than two chains.
    pub rhat: Option<f64>,
    pub ess: f64,
    pub mcse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub quantities: Vec<QuantityDiagnostics>,
}

impl DiagnosticsReport {
    pub fn get(&self, name: &str) -> Option<&QuantityDiagnostics> {
        self.quantities.iter().find(|q| q.name == name)
    }

    /// Human-readable warnings for thresholds that trip.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for q in &self.quantities {
            match q.rhat {
                Some(r) if r > RHAT_WARN => {
                    out.push(format!("{}: split R-hat {r:.4} exceeds {RHAT_WARN}", q.name))
                }
                None => out.push(format!("{}: split R-hat needs at least 2 chains", q.name)),
                _ => {}
            }
            if q.ess < ESS_WARN {
                out.push(format!("{}: effective sample size {:.1} is below {ESS_WARN}", q.name, q.ess));
            }
        }
        out
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_var(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}

fn all_equal(seqs: &[&[f64]]) -> bool {
    let first = seqs.iter().find_map(|s| s.first()).copied();
    seqs.iter().all(|s| s.iter().all(|&v| Some(v) == first))
}

/// Split-R̂ over per-chain draw sequences.
///
/// Each chain is cut into a first and a second half (the middle draw of an
/// odd-length chain is dropped), and the potential scale reduction factor
/// `sqrt(((n-1)/n * W + B/n) / W)` is computed over the halves. Values are
/// floored at 1. Zero within-half variance yields 1 when the halves also agree
/// and `+inf` otherwise.
pub fn split_rhat_sequences(chains: &[&[f64]]) -> Result<f64> {
    if chains.len() < 2 {
        return Err(Error::InsufficientDraws(format!(
            "split R-hat needs at least 2 chains, got {}",
            chains.len()
        )));
    }
    let min_len = chains.iter().map(|c| c.len()).min().unwrap_or(0);
    if min_len < 4 {
        return Err(Error::InsufficientDraws(format!(
            "split R-hat needs at least 4 draws per chain, shortest has {min_len}"
        )));
    }
    let half = min_len / 2;
    let halves: Vec<&[f64]> = chains
        .iter()
        .flat_map(|c| [&c[..half], &c[c.len() - half..]])
        .collect();
    if all_equal(&halves) {
        return Ok(1.0);
    }

    let n = half as f64;
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let within = halves.iter().map(|h| sample_var(h)).sum::<f64>() / halves.len() as f64;
    let between = n * sample_var(&means);
    if within == 0.0 {
        return Ok(if between == 0.0 { 1.0 } else { f64::INFINITY });
    }
    let var_plus = (n - 1.0) / n * within + between / n;
    Ok((var_plus / within).sqrt().max(1.0))
}

pub fn split_rhat(chains: &ChainSet, quantity: &str) -> Result<f64> {
    split_rhat_sequences(&chains.by_chain(quantity)?)
}

/// Effective sample size of one chain by Geyer's initial positive sequence,
/// made monotone. A zero-variance chain counts every draw as effective.
fn chain_ess(x: &[f64]) -> f64 {
    let n = x.len();
    let m = mean(x);
    let acov = |lag: usize| -> f64 {
        x[..n - lag].iter().zip(&x[lag..]).map(|(a, b)| (a - m) * (b - m)).sum::<f64>() / n as f64
    };
    let c0 = acov(0);
    if c0 <= 0.0 || all_equal(&[x]) {
        return n as f64;
    }

    let mut sum_pairs = 0.0;
    let mut prev_pair = f64::INFINITY;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = (acov(lag) + acov(lag + 1)) / c0;
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        sum_pairs += pair;
        prev_pair = pair;
        lag += 2;
    }
    let tau = -1.0 + 2.0 * sum_pairs;
    let cap = ESS_CAP_FACTOR * n as f64;
    if tau <= 0.0 {
        cap
    } else {
        (n as f64 / tau).min(cap)
    }
}

/// ESS summed over the per-chain estimates.
pub fn effective_sample_size_sequences(chains: &[&[f64]]) -> Result<f64> {
    let total: usize = chains.iter().map(|c| c.len()).sum();
    if chains.is_empty() || chains.iter().any(|c| c.len() < 8) {
        return Err(Error::InsufficientDraws(
            "effective sample size needs at least 8 draws in every chain".into(),
        ));
    }
    let ess: f64 = chains.iter().map(|c| chain_ess(c)).sum();
    Ok(ess.min(ESS_CAP_FACTOR * total as f64))
}

pub fn effective_sample_size(chains: &ChainSet, quantity: &str) -> Result<f64> {
    effective_sample_size_sequences(&chains.by_chain(quantity)?)
}

/// Diagnostics for every quantity in the chain set.
pub fn diagnose(chains: &ChainSet) -> Result<DiagnosticsReport> {
    let mut quantities = Vec::new();
    for name in chains.names() {
        let seqs = chains.by_chain(name)?;
        let rhat = if seqs.len() >= 2 {
            Some(split_rhat_sequences(&seqs)?)
        } else {
            None
        };
        let ess = effective_sample_size_sequences(&seqs)?;
        let std = summarize_values(name, chains.get(name)?)?.std;
        quantities.push(QuantityDiagnostics {
            name: name.clone(),
            rhat,
            ess,
            mcse: std / ess.sqrt(),
        });
    }
    Ok(DiagnosticsReport { quantities })
}
