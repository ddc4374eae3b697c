//! Storage for kept MCMC draws.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelVariant;
use crate::sampler::SamplerConfig;

/// Kept draws from one or more chains, stored column-wise.
///
/// Rows are grouped by chain in ascending chain index; within a chain they
/// are in iteration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSet {
    pub variant: ModelVariant,
    pub config: Option<SamplerConfig>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    chain: Vec<usize>,
    iteration: Vec<u64>,
}

impl ChainSet {
    /// An empty set with the given row labels and no quantities yet.
    pub fn new(variant: ModelVariant, chain: Vec<usize>, iteration: Vec<u64>) -> Result<Self> {
        if chain.len() != iteration.len() {
            return Err(Error::Model(format!(
                "{} chain labels but {} iteration labels",
                chain.len(),
                iteration.len()
            )));
        }
        if chain.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Model("rows must be grouped by ascending chain index".into()));
        }
        Ok(ChainSet {
            variant,
            config: None,
            names: Vec::new(),
            columns: Vec::new(),
            chain,
            iteration,
        })
    }

    pub fn with_config(mut self, config: SamplerConfig) -> Self {
        self.config = Some(config);
        self
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.chain.len() {
            return Err(Error::Model(format!(
                "column {name} has {} draws, expected {}",
                values.len(),
                self.chain.len()
            )));
        }
        if self.names.contains(&name) {
            return Err(Error::Model(format!("duplicate quantity {name}")));
        }
        self.names.push(name);
        self.columns.push(values);
        Ok(())
    }

    /// Append every quantity of `other`, which must label its rows identically.
    pub fn extend(&mut self, other: &ChainSet) -> Result<()> {
        if other.chain != self.chain || other.iteration != self.iteration {
            return Err(Error::Model("cannot merge chain sets with different rows".into()));
        }
        for (name, col) in other.names.iter().zip(&other.columns) {
            self.push_column(name.clone(), col.clone())?;
        }
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn chain_labels(&self) -> &[usize] {
        &self.chain
    }

    pub fn iterations(&self) -> &[u64] {
        &self.iteration
    }

    pub fn get(&self, name: &str) -> Result<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| Error::UnknownQuantity(name.to_string()))
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names.iter().map(String::as_str).zip(self.columns.iter().map(Vec::as_slice))
    }

    /// Number of distinct chains.
    pub fn n_chains(&self) -> usize {
        let mut n = 0;
        let mut last = None;
        for &c in &self.chain {
            if last != Some(c) {
                n += 1;
                last = Some(c);
            }
        }
        n
    }

    /// The draws of one quantity, split into per-chain slices.
    pub fn by_chain(&self, name: &str) -> Result<Vec<&[f64]>> {
        let col = self.get(name)?;
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.chain.len() {
            if i == self.chain.len() || self.chain[i] != self.chain[start] {
                out.push(&col[start..i]);
                start = i;
            }
        }
        Ok(out)
    }
}
