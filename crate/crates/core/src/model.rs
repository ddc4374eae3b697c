//! Parameter and data types for the two latent-class models, the map from
//! parameters to cross-tab cell probabilities, and the multinomial likelihood.
//!
//! Cells are always ordered `(A=1,B=1), (A=1,B=0), (A=0,B=1), (A=0,B=0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prior::PriorSet;
use crate::special::{beta_ln_pdf, ln_factorial};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Rate(f64);

impl Rate {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Rate(value))
        } else {
            Err(Error::InvalidRate(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - self`.
    pub fn complement(self) -> Rate {
        Rate(1.0 - self.0)
    }

    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Rate::new(v).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<f64> for Rate {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Rate::new(value)
    }
}

/// Which of the two models is being fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelVariant {
    /// Two classifiers, one unlabeled dataset: five parameters.
    OneDataset,
    /// Two classifiers, two unlabeled datasets with shared accuracies: six parameters.
    TwoDatasets,
}

impl ModelVariant {
    pub fn n_prevalences(self) -> usize {
        match self {
            ModelVariant::OneDataset => 1,
            ModelVariant::TwoDatasets => 2,
        }
    }

    pub fn n_params(self) -> usize {
        4 + self.n_prevalences()
    }

    /// Parameter names in storage order, as they appear in chain CSV headers.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ModelVariant::OneDataset => &["Se_A", "Sp_A", "Se_B", "Sp_B", "pi"],
            ModelVariant::TwoDatasets => &["Se_A", "Sp_A", "Se_B", "Sp_B", "pi", "pi_beta"],
        }
    }

    pub fn from_n_prevalences(n: usize) -> Result<Self> {
        match n {
            1 => Ok(ModelVariant::OneDataset),
            2 => Ok(ModelVariant::TwoDatasets),
            n => Err(Error::Model(format!("{n} prevalences; expected 1 or 2"))),
        }
    }
}

/// Joint prediction counts of classifiers A and B on one dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CrossTab {
    /// A=1, B=1
    pub y1: u64,
    /// A=1, B=0
    pub y2: u64,
    /// A=0, B=1
    pub y3: u64,
    /// A=0, B=0
    pub y4: u64,
}

impl CrossTab {
    pub const fn new(y1: u64, y2: u64, y3: u64, y4: u64) -> Self {
        CrossTab { y1, y2, y3, y4 }
    }

    pub fn n(&self) -> u64 {
        self.y1 + self.y2 + self.y3 + self.y4
    }

    pub fn counts(&self) -> [u64; 4] {
        [self.y1, self.y2, self.y3, self.y4]
    }

    pub fn from_counts(c: [u64; 4]) -> Self {
        CrossTab::new(c[0], c[1], c[2], c[3])
    }

    /// The table with the roles of A and B exchanged.
    pub fn transposed(&self) -> Self {
        CrossTab::new(self.y1, self.y3, self.y2, self.y4)
    }
}

/// Multinomial cell probabilities for one cross-tab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellProbs {
    pub p: [f64; 4],
}

impl CellProbs {
    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// One point in parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamState {
    pub se_a: Rate,
    pub sp_a: Rate,
    pub se_b: Rate,
    pub sp_b: Rate,
    /// `[pi]` for one dataset, `[pi_alpha, pi_beta]` for two.
    pub prevalences: Vec<Rate>,
}

impl ParamState {
    pub fn new(se_a: f64, sp_a: f64, se_b: f64, sp_b: f64, prevalences: &[f64]) -> Result<Self> {
        ModelVariant::from_n_prevalences(prevalences.len())?;
        Ok(ParamState {
            se_a: Rate::new(se_a)?,
            sp_a: Rate::new(sp_a)?,
            se_b: Rate::new(se_b)?,
            sp_b: Rate::new(sp_b)?,
            prevalences: prevalences.iter().map(|&p| Rate::new(p)).collect::<Result<_>>()?,
        })
    }

    pub fn variant(&self) -> ModelVariant {
        // Length is validated at construction.
        if self.prevalences.len() == 2 {
            ModelVariant::TwoDatasets
        } else {
            ModelVariant::OneDataset
        }
    }

    pub fn prevalence(&self, index: usize) -> Result<Rate> {
        self.prevalences.get(index).copied().ok_or(Error::Index {
            index,
            len: self.prevalences.len(),
        })
    }

    /// Values in storage order (`Se_A, Sp_A, Se_B, Sp_B, pi[, pi_beta]`).
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.se_a.0, self.sp_a.0, self.se_b.0, self.sp_b.0];
        v.extend(self.prevalences.iter().map(|r| r.0));
        v
    }

    /// The likelihood-equivalent relabeling `(1-Sp, 1-Se, 1-pi)`.
    pub fn mirrored(&self) -> Self {
        ParamState {
            se_a: Rate(1.0 - self.sp_a.0),
            sp_a: Rate(1.0 - self.se_a.0),
            se_b: Rate(1.0 - self.sp_b.0),
            sp_b: Rate(1.0 - self.se_b.0),
            prevalences: self.prevalences.iter().map(|r| Rate(1.0 - r.0)).collect(),
        }
    }

    /// The state with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        ParamState {
            se_a: self.se_b,
            sp_a: self.sp_b,
            se_b: self.se_a,
            sp_b: self.sp_a,
            prevalences: self.prevalences.clone(),
        }
    }
}

/// Split of each cell probability into its true-positive-label and
/// true-negative-label terms: `p_i = pos[i] + neg[i]`.
pub(crate) fn cell_terms(
    se_a: f64,
    sp_a: f64,
    se_b: f64,
    sp_b: f64,
    pi: f64,
) -> ([f64; 4], [f64; 4]) {
    let q = 1.0 - pi;
    let pos = [
        pi * se_a * se_b,
        pi * se_a * (1.0 - se_b),
        pi * (1.0 - se_a) * se_b,
        pi * (1.0 - se_a) * (1.0 - se_b),
    ];
    let neg = [
        q * (1.0 - sp_a) * (1.0 - sp_b),
        q * (1.0 - sp_a) * sp_b,
        q * sp_a * (1.0 - sp_b),
        q * sp_a * sp_b,
    ];
    (pos, neg)
}

/// Cell probabilities of the cross-tab for the dataset with the given prevalence.
pub fn cell_probs(state: &ParamState, prevalence_index: usize) -> Result<CellProbs> {
    let pi = state.prevalence(prevalence_index)?.get();
    let (pos, neg) = cell_terms(
        state.se_a.get(),
        state.sp_a.get(),
        state.se_b.get(),
        state.sp_b.get(),
        pi,
    );
    Ok(CellProbs {
        p: [pos[0] + neg[0], pos[1] + neg[1], pos[2] + neg[2], pos[3] + neg[3]],
    })
}

/// Log of the multinomial pmf of `tab` under `probs`, coefficient included.
///
/// Returns `-inf` when a cell with observations has probability zero.
pub fn log_likelihood(tab: &CrossTab, probs: &CellProbs) -> f64 {
    let counts = tab.counts();
    let mut ll = ln_factorial(tab.n());
    for (&y, &p) in counts.iter().zip(probs.p.iter()) {
        if y == 0 {
            continue;
        }
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += y as f64 * p.ln() - ln_factorial(y);
    }
    ll
}

/// Log joint posterior density (unnormalized): the sum of each dataset's
/// multinomial log-likelihood and the Beta log-density of every parameter.
///
/// Both the multinomial coefficients and the Beta normalizing constants are
/// included, so the only missing constant is the marginal likelihood.
/// A parameter sitting on 0 or 1 where its prior density is not finite and
/// positive yields `-inf`.
pub fn joint_log_posterior(state: &ParamState, tabs: &[CrossTab], priors: &PriorSet) -> Result<f64> {
    let n_prev = state.prevalences.len();
    if tabs.len() != n_prev || priors.prevalences.len() != n_prev {
        return Err(Error::Model(format!(
            "state has {n_prev} prevalence(s) but {} table(s) and {} prevalence prior(s) were given",
            tabs.len(),
            priors.prevalences.len()
        )));
    }

    let mut lp = 0.0;
    let rates = [
        (state.se_a, priors.se_a),
        (state.sp_a, priors.sp_a),
        (state.se_b, priors.se_b),
        (state.sp_b, priors.sp_b),
    ];
    let prevs = state.prevalences.iter().zip(priors.prevalences.iter());
    for (rate, prior) in rates.iter().map(|(r, p)| (r, p)).chain(prevs) {
        let term = beta_ln_pdf(prior.a(), prior.b(), rate.get());
        if !term.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        lp += term;
    }
    for (index, tab) in tabs.iter().enumerate() {
        lp += log_likelihood(tab, &cell_probs(state, index)?);
    }
    Ok(lp)
}
