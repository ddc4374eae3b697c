//! Gibbs sampler with latent-label data augmentation.
//!
//! Each sweep first splits every cross-tab cell into the observations whose
//! (unobserved) true label is 1 and those whose true label is 0, then draws
//! every parameter from its Beta full conditional given that split.
//!
//! # Random streams
//!
//! Chain `c` of a run seeded with `seed` draws from
//! `ChaCha20Rng::seed_from_u64(seed)` switched to stream `c`
//! (`set_stream(c)`). ChaCha is counter based, so streams are independent and
//! a chain's draws do not depend on how many other chains run or in which
//! order they are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Beta, Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::ChainSet;
use crate::error::{Error, Result};
use crate::model::{cell_terms, CrossTab, ModelVariant, ParamState, Rate};
use crate::prior::{BetaParams, PriorSet};

/// Redraws allowed per classifier per sweep before giving up on Se + Sp > 1.
pub const MAX_CONSTRAINT_ATTEMPTS: usize = 1000;

/// Spread of the per-chain starting offsets around the prior means.
const INIT_JITTER: f64 = 0.05;

/// Per-cell counts of observations whose latent true label is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LatentSplit {
    pub z: [u64; 4],
}

impl LatentSplit {
    pub fn positives(&self) -> u64 {
        self.z.iter().sum()
    }

    fn check(&self, tab: &CrossTab) -> Result<()> {
        for (i, (&z, y)) in self.z.iter().zip(tab.counts()).enumerate() {
            if z > y {
                return Err(Error::Model(format!(
                    "latent count {z} exceeds the {y} observations in cell {}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub n_iterations: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub n_chains: usize,
    pub seed: u64,
    pub enforce_identifiability: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            n_iterations: 20_000,
            burn_in: 5_000,
            thin: 5,
            n_chains: 4,
            seed: 0,
            enforce_identifiability: true,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_iterations == 0 {
            return Err(Error::Config("n_iterations must be positive".into()));
        }
        if self.thin == 0 {
            return Err(Error::Config("thin must be positive".into()));
        }
        if self.n_chains == 0 {
            return Err(Error::Config("n_chains must be positive".into()));
        }
        if self.burn_in >= self.n_iterations {
            return Err(Error::Config(format!(
                "burn_in ({}) must be less than n_iterations ({})",
                self.burn_in, self.n_iterations
            )));
        }
        if self.kept_per_chain() < 100 {
            return Err(Error::Config(format!(
                "(n_iterations - burn_in) / thin = {} but at least 100 kept draws per chain are required",
                self.kept_per_chain()
            )));
        }
        Ok(())
    }

    pub fn kept_per_chain(&self) -> u64 {
        self.n_iterations.saturating_sub(self.burn_in) / self.thin.max(1)
    }

    fn keeps(&self, iteration: u64) -> bool {
        iteration >= self.burn_in && (iteration - self.burn_in + 1) % self.thin == 0
    }
}

/// The random stream for one chain.
pub fn chain_rng(seed: u64, chain_index: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(chain_index as u64);
    rng
}

/// Draw how many observations in each cell of `tab` are latently positive.
///
/// Cell `i` contributes `Binomial(y_i, t_i / p_i)` where `t_i` is the
/// prevalence-weighted term of `p_i`.
pub fn sample_latents<R: Rng + ?Sized>(
    tab: &CrossTab,
    state: &ParamState,
    prevalence_index: usize,
    rng: &mut R,
) -> Result<LatentSplit> {
    let pi = state.prevalence(prevalence_index)?.get();
    let (pos, neg) = cell_terms(
        state.se_a.get(),
        state.sp_a.get(),
        state.se_b.get(),
        state.sp_b.get(),
        pi,
    );
    let mut split = LatentSplit::default();
    for (i, y) in tab.counts().into_iter().enumerate() {
        if y == 0 {
            continue;
        }
        let p = pos[i] + neg[i];
        if p <= 0.0 {
            return Err(Error::SamplerState { cell: i + 1, count: y });
        }
        let share = (pos[i] / p).clamp(0.0, 1.0);
        split.z[i] = if share == 0.0 {
            0
        } else if share == 1.0 {
            y
        } else {
            Binomial::new(y, share)
                .map_err(|e| Error::Model(e.to_string()))?
                .sample(rng)
        };
    }
    Ok(split)
}

/// Beta parameters of every full conditional given the latent splits.
#[derive(Debug, Clone, PartialEq)]
pub struct FullConditionals {
    pub se_a: BetaParams,
    pub sp_a: BetaParams,
    pub se_b: BetaParams,
    pub sp_b: BetaParams,
    pub prevalences: Vec<BetaParams>,
}

/// Conjugate updates of the priors by the latent-label tallies. Rates pool
/// over all datasets; each prevalence uses only its own dataset.
pub fn full_conditionals(
    latents: &[LatentSplit],
    tabs: &[CrossTab],
    priors: &PriorSet,
) -> Result<FullConditionals> {
    if latents.len() != tabs.len() || tabs.len() != priors.prevalences.len() {
        return Err(Error::Model(format!(
            "{} latent split(s), {} table(s), {} prevalence prior(s)",
            latents.len(),
            tabs.len(),
            priors.prevalences.len()
        )));
    }

    // [A positive & true 1, A negative & true 1, A negative & true 0, A positive & true 0], same for B.
    let (mut se_a, mut sp_a, mut se_b, mut sp_b) = ([0u64; 2], [0u64; 2], [0u64; 2], [0u64; 2]);
    let mut prevalences = Vec::with_capacity(tabs.len());
    for ((split, tab), prior) in latents.iter().zip(tabs).zip(&priors.prevalences) {
        split.check(tab)?;
        let z = split.z;
        let y = tab.counts();
        let w = [y[0] - z[0], y[1] - z[1], y[2] - z[2], y[3] - z[3]];

        se_a[0] += z[0] + z[1];
        se_a[1] += z[2] + z[3];
        sp_a[0] += w[2] + w[3];
        sp_a[1] += w[0] + w[1];
        se_b[0] += z[0] + z[2];
        se_b[1] += z[1] + z[3];
        sp_b[0] += w[1] + w[3];
        sp_b[1] += w[0] + w[2];

        let pos = split.positives();
        prevalences.push(update(prior, [pos, tab.n() - pos])?);
    }
    Ok(FullConditionals {
        se_a: update(&priors.se_a, se_a)?,
        sp_a: update(&priors.sp_a, sp_a)?,
        se_b: update(&priors.se_b, se_b)?,
        sp_b: update(&priors.sp_b, sp_b)?,
        prevalences,
    })
}

fn update(prior: &BetaParams, [successes, failures]: [u64; 2]) -> Result<BetaParams> {
    BetaParams::new(prior.a() + successes as f64, prior.b() + failures as f64)
}

fn beta_dist(p: &BetaParams) -> Result<Beta<f64>> {
    Beta::new(p.a(), p.b()).map_err(|e| Error::Model(e.to_string()))
}

fn draw_interior<R: Rng + ?Sized>(dist: &Beta<f64>, rng: &mut R) -> Option<f64> {
    let v = dist.sample(rng);
    (v > 0.0 && v < 1.0).then_some(v)
}

/// Draw `(Se, Sp)` for one classifier from their (independent) conditionals,
/// optionally restricted to `Se + Sp > 1` by redrawing the pair.
fn draw_classifier<R: Rng + ?Sized>(
    se: &BetaParams,
    sp: &BetaParams,
    constrained: bool,
    classifier: char,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let (se_dist, sp_dist) = (beta_dist(se)?, beta_dist(sp)?);
    for _ in 0..MAX_CONSTRAINT_ATTEMPTS {
        let (Some(s), Some(p)) = (draw_interior(&se_dist, rng), draw_interior(&sp_dist, rng)) else {
            continue;
        };
        if !constrained || s + p > 1.0 {
            return Ok((s, p));
        }
    }
    Err(Error::Identifiability { classifier, attempts: MAX_CONSTRAINT_ATTEMPTS })
}

/// Draw a new parameter state from the full conditionals.
pub fn update_parameters<R: Rng + ?Sized>(
    latents: &[LatentSplit],
    tabs: &[CrossTab],
    priors: &PriorSet,
    enforce_identifiability: bool,
    rng: &mut R,
) -> Result<ParamState> {
    let fc = full_conditionals(latents, tabs, priors)?;
    let (se_a, sp_a) = draw_classifier(&fc.se_a, &fc.sp_a, enforce_identifiability, 'A', rng)?;
    let (se_b, sp_b) = draw_classifier(&fc.se_b, &fc.sp_b, enforce_identifiability, 'B', rng)?;
    let mut prevalences = Vec::with_capacity(fc.prevalences.len());
    for p in &fc.prevalences {
        let dist = beta_dist(p)?;
        let v = (0..MAX_CONSTRAINT_ATTEMPTS)
            .find_map(|_| draw_interior(&dist, rng))
            .ok_or_else(|| Error::Model(format!("prevalence conditional {p:?} kept drawing 0 or 1")))?;
        prevalences.push(Rate::new(v)?);
    }
    Ok(ParamState {
        se_a: Rate::new(se_a)?,
        sp_a: Rate::new(sp_a)?,
        se_b: Rate::new(se_b)?,
        sp_b: Rate::new(sp_b)?,
        prevalences,
    })
}

/// Starting point of chain `chain_index`: prior means shifted by an offset
/// stratified over `[-0.05, 0.05]` across chains, clipped to `[0.01, 0.99]`.
pub fn initial_state(priors: &PriorSet, chain_index: usize, n_chains: usize) -> Result<ParamState> {
    let offset = if n_chains > 1 {
        -INIT_JITTER + 2.0 * INIT_JITTER * chain_index as f64 / (n_chains - 1) as f64
    } else {
        0.0
    };
    let start = |p: &BetaParams| (p.mean() + offset).clamp(0.01, 0.99);
    let prevs: Vec<f64> = priors.prevalences.iter().map(start).collect();
    ParamState::new(
        start(&priors.se_a),
        start(&priors.sp_a),
        start(&priors.se_b),
        start(&priors.sp_b),
        &prevs,
    )
}

/// Replace any start pair with `Se + Sp < 1` by its reflection
/// `(1 - Sp, 1 - Se)`, so constrained chains do not start in the mirrored mode.
pub fn reflect_into_identifiable(mut state: ParamState) -> ParamState {
    for (se, sp) in [(&mut state.se_a, &mut state.sp_a), (&mut state.se_b, &mut state.sp_b)] {
        if se.get() + sp.get() < 1.0 {
            (*se, *sp) = (sp.complement(), se.complement());
        }
    }
    state
}

fn check_inputs(variant: ModelVariant, tabs: &[CrossTab], priors: &PriorSet) -> Result<()> {
    let need = variant.n_prevalences();
    if tabs.len() != need {
        return Err(Error::Model(format!(
            "{variant:?} needs {need} cross-tab(s), got {}",
            tabs.len()
        )));
    }
    if priors.prevalences.len() != need {
        return Err(Error::Model(format!(
            "{variant:?} needs {need} prevalence prior(s), got {}",
            priors.prevalences.len()
        )));
    }
    Ok(())
}

/// Run one chain and return its kept states with their iteration numbers.
pub fn run_single_chain(
    variant: ModelVariant,
    tabs: &[CrossTab],
    priors: &PriorSet,
    config: &SamplerConfig,
    chain_index: usize,
) -> Result<Vec<(u64, ParamState)>> {
    config.validate()?;
    check_inputs(variant, tabs, priors)?;

    let mut rng = chain_rng(config.seed, chain_index);
    let mut state = initial_state(priors, chain_index, config.n_chains)?;
    if config.enforce_identifiability {
        state = reflect_into_identifiable(state);
    }
    let mut kept = Vec::with_capacity(config.kept_per_chain() as usize);
    let mut latents = vec![LatentSplit::default(); tabs.len()];
    for iteration in 0..config.n_iterations {
        for (d, tab) in tabs.iter().enumerate() {
            latents[d] = sample_latents(tab, &state, d, &mut rng)?;
        }
        state = update_parameters(&latents, tabs, priors, config.enforce_identifiability, &mut rng)?;
        if config.keeps(iteration) {
            kept.push((iteration, state.clone()));
        }
    }
    Ok(kept)
}

/// Run `config.n_chains` chains (concurrently) and merge them in chain order.
pub fn run_chain(
    variant: ModelVariant,
    tabs: &[CrossTab],
    priors: &PriorSet,
    config: &SamplerConfig,
) -> Result<ChainSet> {
    config.validate()?;
    check_inputs(variant, tabs, priors)?;

    let per_chain: Vec<Vec<(u64, ParamState)>> = (0..config.n_chains)
        .into_par_iter()
        .map(|c| run_single_chain(variant, tabs, priors, config, c))
        .collect::<Result<_>>()?;

    let total: usize = per_chain.iter().map(Vec::len).sum();
    let mut chain = Vec::with_capacity(total);
    let mut iteration = Vec::with_capacity(total);
    let mut columns = vec![Vec::with_capacity(total); variant.n_params()];
    for (c, draws) in per_chain.into_iter().enumerate() {
        for (it, state) in draws {
            chain.push(c);
            iteration.push(it);
            for (col, v) in columns.iter_mut().zip(state.to_vec()) {
                col.push(v);
            }
        }
    }

    let mut set = ChainSet::new(variant, chain, iteration)?.with_config(*config);
    for (name, col) in variant.param_names().iter().zip(columns) {
        set.push_column(*name, col)?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n_iterations: u64, burn_in: u64, thin: u64, n_chains: usize, seed: u64) -> SamplerConfig {
        SamplerConfig { n_iterations, burn_in, thin, n_chains, seed, enforce_identifiability: true }
    }

    fn worked_state() -> ParamState {
        ParamState::new(0.898, 0.956, 0.920, 0.936, &[0.296]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::default().validate().is_ok());
        assert_eq!(SamplerConfig::default().kept_per_chain(), 3000);
        assert!(matches!(cfg(100, 100, 1, 1, 0).validate(), Err(Error::Config(_))));
        assert!(matches!(cfg(1000, 0, 0, 1, 0).validate(), Err(Error::Config(_))));
        assert!(matches!(cfg(1000, 0, 1, 0, 0).validate(), Err(Error::Config(_))));
        assert!(matches!(cfg(1000, 600, 5, 1, 0).validate(), Err(Error::Config(_))));
        assert!(cfg(1000, 500, 5, 1, 0).validate().is_ok());
    }

    #[test]
    fn keep_schedule_matches_count() {
        let c = cfg(1003, 3, 10, 1, 0);
        let kept = (0..c.n_iterations).filter(|&i| c.keeps(i)).count() as u64;
        assert_eq!(kept, c.kept_per_chain());
        assert_eq!(kept, 100);
    }

    #[test]
    fn perfect_specificity_keeps_both_positive_cell() {
        let s = ParamState::new(0.7, 1.0, 0.6, 1.0, &[0.4]).unwrap();
        let tab = CrossTab::new(37, 5, 6, 50);
        let mut rng = chain_rng(1, 0);
        for _ in 0..20 {
            assert_eq!(sample_latents(&tab, &s, 0, &mut rng).unwrap().z[0], 37);
        }
    }

    #[test]
    fn perfect_sensitivity_empties_both_negative_cell() {
        let s = ParamState::new(1.0, 0.8, 1.0, 0.7, &[0.4]).unwrap();
        let tab = CrossTab::new(37, 5, 6, 50);
        let mut rng = chain_rng(2, 0);
        for _ in 0..20 {
            assert_eq!(sample_latents(&tab, &s, 0, &mut rng).unwrap().z[3], 0);
        }
    }

    #[test]
    fn latent_share_concentrates_on_term_ratio() {
        // t1 = 0.296*0.898*0.920 = 0.24454336, p1 = t1 + 0.704*0.044*0.064 = 0.246525824
        let ratio = 0.24454336 / 0.246525824;
        let y = 10_000u64;
        let tab = CrossTab::new(y, 0, 0, 0);
        let mut rng = chain_rng(3, 0);
        let draws = 1000;
        let mean: f64 = (0..draws)
            .map(|_| sample_latents(&tab, &worked_state(), 0, &mut rng).unwrap().z[0] as f64 / y as f64)
            .sum::<f64>()
            / draws as f64;
        let se = (ratio * (1.0 - ratio) / y as f64 / draws as f64).sqrt();
        assert!((mean - ratio).abs() < 3.0 * se, "mean {mean} vs {ratio} (se {se})");
        assert!((ratio - 0.992).abs() < 1e-3);
    }

    #[test]
    fn zero_probability_cell_is_a_sampler_error() {
        let s = ParamState::new(1.0, 1.0, 1.0, 1.0, &[0.3]).unwrap();
        let tab = CrossTab::new(1, 1, 0, 1);
        let err = sample_latents(&tab, &s, 0, &mut chain_rng(0, 0)).unwrap_err();
        assert!(matches!(err, Error::SamplerState { cell: 2, count: 1 }));
    }

    #[test]
    fn no_data_conditionals_equal_priors() {
        let priors = PriorSet::new(
            BetaParams::new(20.0, 4.0).unwrap(),
            BetaParams::new(3.0, 2.0).unwrap(),
            BetaParams::new(1.5, 7.0).unwrap(),
            BetaParams::new(9.0, 9.0).unwrap(),
            vec![BetaParams::new(2.0, 5.0).unwrap()],
        )
        .unwrap();
        let fc = full_conditionals(&[LatentSplit::default()], &[CrossTab::default()], &priors).unwrap();
        assert_eq!(fc.se_a, priors.se_a);
        assert_eq!(fc.sp_a, priors.sp_a);
        assert_eq!(fc.se_b, priors.se_b);
        assert_eq!(fc.sp_b, priors.sp_b);
        assert_eq!(fc.prevalences, priors.prevalences);
    }

    #[test]
    fn all_positive_split_moves_prevalence_by_n() {
        let priors = PriorSet::uniform(ModelVariant::OneDataset);
        let tab = CrossTab::new(40, 3, 7, 100);
        let split = LatentSplit { z: tab.counts() };
        let fc = full_conditionals(&[split], &[tab], &priors).unwrap();
        assert_eq!(fc.prevalences[0], BetaParams::new(151.0, 1.0).unwrap());
    }

    #[test]
    fn worked_table_hand_tallied_conditionals() {
        // y = (40, 3, 7, 100), z = (38, 1, 2, 4) so the negatives are (2, 2, 5, 96).
        let tab = CrossTab::new(40, 3, 7, 100);
        let split = LatentSplit { z: [38, 1, 2, 4] };
        let priors = PriorSet::shared(
            ModelVariant::OneDataset,
            BetaParams::new(20.0, 4.0).unwrap(),
            BetaParams::uniform(),
        );
        let fc = full_conditionals(&[split], &[tab], &priors).unwrap();
        // Se_A: true positives seen by A in cells 1,2 -> 39; missed in cells 3,4 -> 6.
        assert_eq!(fc.se_a, BetaParams::new(59.0, 10.0).unwrap());
        // Sp_A: negatives A calls 0 (cells 3,4) -> 101; A calls 1 (cells 1,2) -> 4.
        assert_eq!(fc.sp_a, BetaParams::new(121.0, 8.0).unwrap());
        // Se_B: cells 1,3 -> 40; cells 2,4 -> 5.
        assert_eq!(fc.se_b, BetaParams::new(60.0, 9.0).unwrap());
        // Sp_B: cells 2,4 -> 98; cells 1,3 -> 7.
        assert_eq!(fc.sp_b, BetaParams::new(118.0, 11.0).unwrap());
        // pi: 45 positive of 150.
        assert_eq!(fc.prevalences[0], BetaParams::new(46.0, 106.0).unwrap());
    }

    #[test]
    fn two_dataset_conditionals_pool_rates_only() {
        let t1 = CrossTab::new(10, 2, 3, 20);
        let t2 = CrossTab::new(5, 1, 1, 30);
        let s1 = LatentSplit { z: [9, 1, 1, 1] };
        let s2 = LatentSplit { z: [5, 0, 1, 0] };
        let priors = PriorSet::uniform(ModelVariant::TwoDatasets);
        let fc = full_conditionals(&[s1, s2], &[t1, t2], &priors).unwrap();
        assert_eq!(fc.se_a, BetaParams::new(1.0 + 10.0 + 5.0, 1.0 + 2.0 + 1.0).unwrap());
        assert_eq!(fc.prevalences[0], BetaParams::new(1.0 + 12.0, 1.0 + 23.0).unwrap());
        assert_eq!(fc.prevalences[1], BetaParams::new(1.0 + 6.0, 1.0 + 31.0).unwrap());
    }

    #[test]
    fn inconsistent_latents_rejected() {
        let tab = CrossTab::new(1, 1, 1, 1);
        let priors = PriorSet::uniform(ModelVariant::OneDataset);
        assert!(full_conditionals(&[LatentSplit { z: [2, 0, 0, 0] }], &[tab], &priors).is_err());
    }

    #[test]
    fn identifiability_cap_reports_error() {
        // Conditionals concentrated far below Se + Sp = 1.
        let priors = PriorSet::shared(
            ModelVariant::OneDataset,
            BetaParams::new(1.0, 1e6).unwrap(),
            BetaParams::uniform(),
        );
        let err = update_parameters(
            &[LatentSplit::default()],
            &[CrossTab::default()],
            &priors,
            true,
            &mut chain_rng(0, 0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Identifiability { classifier: 'A', .. }));
        assert!(update_parameters(
            &[LatentSplit::default()],
            &[CrossTab::default()],
            &priors,
            false,
            &mut chain_rng(0, 0)
        )
        .is_ok());
    }

    #[test]
    fn initial_states_are_stratified_and_clipped() {
        let priors = PriorSet::shared(
            ModelVariant::OneDataset,
            BetaParams::new(20.0, 4.0).unwrap(),
            BetaParams::new(1.0, 200.0).unwrap(),
        );
        let first = initial_state(&priors, 0, 4).unwrap();
        let last = initial_state(&priors, 3, 4).unwrap();
        assert!((first.se_a.get() - (20.0 / 24.0 - 0.05)).abs() < 1e-12);
        assert!((last.se_a.get() - (20.0 / 24.0 + 0.05)).abs() < 1e-12);
        assert_eq!(first.prevalences[0].get(), 0.01);
        assert_eq!(initial_state(&priors, 0, 1).unwrap().se_a.get(), 20.0 / 24.0);
    }

    #[test]
    fn constrained_starts_are_reflected() {
        let s = ParamState::new(0.45, 0.4, 0.7, 0.6, &[0.3]).unwrap();
        let r = reflect_into_identifiable(s);
        assert!((r.se_a.get() - 0.6).abs() < 1e-15 && (r.sp_a.get() - 0.55).abs() < 1e-15);
        assert_eq!((r.se_b.get(), r.sp_b.get(), r.prevalences[0].get()), (0.7, 0.6, 0.3));
    }

    #[test]
    fn run_chain_shape_and_determinism() {
        let tab = CrossTab::new(40, 3, 7, 100);
        let priors = PriorSet::shared(
            ModelVariant::OneDataset,
            BetaParams::new(20.0, 4.0).unwrap(),
            BetaParams::uniform(),
        );
        let c = cfg(1500, 500, 2, 3, 99);
        let a = run_chain(ModelVariant::OneDataset, &[tab], &priors, &c).unwrap();
        let b = run_chain(ModelVariant::OneDataset, &[tab], &priors, &c).unwrap();
        assert_eq!(a.len(), 3 * 500);
        assert_eq!(a.n_chains(), 3);
        for ((_, x), (_, y)) in a.columns().zip(b.columns()) {
            assert!(x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
        assert_eq!(a.iterations()[0], 501);
        assert_eq!(a.iterations()[499], 1499);
    }

    #[test]
    fn chain_draws_do_not_depend_on_chain_count() {
        let tab = CrossTab::new(40, 3, 7, 100);
        let priors = PriorSet::shared(
            ModelVariant::OneDataset,
            BetaParams::new(20.0, 4.0).unwrap(),
            BetaParams::uniform(),
        );
        let c = cfg(600, 100, 1, 2, 5);
        let single = run_single_chain(ModelVariant::OneDataset, &[tab], &priors, &c, 1).unwrap();
        let set = run_chain(ModelVariant::OneDataset, &[tab], &priors, &c).unwrap();
        let se_a = set.by_chain("Se_A").unwrap();
        let single_se: Vec<f64> = single.iter().map(|(_, s)| s.se_a.get()).collect();
        assert_eq!(se_a[1], single_se.as_slice());
    }

    #[test]
    fn run_chain_rejects_wrong_table_count() {
        let priors = PriorSet::uniform(ModelVariant::TwoDatasets);
        let tab = CrossTab::new(1, 2, 3, 4);
        let c = cfg(1000, 0, 1, 1, 0);
        assert!(matches!(
            run_chain(ModelVariant::TwoDatasets, &[tab], &priors, &c),
            Err(Error::Model(_))
        ));
    }
}
