//! Brute-force posterior means by midpoint-rule integration over the unit
//! hypercube. Slow but independent of the sampler, so fits can be audited.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CrossTab, ModelVariant};
use crate::prior::PriorSet;
use crate::special::{beta_ln_pdf, ln_factorial};

pub const MIN_POINTS_PER_DIM: usize = 11;
pub const MAX_GRID_EVALUATIONS: u64 = 1_000_000_000;
pub const DEFAULT_POINTS_PER_DIM: usize = 25;
pub const DEFAULT_POINTS_PER_DIM_TWO_DATASETS: usize = 17;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPosterior {
    pub variant: ModelVariant,
    pub points_per_dim: usize,
    pub constrained: bool,
    pub names: Vec<&'static str>,
    pub means: Vec<f64>,
}

impl GridPosterior {
    pub fn mean(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| *n == name).map(|i| self.means[i])
    }
}

/// Weighted sums of one slab, relative to the running maximum `log_max`.
#[derive(Clone)]
struct Accumulator {
    log_max: f64,
    mass: f64,
    moments: Vec<f64>,
}

impl Accumulator {
    fn new(dims: usize) -> Self {
        Accumulator { log_max: f64::NEG_INFINITY, mass: 0.0, moments: vec![0.0; dims] }
    }

    #[inline]
    fn add(&mut self, log_w: f64, point: &[f64]) {
        if log_w == f64::NEG_INFINITY {
            return;
        }
        if log_w > self.log_max {
            let scale = (self.log_max - log_w).exp();
            self.mass *= scale;
            self.moments.iter_mut().for_each(|m| *m *= scale);
            self.log_max = log_w;
        }
        let w = (log_w - self.log_max).exp();
        self.mass += w;
        for (m, x) in self.moments.iter_mut().zip(point) {
            *m += w * x;
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        if other.log_max == f64::NEG_INFINITY {
            return;
        }
        let top = self.log_max.max(other.log_max);
        let (s, o) = ((self.log_max - top).exp(), (other.log_max - top).exp());
        self.mass = self.mass * s + other.mass * o;
        for (m, om) in self.moments.iter_mut().zip(&other.moments) {
            *m = *m * s + om * o;
        }
        self.log_max = top;
    }
}

/// Posterior mean of every parameter by midpoint-rule integration of the
/// joint posterior on a `points_per_dim`-per-axis grid at `(k + 0.5) / points_per_dim`.
///
/// With `constrained`, grid points where `Se + Sp <= 1` for either classifier
/// carry no mass. Slabs along the first axis run in parallel and are combined
/// in slab order, so results do not depend on the thread count.
pub fn grid_posterior_means(
    variant: ModelVariant,
    tabs: &[CrossTab],
    priors: &PriorSet,
    points_per_dim: usize,
    constrained: bool,
) -> Result<GridPosterior> {
    let n_prev = variant.n_prevalences();
    if tabs.len() != n_prev || priors.prevalences.len() != n_prev {
        return Err(Error::Model(format!(
            "{variant:?} needs {n_prev} table(s) and prevalence prior(s); got {} and {}",
            tabs.len(),
            priors.prevalences.len()
        )));
    }
    if points_per_dim < MIN_POINTS_PER_DIM {
        return Err(Error::Config(format!(
            "points_per_dim must be at least {MIN_POINTS_PER_DIM}, got {points_per_dim}"
        )));
    }
    let dims = variant.n_params();
    let evaluations = (points_per_dim as u64).checked_pow(dims as u32);
    if !evaluations.is_some_and(|e| e <= MAX_GRID_EVALUATIONS) {
        return Err(Error::GridSize { points: points_per_dim, dims });
    }

    let k = points_per_dim;
    let grid: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) / k as f64).collect();
    let prior_ln: Vec<Vec<f64>> = priors
        .to_vec()
        .iter()
        .map(|p| grid.iter().map(|&t| beta_ln_pdf(p.a(), p.b(), t)).collect())
        .collect();
    let counts: Vec<[f64; 4]> = tabs.iter().map(|t| t.counts().map(|y| y as f64)).collect();
    let ln_coef: f64 = tabs
        .iter()
        .map(|t| ln_factorial(t.n()) - t.counts().iter().map(|&y| ln_factorial(y)).sum::<f64>())
        .sum();

    let slabs: Vec<Accumulator> = (0..k)
        .into_par_iter()
        .map(|i0| {
            let mut acc = Accumulator::new(dims);
            let mut point = vec![0.0; dims];
            // Per-dataset log-likelihood at each prevalence grid value.
            let mut ll = vec![vec![0.0; k]; n_prev];
            let se_a = grid[i0];
            point[0] = se_a;
            for (i1, &sp_a) in grid.iter().enumerate() {
                if constrained && se_a + sp_a <= 1.0 {
                    continue;
                }
                point[1] = sp_a;
                for (i2, &se_b) in grid.iter().enumerate() {
                    point[2] = se_b;
                    for (i3, &sp_b) in grid.iter().enumerate() {
                        if constrained && se_b + sp_b <= 1.0 {
                            continue;
                        }
                        point[3] = sp_b;
                        let rates_ln = prior_ln[0][i0] + prior_ln[1][i1] + prior_ln[2][i2] + prior_ln[3][i3];

                        let pos = [
                            se_a * se_b,
                            se_a * (1.0 - se_b),
                            (1.0 - se_a) * se_b,
                            (1.0 - se_a) * (1.0 - se_b),
                        ];
                        let neg = [
                            (1.0 - sp_a) * (1.0 - sp_b),
                            (1.0 - sp_a) * sp_b,
                            sp_a * (1.0 - sp_b),
                            sp_a * sp_b,
                        ];
                        for (d, y) in counts.iter().enumerate() {
                            for (j, &pi) in grid.iter().enumerate() {
                                let mut l = prior_ln[4 + d][j];
                                for c in 0..4 {
                                    if y[c] > 0.0 {
                                        l += y[c] * (pi * pos[c] + (1.0 - pi) * neg[c]).ln();
                                    }
                                }
                                ll[d][j] = l;
                            }
                        }

                        let base = ln_coef + rates_ln;
                        if n_prev == 1 {
                            for (j, &pi) in grid.iter().enumerate() {
                                point[4] = pi;
                                acc.add(base + ll[0][j], &point);
                            }
                        } else {
                            for (j, &pi_a) in grid.iter().enumerate() {
                                point[4] = pi_a;
                                for (l, &pi_b) in grid.iter().enumerate() {
                                    point[5] = pi_b;
                                    acc.add(base + ll[0][j] + ll[1][l], &point);
                                }
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();

    let mut total = Accumulator::new(dims);
    for slab in &slabs {
        total.merge(slab);
    }
    if !(total.mass > 0.0) || !total.mass.is_finite() {
        return Err(Error::MassUnderflow);
    }
    Ok(GridPosterior {
        variant,
        points_per_dim,
        constrained,
        names: variant.param_names().to_vec(),
        means: total.moments.iter().map(|m| m / total.mass).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{joint_log_posterior, ParamState};
    use crate::prior::BetaParams;

    fn beta(a: f64, b: f64) -> BetaParams {
        BetaParams::new(a, b).unwrap()
    }

    #[test]
    fn flat_no_data_posterior_is_centered() {
        let priors = PriorSet::uniform(ModelVariant::OneDataset);
        let g = grid_posterior_means(ModelVariant::OneDataset, &[CrossTab::default()], &priors, 11, false).unwrap();
        for m in g.means {
            assert!((m - 0.5).abs() < 1.0 / 11.0);
        }
    }

    #[test]
    fn no_data_recovers_prior_means() {
        let mut priors = PriorSet::uniform(ModelVariant::OneDataset);
        priors.se_a = beta(3.0, 3.0);
        priors.sp_b = beta(2.0, 4.0);
        let g = grid_posterior_means(ModelVariant::OneDataset, &[CrossTab::default()], &priors, 15, false).unwrap();
        assert!((g.mean("Se_A").unwrap() - 0.5).abs() < 1.0 / 15.0);
        assert!((g.mean("Sp_B").unwrap() - 1.0 / 3.0).abs() < 1.0 / 15.0);
    }

    #[test]
    fn matches_brute_force_over_joint_log_posterior() {
        let k = 11;
        let tab = CrossTab::new(12, 3, 4, 21);
        let priors = PriorSet::new(beta(8.0, 2.0), beta(9.0, 3.0), beta(5.0, 2.0), beta(6.0, 2.0), vec![beta(2.0, 2.0)])
            .unwrap();
        let fast = grid_posterior_means(ModelVariant::OneDataset, &[tab], &priors, k, true).unwrap();

        let t: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) / k as f64).collect();
        let mut weights = Vec::new();
        for &a in &t {
            for &b in &t {
                for &c in &t {
                    for &d in &t {
                        for &p in &t {
                            if a + b <= 1.0 || c + d <= 1.0 {
                                continue;
                            }
                            let s = ParamState::new(a, b, c, d, &[p]).unwrap();
                            weights.push(([a, b, c, d, p], joint_log_posterior(&s, &[tab], &priors).unwrap()));
                        }
                    }
                }
            }
        }
        let top = weights.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
        let mass: f64 = weights.iter().map(|w| (w.1 - top).exp()).sum();
        for dim in 0..5 {
            let m: f64 = weights.iter().map(|w| w.0[dim] * (w.1 - top).exp()).sum::<f64>() / mass;
            assert!((m - fast.means[dim]).abs() < 1e-10, "dim {dim}: {m} vs {}", fast.means[dim]);
        }
    }

    #[test]
    fn identical_datasets_give_equal_prevalence_means() {
        let tab = CrossTab::new(20, 4, 5, 30);
        let priors = PriorSet::shared(ModelVariant::TwoDatasets, beta(6.0, 2.0), BetaParams::uniform());
        let g = grid_posterior_means(ModelVariant::TwoDatasets, &[tab, tab], &priors, 11, true).unwrap();
        assert!((g.means[4] - g.means[5]).abs() < 1e-12);
    }

    #[test]
    fn guards() {
        let priors = PriorSet::uniform(ModelVariant::OneDataset);
        let tab = [CrossTab::default()];
        assert!(matches!(
            grid_posterior_means(ModelVariant::OneDataset, &tab, &priors, 10, false),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            grid_posterior_means(ModelVariant::OneDataset, &tab, &priors, 64, false),
            Err(Error::GridSize { points: 64, dims: 5 })
        ));
        assert!(grid_posterior_means(ModelVariant::TwoDatasets, &tab, &priors, 11, false).is_err());
    }
}
