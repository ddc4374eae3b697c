//! Beta priors and their elicitation from a statement of the form
//! "the most likely value is `mode`, and there is probability `tail_mass`
//! that the parameter exceeds `threshold`".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelVariant;
use crate::special::regularized_incomplete_beta_upper;

/// Largest concentration `a + b` the elicitation solver will consider.
pub const MAX_CONCENTRATION: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaParams {
    a: f64,
    b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0 {
            Ok(BetaParams { a, b })
        } else {
            Err(Error::InvalidBeta { a, b })
        }
    }

    /// The noninformative Beta(1, 1).
    pub const fn uniform() -> Self {
        BetaParams { a: 1.0, b: 1.0 }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    /// Interior mode, defined only when both shapes exceed 1.
    pub fn mode(&self) -> Option<f64> {
        (self.a > 1.0 && self.b > 1.0).then(|| (self.a - 1.0) / (self.a + self.b - 2.0))
    }
}

impl<'de> Deserialize<'de> for BetaParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            a: f64,
            b: f64,
        }
        let raw = Raw::deserialize(d)?;
        BetaParams::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

/// One Beta prior per model parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorSet {
    pub se_a: BetaParams,
    pub sp_a: BetaParams,
    pub se_b: BetaParams,
    pub sp_b: BetaParams,
    pub prevalences: Vec<BetaParams>,
}

impl PriorSet {
    pub fn new(
        se_a: BetaParams,
        sp_a: BetaParams,
        se_b: BetaParams,
        sp_b: BetaParams,
        prevalences: Vec<BetaParams>,
    ) -> Result<Self> {
        ModelVariant::from_n_prevalences(prevalences.len())?;
        Ok(PriorSet { se_a, sp_a, se_b, sp_b, prevalences })
    }

    /// Beta(1, 1) on every parameter.
    pub fn uniform(variant: ModelVariant) -> Self {
        let u = BetaParams::uniform();
        PriorSet {
            se_a: u,
            sp_a: u,
            se_b: u,
            sp_b: u,
            prevalences: vec![u; variant.n_prevalences()],
        }
    }

    /// The same prior on all four rates and on every prevalence.
    pub fn shared(variant: ModelVariant, rates: BetaParams, prevalence: BetaParams) -> Self {
        PriorSet {
            se_a: rates,
            sp_a: rates,
            se_b: rates,
            sp_b: rates,
            prevalences: vec![prevalence; variant.n_prevalences()],
        }
    }

    pub fn variant(&self) -> ModelVariant {
        if self.prevalences.len() == 2 {
            ModelVariant::TwoDatasets
        } else {
            ModelVariant::OneDataset
        }
    }

    /// Priors in storage order (`Se_A, Sp_A, Se_B, Sp_B, pi[, pi_beta]`).
    pub fn to_vec(&self) -> Vec<BetaParams> {
        let mut v = vec![self.se_a, self.sp_a, self.se_b, self.sp_b];
        v.extend_from_slice(&self.prevalences);
        v
    }
}

/// `P(X > x)` for `X ~ Beta(a, b)`.
pub fn beta_tail(params: BetaParams, x: f64) -> f64 {
    regularized_incomplete_beta_upper(params.a, params.b, x)
}

fn beta_with_mode(mode: f64, concentration: f64) -> BetaParams {
    let k = concentration - 2.0;
    BetaParams {
        a: 1.0 + mode * k,
        b: 1.0 + (1.0 - mode) * k,
    }
}

/// Solve for the unimodal Beta(a, b) with the given mode that puts
/// `tail_mass` of its probability above `threshold`.
///
/// With the mode fixed, the tail mass is a function of the concentration
/// `s = a + b` alone: `1 - threshold` at `s = 2` (the uniform), tending to 1
/// or 0 as `s` grows depending on which side of the mode the threshold lies.
/// Close to a skewed mode it is not monotone, so a statement can be met by
/// two concentrations; the more concentrated one is returned. The root is
/// located on a geometric grid of `s - 2` and then bisected.
pub fn elicit_beta(mode: f64, threshold: f64, tail_mass: f64) -> Result<BetaParams> {
    const GRID_STEPS: usize = 512;
    const MIN_EXCESS: f64 = 1e-6;

    let open_unit = |v: f64| v > 0.0 && v < 1.0;
    if !open_unit(mode) || !open_unit(threshold) || !open_unit(tail_mass) {
        return Err(Error::Elicitation(format!(
            "mode ({mode}), threshold ({threshold}) and tail mass ({tail_mass}) must all lie strictly inside (0, 1)"
        )));
    }
    if mode == threshold {
        return Err(Error::Elicitation(
            "threshold equals the mode; the tail statement does not determine the spread".into(),
        ));
    }

    let h = |s: f64| beta_tail(beta_with_mode(mode, s), threshold) - tail_mass;
    let excess = |k: usize| {
        let t = k as f64 / GRID_STEPS as f64;
        MIN_EXCESS * ((MAX_CONCENTRATION - 2.0) / MIN_EXCESS).powf(t)
    };

    // Walk down from the largest concentration to the first sign change.
    let mut hi = 2.0 + excess(GRID_STEPS);
    let mut h_hi = h(hi);
    if h_hi == 0.0 {
        return Ok(beta_with_mode(mode, hi));
    }
    let mut bracket = None;
    for k in (0..GRID_STEPS).rev() {
        let lo = 2.0 + excess(k);
        let h_lo = h(lo);
        if h_lo == 0.0 || (h_lo < 0.0) != (h_hi < 0.0) {
            bracket = Some((lo, hi, h_lo));
            break;
        }
        hi = lo;
        h_hi = h_lo;
    }
    let Some((mut lo, mut hi, h_lo)) = bracket else {
        let side = if threshold < mode { "below" } else { "above" };
        return Err(Error::Elicitation(format!(
            "threshold {threshold} is {side} the mode {mode}: no Beta with that mode and concentration \
             in (2, {MAX_CONCENTRATION:e}] puts {tail_mass} of its mass above the threshold"
        )));
    };
    if h_lo == 0.0 {
        return Ok(beta_with_mode(mode, lo));
    }

    let lo_negative = h_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (h(mid) < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(beta_with_mode(mode, 0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(a: f64, b: f64) -> BetaParams {
        BetaParams::new(a, b).unwrap()
    }

    /// Composite Simpson integration of the Beta density over `[x, 1]`.
    fn tail_by_quadrature(a: f64, b: f64, x: f64) -> f64 {
        let n = 20_000;
        let h = (1.0 - x) / n as f64;
        let ln_norm = statrs::function::beta::ln_beta(a, b);
        let f = |t: f64| {
            if t <= 0.0 || t >= 1.0 {
                0.0
            } else {
                ((a - 1.0) * t.ln() + (b - 1.0) * (1.0 - t).ln() - ln_norm).exp()
            }
        };
        let mut s = f(x) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(x + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn beta_params_validation() {
        assert!(BetaParams::new(0.0, 1.0).is_err());
        assert!(BetaParams::new(1.0, -2.0).is_err());
        assert!(BetaParams::new(f64::INFINITY, 1.0).is_err());
        assert_eq!(beta(20.0, 4.0).mode(), Some(19.0 / 22.0));
        assert_eq!(beta(1.0, 4.0).mode(), None);
        assert!(serde_json::from_str::<BetaParams>(r#"{"a": -1, "b": 2}"#).is_err());
        assert_eq!(serde_json::from_str::<BetaParams>(r#"{"a": 3, "b": 2}"#).unwrap(), beta(3.0, 2.0));
    }

    #[test]
    fn beta_tail_closed_forms() {
        assert!((beta_tail(beta(2.0, 1.0), 0.5) - 0.75).abs() < 1e-12);
        assert!((beta_tail(beta(1.0, 1.0), 0.8) - 0.2).abs() < 1e-12);
        assert_eq!(beta_tail(beta(3.0, 7.0), 0.0), 1.0);
        assert_eq!(beta_tail(beta(3.0, 7.0), 1.0), 0.0);
    }

    #[test]
    fn beta_tail_matches_quadrature_for_worked_prior() {
        let oracle = tail_by_quadrature(20.0, 4.0, 0.8);
        let got = beta_tail(beta(20.0, 4.0), 0.8);
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
        // Independently: scipy.stats.beta.sf(0.8, 20, 4) = 0.70346858901512.
        assert!((got - 0.703_468_589_015).abs() < 1e-10);
    }

    #[test]
    fn beta_tail_matches_quadrature_elsewhere() {
        for &(a, b, x) in &[(3.0, 3.0, 0.2), (5.5, 2.25, 0.61), (40.0, 9.0, 0.85), (1.5, 30.0, 0.02)] {
            let oracle = tail_by_quadrature(a, b, x);
            assert!((beta_tail(beta(a, b), x) - oracle).abs() < 1e-10, "a={a} b={b} x={x}");
        }
    }

    #[test]
    fn elicit_symmetric_case() {
        let target = beta_tail(beta(3.0, 3.0), 0.2);
        let got = elicit_beta(0.5, 0.2, target).unwrap();
        assert!((got.a() - 3.0).abs() < 1e-4 && (got.b() - 3.0).abs() < 1e-4, "{got:?}");
    }

    #[test]
    fn elicit_worked_example_prior() {
        let target = beta_tail(beta(20.0, 4.0), 0.8);
        let got = elicit_beta(19.0 / 22.0, 0.8, target).unwrap();
        assert!((got.a() - 20.0).abs() < 1e-4 && (got.b() - 4.0).abs() < 1e-4, "{got:?}");
        assert!((beta_tail(got, 0.8) - target).abs() < 1e-6);
        assert!((got.mode().unwrap() - 19.0 / 22.0).abs() < 1e-12);
    }

    #[test]
    fn elicit_threshold_above_mode() {
        let target = beta_tail(beta(4.0, 12.0), 0.4);
        let got = elicit_beta(3.0 / 14.0, 0.4, target).unwrap();
        assert!((got.a() - 4.0).abs() < 1e-4 && (got.b() - 12.0).abs() < 1e-4, "{got:?}");
    }

    #[test]
    fn elicit_near_skewed_mode_picks_concentrated_root() {
        // The tail at 0.938 peaks near s = 20, so 0.179 is hit twice; the
        // generating Beta is the more concentrated solution.
        let truth = beta(37.276122111151544, 4.3878889692210175);
        let mode = truth.mode().unwrap();
        let target = beta_tail(truth, 0.938082794659587);
        assert!(target > 1.0 - 0.938082794659587);
        let got = elicit_beta(mode, 0.938082794659587, target).unwrap();
        assert!((got.a() / truth.a() - 1.0).abs() < 1e-6, "{got:?}");
        assert!((got.b() / truth.b() - 1.0).abs() < 1e-6, "{got:?}");
    }

    #[test]
    fn elicit_refuses_unsolvable_statement() {
        let err = elicit_beta(0.9, 0.95, 0.99).unwrap_err();
        assert!(matches!(err, Error::Elicitation(_)));
        assert!(err.to_string().contains("above the mode"), "{err}");

        let err = elicit_beta(0.9, 0.5, 0.3).unwrap_err();
        assert!(err.to_string().contains("below the mode"), "{err}");

        // Just above a skewed mode the tail first grows with concentration,
        // so more than the uniform's mass is reachable but not arbitrarily more.
        assert!(elicit_beta(0.9, 0.91, 0.5).is_err());

        assert!(elicit_beta(0.5, 0.5, 0.3).is_err());
        assert!(elicit_beta(0.0, 0.5, 0.3).is_err());
        assert!(elicit_beta(0.5, 0.3, 1.0).is_err());
    }

    #[test]
    fn elicit_tail_too_extreme_for_concentration_cap() {
        // Reaching 1 - 1e-300 would need infinite concentration.
        let err = elicit_beta(0.9, 0.899_999_999, 1.0 - 1e-15).unwrap_err();
        assert!(matches!(err, Error::Elicitation(_)), "{err}");
    }
}
