use latacc::io::{read_chain_csv, write_chain_csv};
use latacc::{
    beta_tail, cell_probs, confusion_matrix, log_likelihood, metrics, BetaParams, ChainSet, CrossTab, ModelVariant,
    ParamState, PpvConvention, Rate,
};
use proptest::prelude::*;

fn rate() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn interior() -> impl Strategy<Value = f64> {
    0.001..0.999f64
}

fn state() -> impl Strategy<Value = ParamState> {
    (rate(), rate(), rate(), rate(), rate()).prop_map(|(a, b, c, d, p)| ParamState::new(a, b, c, d, &[p]).unwrap())
}

fn tab() -> impl Strategy<Value = CrossTab> {
    prop::array::uniform4(0u64..500).prop_map(CrossTab::from_counts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn swapping_classifiers_transposes_cells(s in state()) {
        let p = cell_probs(&s, 0).unwrap().p;
        let q = cell_probs(&s.swapped(), 0).unwrap().p;
        for (x, y) in [(p[0], q[0]), (p[1], q[2]), (p[2], q[1]), (p[3], q[3])] {
            prop_assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn likelihood_is_invariant_under_joint_swap(s in state(), t in tab()) {
        let a = log_likelihood(&t, &cell_probs(&s, 0).unwrap());
        let b = log_likelihood(&t.transposed(), &cell_probs(&s.swapped(), 0).unwrap());
        prop_assert!(a == b || (a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn likelihood_peaks_at_empirical_proportions(t in prop::array::uniform4(1u64..300), s in state()) {
        let t = CrossTab::from_counts(t);
        let n = t.n() as f64;
        let empirical = latacc::CellProbs { p: t.counts().map(|y| y as f64 / n) };
        let best = log_likelihood(&t, &empirical);
        let other = log_likelihood(&t, &cell_probs(&s, 0).unwrap());
        prop_assert!(other <= best + 1e-9);
        prop_assert!(best <= 1e-12);
    }

    #[test]
    fn beta_tail_is_monotone(a in 0.1..40.0f64, b in 0.1..40.0f64, x in rate(), y in rate()) {
        let p = BetaParams::new(a, b).unwrap();
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(beta_tail(p, lo) >= beta_tail(p, hi) - 1e-14);
        prop_assert_eq!(beta_tail(p, 0.0), 1.0);
        prop_assert_eq!(beta_tail(p, 1.0), 0.0);
    }

    #[test]
    fn metrics_are_probabilities(se in interior(), sp in interior(), pi in interior()) {
        for conv in [PpvConvention::Standard, PpvConvention::Paper] {
            let m = metrics(se, sp, pi, conv).unwrap();
            for v in [m.accuracy, m.recall, m.ppv, m.f1] {
                prop_assert!((0.0..=1.0).contains(&v), "{:?}", m);
            }
            prop_assert_eq!(m.recall, se);
            // F1 is a harmonic mean, so it sits between recall and PPV.
            let (lo, hi) = if m.ppv < m.recall { (m.ppv, m.recall) } else { (m.recall, m.ppv) };
            prop_assert!(m.f1 >= lo - 1e-12 && m.f1 <= hi + 1e-12);
            let acc = pi * se + (1.0 - pi) * sp;
            prop_assert!((m.accuracy - acc).abs() < 1e-15);
        }
    }

    #[test]
    fn confusion_rows_sum_to_one(se in rate(), sp in rate(), n in 1u64..100_000) {
        let m = confusion_matrix(Rate::new(se).unwrap(), Rate::new(sp).unwrap(), Some(n));
        for row in m.proportions {
            prop_assert!((row[0] + row[1] - 1.0).abs() < 1e-15);
        }
        for row in m.counts.unwrap() {
            prop_assert!(row[0] + row[1] >= n.saturating_sub(1) && row[0] + row[1] <= n + 1);
        }
    }

    #[test]
    fn transpose_is_an_involution(t in tab()) {
        prop_assert_eq!(t.transposed().transposed(), t);
        prop_assert_eq!(t.transposed().n(), t.n());
    }

    #[test]
    fn chain_csv_round_trips(
        draws in prop::collection::vec(prop::array::uniform6(0.0..=1.0f64), 1..40),
        two in any::<bool>(),
    ) {
        let variant = if two { ModelVariant::TwoDatasets } else { ModelVariant::OneDataset };
        let n = draws.len();
        let chain: Vec<usize> = (0..n).map(|i| i * 3 / n).collect();
        let iteration: Vec<u64> = (0..n as u64).collect();
        let mut set = ChainSet::new(variant, chain, iteration).unwrap();
        for (j, name) in variant.param_names().iter().enumerate() {
            set.push_column(*name, draws.iter().map(|d| d[j]).collect()).unwrap();
        }
        set.push_column("accuracy", draws.iter().map(|d| d[0] * 0.5).collect()).unwrap();
        let mut buf = Vec::new();
        write_chain_csv(&set, &mut buf).unwrap();
        let back = read_chain_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.variant, variant);
        prop_assert_eq!(back.names(), set.names());
        prop_assert_eq!(back.chain_labels(), set.chain_labels());
        prop_assert_eq!(back.iterations(), set.iterations());
        for ((_, x), (_, y)) in back.columns().zip(set.columns()) {
            prop_assert!(x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
}
