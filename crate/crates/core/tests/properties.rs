use proptest::prelude::*;

use prefrules_core::dataset::{kfold_split, Dataset};
use prefrules_core::lrar::{conf_lr, mine_lrar, sup_lr, Aggregation, LrarParams};
use prefrules_core::par::{mine_par, ParParams};
use prefrules_core::ranking::{
    average_ranking, censored_similarity, consolidate_pairwise, decompose_pairwise,
    default_label_names, gamma, kendall_tau, kendall_tau_b, Consolidation, Ranking,
    SimilarityKind,
};

/// Dense ranking with ties and unranked labels.
fn partial(k: usize) -> impl Strategy<Value = Ranking> {
    prop::collection::vec(0u32..=k as u32, k).prop_map(|raw| {
        let mut levels: Vec<u32> = raw.iter().copied().filter(|&x| x > 0).collect();
        levels.sort();
        levels.dedup();
        let dense = raw
            .iter()
            .map(|&x| if x == 0 { 0 } else { levels.binary_search(&x).unwrap() as u32 + 1 })
            .collect();
        Ranking::new(dense).unwrap()
    })
}

fn strict(k: usize) -> impl Strategy<Value = Ranking> {
    Just((0..k).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|o| Ranking::from_order(&o).unwrap())
}

fn total(k: usize) -> impl Strategy<Value = Ranking> {
    prop::collection::vec(1u32..=k as u32, k).prop_map(|raw| {
        let mut levels = raw.clone();
        levels.sort();
        levels.dedup();
        Ranking::new(raw.iter().map(|x| levels.binary_search(x).unwrap() as u32 + 1).collect()).unwrap()
    })
}

/// Small categorical dataset with strict targets over 3 labels.
fn dataset() -> impl Strategy<Value = Dataset> {
    (4usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec((0u8..3, 0u8..2), n),
            prop::collection::vec(strict(3), n),
        )
            .prop_map(|(cells, targets)| {
                let cells: Vec<Vec<String>> = cells
                    .iter()
                    .map(|&(a, b)| vec![format!("a{a}"), format!("b{b}")])
                    .collect();
                Dataset::from_categorical(&["x", "y"], &cells, targets, default_label_names(3))
                    .unwrap()
            })
    })
}

proptest! {
    #[test]
    fn tau_symmetric_and_bounded(p in strict(5), q in strict(5)) {
        let t = kendall_tau(&p, &q).unwrap();
        prop_assert_eq!(t, kendall_tau(&q, &p).unwrap());
        prop_assert!((-1.0..=1.0).contains(&t));
        prop_assert!((t - gamma(&p, &q).unwrap()).abs() < 1e-12);
        prop_assert!((t - kendall_tau_b(&p, &q).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tau_b_symmetric(p in total(5), q in total(5)) {
        match (kendall_tau_b(&p, &q), kendall_tau_b(&q, &p)) {
            (Ok(x), Ok(y)) => {
                prop_assert!((x - y).abs() < 1e-12);
                prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&x));
            }
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "asymmetric definedness {:?}", other),
        }
    }

    #[test]
    fn gamma_bounded(p in partial(5), q in partial(5)) {
        if let Ok(g) = gamma(&p, &q) {
            prop_assert!((-1.0..=1.0).contains(&g));
        }
    }

    #[test]
    fn censoring(p in strict(4), q in strict(4), theta in 0.0f64..=1.0) {
        for base in [SimilarityKind::KendallTau, SimilarityKind::NormalizedTau] {
            let s = censored_similarity(&p, &q, theta, base).unwrap();
            prop_assert!(s == 0.0 || (s >= theta && s <= 1.0));
        }
    }

    #[test]
    fn decompose_consolidate_round_trip(p in partial(6)) {
        prop_assume!(p.ranks().iter().filter(|&&x| x > 0).count() >= 2);
        let rels = decompose_pairwise(&p);
        prop_assert_eq!(rels.len(), 15);
        match consolidate_pairwise(&rels, 6).unwrap() {
            Consolidation::Chain(q) => prop_assert_eq!(q, p),
            other => prop_assert!(false, "not a chain: {:?}", other),
        }
    }

    #[test]
    fn text_round_trip(p in partial(6)) {
        prop_assume!(p.max_rank() > 0);
        let names = default_label_names(6);
        let text = p.to_text(&names);
        prop_assert_eq!(Ranking::parse_text(&text, &names).unwrap(), p.clone());
        prop_assert_eq!(Ranking::parse_vector(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn average_ranking_is_total(rs in prop::collection::vec(strict(4), 1..8)) {
        let avg = average_ranking(&rs, None, false).unwrap();
        prop_assert!(avg.is_total());
        prop_assert!(average_ranking(&rs, None, true).unwrap().is_strict_total());
    }

    #[test]
    fn csv_round_trip(ds in dataset()) {
        let text = ds.to_csv_string().unwrap();
        let back = Dataset::parse_csv(text.as_bytes(), ds.target_name()).unwrap();
        prop_assert_eq!(back.targets(), ds.targets());
        prop_assert_eq!(back.to_csv_string().unwrap(), text);
    }

    #[test]
    fn kfold_partitions(n in 2usize..60, folds in 2usize..10, seed in any::<u64>()) {
        prop_assume!(folds <= n);
        let splits = kfold_split(n, folds, seed).unwrap();
        let mut seen = vec![0; n];
        for (train, test) in &splits {
            prop_assert_eq!(train.len() + test.len(), n);
            for &i in test {
                seen[i] += 1;
                prop_assert!(train.binary_search(&i).is_err());
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn sup_lr_monotone(ds in dataset(), pi in strict(3), t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let base = SimilarityKind::KendallTau;
        let general = [(0, 0)];
        let specific = [(0, 0), (1, 0)];
        let s_lo = sup_lr(&ds, &general, &pi, lo, base).unwrap();
        prop_assert!(sup_lr(&ds, &general, &pi, hi, base).unwrap() <= s_lo + 1e-15);
        prop_assert!(sup_lr(&ds, &specific, &pi, lo, base).unwrap() <= s_lo + 1e-15);
        prop_assert!(sup_lr(&ds, &[], &pi, lo, base).unwrap() >= s_lo - 1e-15);
        if let Ok(c) = conf_lr(&ds, &general, &pi, lo, base) {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        }
    }

    #[test]
    fn lrar_rule_count_monotone(ds in dataset(), lo in 0.01f64..0.5, gap in 0.0f64..0.5, theta in 0.0f64..=1.0) {
        let at = |minsup: f64| {
            mine_lrar(&ds, &LrarParams { minsup, theta, ..Default::default() }).unwrap()
        };
        let (a, b) = (at(lo), at(lo + gap));
        prop_assert!(b.rules.len() <= a.rules.len());
        for r in &a.rules {
            prop_assert!(r.sup_lr >= lo - 1e-12);
            prop_assert!(r.conf_lr >= 0.5 - 1e-12 && r.conf_lr <= 1.0 + 1e-12);
        }
        let x: Vec<Option<u32>> = vec![Some(0), Some(1)];
        for agg in [Aggregation::Average, Aggregation::WeightedConfidence, Aggregation::BestRule] {
            prop_assert!(a.predict(&x, agg, true).is_strict_total());
        }
    }

    #[test]
    fn par_rule_count_monotone(ds in dataset(), lo in 0.05f64..0.5, gap in 0.0f64..0.5) {
        let at = |minsup: f64| {
            mine_par(&ds, &ParParams { minsup, max_consequent: Some(2), ..Default::default() }).unwrap()
        };
        let (a, b) = (at(lo), at(lo + gap));
        prop_assert!(b.len() <= a.len());
        prop_assert!(a.windows(2).all(|w| w[0].lift >= w[1].lift));
    }
}
