//! Seeded randomized checks of the engine against the brute-force oracle.

use std::collections::{BTreeMap, BTreeSet};

use pincer_ml::baselines::apriori;
use pincer_ml::gen::{random_matrix, rng};
use pincer_ml::itemsets::{covered_by, is_antichain, Itemset};
use pincer_ml::oracle::brute_force;
use pincer_ml::pincer::{pincer_search, pincer_search_observed};
use pincer_ml::rules::expand_frequent;
use pincer_ml::PassCounter;
use rand::Rng;

const SEEDS: u64 = 200;

#[test]
fn pincer_matches_oracle_on_random_matrices() {
    for seed in 0..SEEDS {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, 12, 40);
        let minsup = r.gen_range(1..=8);
        let oracle = brute_force(&m, minsup).unwrap();
        let found = pincer_search(&m, minsup).unwrap();

        let maximal: BTreeSet<Itemset> = found.mfs.keys().cloned().collect();
        assert_eq!(maximal, oracle.maximal, "seed {seed}: maximal sets differ");
        for (s, &n) in &found.mfs {
            assert_eq!(oracle.frequent[s], n, "seed {seed}: support of {s:?}");
        }

        let singles: BTreeSet<usize> = oracle
            .frequent
            .keys()
            .filter(|s| s.len() == 1)
            .map(|s| s.items()[0])
            .collect();
        assert_eq!(found.frequent_items, singles, "seed {seed}");

        let mut counter = PassCounter::new();
        let expanded: BTreeMap<Itemset, u64> = expand_frequent(found.mfs.keys(), &m, &mut counter)
            .unwrap()
            .into_iter()
            .map(|f| (f.itemset, f.support_count))
            .collect();
        assert_eq!(expanded, oracle.frequent, "seed {seed}: expansion");

        let mut counter = PassCounter::new();
        let base: BTreeMap<Itemset, u64> = apriori(&m, minsup, &mut counter)
            .unwrap()
            .frequent
            .into_iter()
            .map(|f| (f.itemset, f.support_count))
            .collect();
        assert_eq!(base, oracle.frequent, "seed {seed}: apriori");

        let largest = oracle.maximal.iter().map(Itemset::len).max().unwrap_or(0) as u64;
        let passes = found.trace.passes();
        assert!(
            passes <= largest + 1,
            "seed {seed}: {passes} passes, largest {largest}"
        );
        assert!(
            passes <= counter.passes(),
            "seed {seed}: {passes} > apriori {}",
            counter.passes()
        );

        let ks: Vec<usize> = found.trace.records.iter().map(|p| p.k).collect();
        assert!(ks.windows(2).all(|w| w[0] < w[1]), "seed {seed}");
    }
}

#[test]
fn border_invariants_hold_after_every_pass() {
    for seed in 0..SEEDS {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, 12, 40);
        let minsup = r.gen_range(1..=8);
        let mut violations = Vec::new();
        pincer_search_observed(&m, minsup, |view| {
            let b = view.border;
            if !is_antichain(&b.mfcs) || !is_antichain(&b.mfs) {
                violations.push(format!("pass {}: border not an antichain", view.record.k));
            }
            for mfcs in &b.mfcs {
                if covered_by(mfcs, &b.mfs) {
                    violations.push(format!("pass {}: {mfcs:?} under MFS", view.record.k));
                }
                for (s, &n) in view.counted {
                    if n < view.minsup && s.is_subset_of(mfcs) {
                        violations.push(format!(
                            "pass {}: {mfcs:?} contains infrequent {s:?}",
                            view.record.k
                        ));
                    }
                }
            }
        })
        .unwrap();
        assert!(violations.is_empty(), "seed {seed}: {violations:?}");
    }
}
