//! Frequent-set expansion from the maximal border and rule generation.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::itemsets::Itemset;
use crate::transactions::{LevelMatrix, PassCounter};

/// Largest maximal itemset that will be expanded (2^24 subsets).
pub const MAX_EXPANSION: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FrequentSet {
    pub itemset: Itemset,
    pub support_count: u64,
    pub n_transactions: u64,
}

impl FrequentSet {
    pub fn support_fraction(&self) -> Ratio<u64> {
        Ratio::new(self.support_count, self.n_transactions.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    /// Support of antecedent ∪ consequent.
    pub support_count: u64,
    pub confidence: Ratio<u64>,
    pub level: usize,
}

/// All nonempty subsets of the maximal sets, with supports from one extra
/// counting pass. Sorted by size, then lexicographically.
pub fn expand_frequent<'a>(
    mfs: impl IntoIterator<Item = &'a Itemset>,
    matrix: &LevelMatrix,
    counter: &mut PassCounter,
) -> Result<Vec<FrequentSet>> {
    let mut subsets = BTreeSet::new();
    for m in mfs {
        if m.len() > MAX_EXPANSION {
            return Err(Error::ExpansionTooLarge(m.len()));
        }
        subsets.extend(m.nonempty_subsets());
    }
    if subsets.is_empty() {
        return Ok(Vec::new());
    }
    let counts = matrix.count_many(&subsets, counter)?;
    let n = matrix.n_transactions() as u64;
    let mut out: Vec<FrequentSet> = counts
        .into_iter()
        .map(|(itemset, support_count)| FrequentSet {
            itemset,
            support_count,
            n_transactions: n,
        })
        .collect();
    sort_frequent(&mut out);
    Ok(out)
}

pub fn sort_frequent(sets: &mut [FrequentSet]) {
    sets.sort_by(|a, b| {
        a.itemset
            .len()
            .cmp(&b.itemset.len())
            .then_with(|| a.itemset.cmp(&b.itemset))
    });
}

pub fn validate_confidence(min_conf: f64) -> Result<()> {
    if min_conf > 0.0 && min_conf <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfidence(min_conf))
    }
}

/// Emits every `X → Z∖X` with `support(Z) / support(X) ≥ min_conf`, sorted by
/// descending confidence, descending support, then antecedent.
pub fn generate_rules(frequent: &[FrequentSet], min_conf: f64, level: usize) -> Result<Vec<Rule>> {
    validate_confidence(min_conf)?;
    let support: BTreeMap<&Itemset, u64> = frequent
        .iter()
        .map(|f| (&f.itemset, f.support_count))
        .collect();
    let mut rules = Vec::new();
    for z in frequent.iter().filter(|f| f.itemset.len() >= 2) {
        let items = z.itemset.items();
        let full = (1u64 << items.len()) - 1;
        for mask in 1..full {
            let mut ante = Vec::new();
            let mut cons = Vec::new();
            for (i, &x) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ante.push(x);
                } else {
                    cons.push(x);
                }
            }
            let antecedent = Itemset::new(ante);
            let ante_support = *support
                .get(&antecedent)
                .ok_or_else(|| Error::MissingSubsetSupport(format!("{antecedent:?}")))?;
            let confidence = Ratio::new(z.support_count, ante_support);
            if ratio_to_f64(confidence) >= min_conf {
                rules.push(Rule {
                    antecedent,
                    consequent: Itemset::new(cons),
                    support_count: z.support_count,
                    confidence,
                    level,
                });
            }
        }
    }
    rules.sort_by(|a, b| {
        (
            Reverse(a.confidence),
            Reverse(a.support_count),
            &a.antecedent,
            &a.consequent,
        )
            .cmp(&(
                Reverse(b.confidence),
                Reverse(b.support_count),
                &b.antecedent,
                &b.consequent,
            ))
    });
    Ok(rules)
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
