//! Top-down progressive deepening over the taxonomy: each level is mined
//! with its own minimum support, and only descendants of items retained at
//! the level above are considered at the next one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::baselines;
use crate::error::{Error, Result};
use crate::itemsets::{maximal_members, Itemset};
use crate::pincer::{pincer_search, PincerTrace};
use crate::rules::{expand_frequent, FrequentSet};
use crate::taxonomy::{ItemCode, Taxonomy};
use crate::transactions::{LevelMatrix, MinSupport, PassCounter, TransactionDb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescentPolicy {
    /// Children of every frequent item at the level above.
    #[default]
    FrequentParents,
    /// Children of the items of the largest maximal itemsets above.
    MaximalItemsetItems,
}

impl fmt::Display for DescentPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DescentPolicy::FrequentParents => "frequent-parents",
            DescentPolicy::MaximalItemsetItems => "maximal-itemset-items",
        })
    }
}

impl FromStr for DescentPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "frequent-parents" => Ok(DescentPolicy::FrequentParents),
            "maximal-itemset-items" => Ok(DescentPolicy::MaximalItemsetItems),
            other => Err(format!("unknown descent policy {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Pincer,
    Apriori,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Pincer => "pincer",
            Algorithm::Apriori => "apriori",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelConfig {
    /// Index 0 holds the level-1 threshold.
    pub minsup_per_level: Vec<MinSupport>,
    pub descent_policy: DescentPolicy,
    pub total_levels: usize,
}

impl LevelConfig {
    pub fn new(minsup_per_level: Vec<MinSupport>, descent_policy: DescentPolicy) -> Result<Self> {
        let config = LevelConfig {
            total_levels: minsup_per_level.len(),
            minsup_per_level,
            descent_policy,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn absolute(minsups: &[u64], descent_policy: DescentPolicy) -> Result<Self> {
        LevelConfig::new(
            minsups.iter().map(|&n| MinSupport::Absolute(n)).collect(),
            descent_policy,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.minsup_per_level.len() != self.total_levels {
            return Err(Error::LevelCountMismatch {
                found: self.minsup_per_level.len(),
                expected: self.total_levels,
            });
        }
        self.minsup_per_level
            .iter()
            .try_for_each(MinSupport::validate)
    }

    pub fn with_policy(&self, descent_policy: DescentPolicy) -> LevelConfig {
        LevelConfig {
            descent_policy,
            ..self.clone()
        }
    }
}

/// One `(k, candidates, frequent)` row of a levelwise trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepStats {
    pub k: usize,
    pub candidates: usize,
    pub frequent: usize,
    pub passes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelResult {
    pub level: usize,
    pub minsup: u64,
    pub vocabulary: Vec<ItemCode>,
    pub maximal: Vec<FrequentSet>,
    pub frequent: Vec<FrequentSet>,
    pub steps: Vec<StepStats>,
    /// Passes spent discovering the frequent border.
    pub mining_passes: u64,
    /// Passes spent attaching supports to expanded subsets (Pincer only).
    pub expansion_passes: u64,
    pub border_trace: Option<PincerTrace>,
}

impl LevelResult {
    pub fn codes(&self, set: &Itemset) -> Vec<ItemCode> {
        set.items()
            .iter()
            .map(|&i| self.vocabulary[i].clone())
            .collect()
    }

    pub fn candidates(&self) -> usize {
        self.steps.iter().map(|s| s.candidates).sum()
    }

    /// Items appearing in some maximal itemset, i.e. the frequent items.
    pub fn frequent_codes(&self) -> BTreeSet<ItemCode> {
        self.maximal
            .iter()
            .flat_map(|m| self.codes(&m.itemset))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiLevelResult {
    pub algorithm: Algorithm,
    pub fingerprint: String,
    pub n_transactions: usize,
    pub levels: Vec<LevelResult>,
}

impl MultiLevelResult {
    pub fn mining_passes(&self) -> u64 {
        self.levels.iter().map(|l| l.mining_passes).sum()
    }

    pub fn expansion_passes(&self) -> u64 {
        self.levels.iter().map(|l| l.expansion_passes).sum()
    }

    pub fn candidates(&self) -> usize {
        self.levels.iter().map(LevelResult::candidates).sum()
    }

    pub fn level(&self, level: usize) -> Option<&LevelResult> {
        self.levels.iter().find(|l| l.level == level)
    }
}

/// Depth-`level` codes admitted after mining the level above.
pub fn descend_vocabulary(
    taxonomy: &Taxonomy,
    level: usize,
    prior: &LevelResult,
    policy: DescentPolicy,
) -> Result<BTreeSet<ItemCode>> {
    if level < 2 || level > taxonomy.total_levels() {
        return Err(Error::LevelOutOfRange {
            level,
            max: taxonomy.total_levels(),
        });
    }
    let parents: BTreeSet<ItemCode> = match policy {
        DescentPolicy::FrequentParents => prior.frequent_codes(),
        DescentPolicy::MaximalItemsetItems => {
            let largest = prior
                .maximal
                .iter()
                .map(|m| m.itemset.len())
                .max()
                .unwrap_or(0);
            prior
                .maximal
                .iter()
                .filter(|m| m.itemset.len() == largest)
                .flat_map(|m| prior.codes(&m.itemset))
                .collect()
        }
    };
    taxonomy
        .codes_at(level)
        .into_iter()
        .map(|c| Ok((c.generalize(level - 1)?, c)))
        .filter_map(|r: Result<(ItemCode, ItemCode)>| match r {
            Ok((parent, c)) => parents.contains(&parent).then_some(Ok(c)),
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Multilevel Pincer mining with the configured descent policy.
pub fn mine_multilevel(db: &TransactionDb, config: &LevelConfig) -> Result<MultiLevelResult> {
    mine_levels(db, config, Algorithm::Pincer)
}

pub(crate) fn mine_levels(
    db: &TransactionDb,
    config: &LevelConfig,
    algorithm: Algorithm,
) -> Result<MultiLevelResult> {
    config.validate()?;
    let taxonomy = db.taxonomy();
    if config.total_levels != taxonomy.total_levels() {
        return Err(Error::LevelCountMismatch {
            found: config.total_levels,
            expected: taxonomy.total_levels(),
        });
    }
    let thresholds = config
        .minsup_per_level
        .iter()
        .map(|m| m.resolve(db.len()))
        .collect::<Result<Vec<u64>>>()?;
    for (l, pair) in thresholds.windows(2).enumerate() {
        if pair[1] > pair[0] {
            log::warn!(
                "level {} threshold {} exceeds level {} threshold {}",
                l + 2,
                pair[1],
                l + 1,
                pair[0]
            );
        }
    }

    let mut result = MultiLevelResult {
        algorithm,
        fingerprint: db.fingerprint(),
        n_transactions: db.len(),
        levels: Vec::new(),
    };
    if db.is_empty() {
        return Ok(result);
    }

    for level in 1..=config.total_levels {
        let filter = match result.levels.last() {
            None => None,
            Some(prior) => Some(descend_vocabulary(
                taxonomy,
                level,
                prior,
                config.descent_policy,
            )?),
        };
        if filter.as_ref().is_some_and(BTreeSet::is_empty) {
            break;
        }
        let matrix = db.project_to_level(level, filter.as_ref())?;
        let minsup = thresholds[level - 1];
        let outcome = match algorithm {
            Algorithm::Pincer => mine_level_pincer(&matrix, minsup)?,
            Algorithm::Apriori => mine_level_apriori(&matrix, minsup)?,
        };
        log::info!(
            "level {level}: {} items, minsup {minsup}, {} maximal, {} frequent, {} passes",
            outcome.vocabulary.len(),
            outcome.maximal.len(),
            outcome.frequent.len(),
            outcome.mining_passes
        );
        let stop = outcome.maximal.is_empty();
        result.levels.push(outcome);
        if stop {
            break;
        }
    }
    Ok(result)
}

pub fn mine_level_pincer(matrix: &LevelMatrix, minsup: u64) -> Result<LevelResult> {
    let found = pincer_search(matrix, minsup)?;
    let n = matrix.n_transactions() as u64;
    let mut expansion = PassCounter::new();
    let frequent = expand_frequent(found.mfs.keys(), matrix, &mut expansion)?;
    let maximal = found
        .mfs
        .iter()
        .map(|(s, &support_count)| FrequentSet {
            itemset: s.clone(),
            support_count,
            n_transactions: n,
        })
        .collect();
    let steps = found
        .trace
        .records
        .iter()
        .map(|r| StepStats {
            k: r.k,
            candidates: r.candidates,
            frequent: r.frequent,
            passes: r.passes,
        })
        .collect();
    Ok(LevelResult {
        level: matrix.level(),
        minsup,
        vocabulary: matrix.vocabulary().to_vec(),
        maximal,
        frequent,
        steps,
        mining_passes: found.trace.passes(),
        expansion_passes: expansion.passes(),
        border_trace: Some(found.trace),
    })
}

pub fn mine_level_apriori(matrix: &LevelMatrix, minsup: u64) -> Result<LevelResult> {
    let mut counter = PassCounter::new();
    let run = baselines::apriori(matrix, minsup, &mut counter)?;
    let by_set = run.frequent.iter().map(|f| (f.itemset.clone(), f.clone()));
    let lookup: std::collections::BTreeMap<Itemset, FrequentSet> = by_set.collect();
    let maximal = maximal_members(lookup.keys().cloned())
        .into_iter()
        .map(|s| lookup[&s].clone())
        .collect();
    Ok(LevelResult {
        level: matrix.level(),
        minsup,
        vocabulary: matrix.vocabulary().to_vec(),
        maximal,
        frequent: run.frequent,
        steps: run.steps,
        mining_passes: counter.passes(),
        expansion_passes: 0,
        border_trace: None,
    })
}
