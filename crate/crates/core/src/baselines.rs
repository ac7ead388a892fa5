//! Reference miners for pass-count comparison: levelwise Apriori and a
//! per-level Apriori over the taxonomy (ML_T2L1 style).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::itemsets::{apriori_prune, join, Itemset};
use crate::multilevel::{
    mine_levels, Algorithm, DescentPolicy, LevelConfig, MultiLevelResult, StepStats,
};
use crate::rules::{sort_frequent, FrequentSet};
use crate::transactions::{LevelMatrix, PassCounter, TransactionDb};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AprioriRun {
    pub frequent: Vec<FrequentSet>,
    pub steps: Vec<StepStats>,
}

/// Classic breadth-first Apriori: one database pass per itemset size.
pub fn apriori(matrix: &LevelMatrix, minsup: u64, counter: &mut PassCounter) -> Result<AprioriRun> {
    if minsup < 1 {
        return Err(Error::InvalidMinsup(minsup));
    }
    let n = matrix.n_transactions() as u64;
    let mut frequent = Vec::new();
    let mut steps = Vec::new();
    let mut candidates: BTreeSet<Itemset> = (0..matrix.width()).map(Itemset::singleton).collect();
    let mut k = 1;
    while !candidates.is_empty() {
        let counts = matrix.count_many(&candidates, counter)?;
        let level_k: BTreeSet<Itemset> = counts
            .iter()
            .filter(|(_, &s)| s >= minsup)
            .map(|(c, _)| c.clone())
            .collect();
        steps.push(StepStats {
            k,
            candidates: candidates.len(),
            frequent: level_k.len(),
            passes: counter.passes(),
        });
        frequent.extend(level_k.iter().map(|s| FrequentSet {
            itemset: s.clone(),
            support_count: counts[s],
            n_transactions: n,
        }));
        candidates = apriori_prune(&join(&level_k)?, &level_k)?;
        k += 1;
    }
    sort_frequent(&mut frequent);
    Ok(AprioriRun { frequent, steps })
}

/// Per-level Apriori with frequent-parent descent, whatever policy the
/// config names.
pub fn ml_t2l1(db: &TransactionDb, config: &LevelConfig) -> Result<MultiLevelResult> {
    mine_levels(
        db,
        &config.with_policy(DescentPolicy::FrequentParents),
        Algorithm::Apriori,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepComparison {
    pub k: usize,
    pub candidates: [usize; 2],
    pub frequent: [usize; 2],
    pub candidate_delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelComparison {
    pub level: usize,
    pub steps: Vec<StepComparison>,
    pub passes: [u64; 2],
    pub candidates: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    /// Column labels for every `[a, b]` pair below.
    pub algorithms: [Algorithm; 2],
    pub levels: Vec<LevelComparison>,
    /// Mining passes per algorithm over all levels.
    pub total_passes: [u64; 2],
    /// Passes spent on subset expansion after the border is known.
    pub expansion_passes: [u64; 2],
    pub total_candidates: [usize; 2],
    pub pass_delta: i64,
}

/// Side-by-side per-level, per-k candidate and frequent counts.
pub fn compare(a: &MultiLevelResult, b: &MultiLevelResult) -> Result<ComparisonReport> {
    if a.fingerprint != b.fingerprint {
        return Err(Error::InputMismatch(
            a.fingerprint.clone(),
            b.fingerprint.clone(),
        ));
    }
    let max_level = a
        .levels
        .iter()
        .chain(&b.levels)
        .map(|l| l.level)
        .max()
        .unwrap_or(0);
    let mut levels = Vec::new();
    for level in 1..=max_level {
        let la = a.level(level);
        let lb = b.level(level);
        let steps_of = |l: Option<&crate::multilevel::LevelResult>| {
            l.map(|l| l.steps.clone()).unwrap_or_default()
        };
        let (sa, sb) = (steps_of(la), steps_of(lb));
        let max_k = sa.iter().chain(&sb).map(|s| s.k).max().unwrap_or(0);
        let steps = (1..=max_k)
            .map(|k| {
                let find = |s: &[StepStats]| s.iter().find(|x| x.k == k).copied();
                let (xa, xb) = (find(&sa), find(&sb));
                let candidates = [
                    xa.map_or(0, |x| x.candidates),
                    xb.map_or(0, |x| x.candidates),
                ];
                StepComparison {
                    k,
                    candidates,
                    frequent: [xa.map_or(0, |x| x.frequent), xb.map_or(0, |x| x.frequent)],
                    candidate_delta: candidates[0] as i64 - candidates[1] as i64,
                }
            })
            .collect();
        levels.push(LevelComparison {
            level,
            steps,
            passes: [
                la.map_or(0, |l| l.mining_passes),
                lb.map_or(0, |l| l.mining_passes),
            ],
            candidates: [
                la.map_or(0, |l| l.candidates()),
                lb.map_or(0, |l| l.candidates()),
            ],
        });
    }
    let total_passes = [a.mining_passes(), b.mining_passes()];
    Ok(ComparisonReport {
        algorithms: [a.algorithm, b.algorithm],
        levels,
        total_passes,
        expansion_passes: [a.expansion_passes(), b.expansion_passes()],
        total_candidates: [a.candidates(), b.candidates()],
        pass_delta: total_passes[0] as i64 - total_passes[1] as i64,
    })
}
