//! Level-by-level comparison of a miner against the brute-force oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::itemsets::Itemset;
use crate::multilevel::{descend_vocabulary, mine_level_pincer, LevelConfig, LevelResult};
use crate::oracle::{brute_force, OracleResult};
use crate::taxonomy::ItemCode;
use crate::transactions::{LevelMatrix, TransactionDb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MismatchKind {
    Maximal,
    Frequent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub level: usize,
    pub kind: MismatchKind,
    pub itemset: Vec<ItemCode>,
    /// Support reported by the miner, `None` if it omitted the set.
    pub engine: Option<u64>,
    /// Support from the oracle, `None` if the set is not in its answer.
    pub oracle: Option<u64>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<String> = self.itemset.iter().map(ToString::to_string).collect();
        let show = |s: Option<u64>| s.map_or("absent".to_string(), |n| n.to_string());
        write!(
            f,
            "level {} {} itemset {{{}}}: engine {}, oracle {}",
            self.level,
            match self.kind {
                MismatchKind::Maximal => "maximal",
                MismatchKind::Frequent => "frequent",
            },
            codes.join(", "),
            show(self.engine),
            show(self.oracle)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub minsup: u64,
    pub vocabulary: usize,
    pub maximal: usize,
    pub frequent: usize,
    pub mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub levels: Vec<LevelCheck>,
}

impl OracleCheck {
    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.levels.iter().find_map(|l| l.mismatch.as_ref())
    }

    pub fn passed(&self) -> bool {
        self.first_mismatch().is_none()
    }
}

/// Checks the Pincer engine at every level.
pub fn oracle_check(db: &TransactionDb, config: &LevelConfig) -> Result<OracleCheck> {
    oracle_check_with(db, config, mine_level_pincer)
}

/// Runs `miner` level by level with the configured descent and compares
/// each level's maximal and frequent itemsets with the oracle. Descent
/// follows the miner's own output, as the real pipeline would.
pub fn oracle_check_with<F>(
    db: &TransactionDb,
    config: &LevelConfig,
    mut miner: F,
) -> Result<OracleCheck>
where
    F: FnMut(&LevelMatrix, u64) -> Result<LevelResult>,
{
    config.validate()?;
    let thresholds = config
        .minsup_per_level
        .iter()
        .map(|m| m.resolve(db.len()))
        .collect::<Result<Vec<u64>>>()?;
    let mut levels = Vec::new();
    let mut prior: Option<LevelResult> = None;
    if db.is_empty() {
        return Ok(OracleCheck { levels });
    }
    for level in 1..=config.total_levels.min(db.taxonomy().total_levels()) {
        let filter = match &prior {
            None => None,
            Some(p) => Some(descend_vocabulary(
                db.taxonomy(),
                level,
                p,
                config.descent_policy,
            )?),
        };
        if filter.as_ref().is_some_and(BTreeSet::is_empty) {
            break;
        }
        let matrix = db.project_to_level(level, filter.as_ref())?;
        let minsup = thresholds[level - 1];
        let expected = brute_force(&matrix, minsup)?;
        let found = miner(&matrix, minsup)?;
        levels.push(LevelCheck {
            level,
            minsup,
            vocabulary: matrix.width(),
            maximal: expected.maximal.len(),
            frequent: expected.frequent.len(),
            mismatch: first_difference(&matrix, &found, &expected),
        });
        let stop = found.maximal.is_empty();
        prior = Some(found);
        if stop {
            break;
        }
    }
    Ok(OracleCheck { levels })
}

fn first_difference(
    matrix: &LevelMatrix,
    found: &LevelResult,
    expected: &OracleResult,
) -> Option<Mismatch> {
    let engine_max: BTreeMap<&Itemset, u64> = found
        .maximal
        .iter()
        .map(|f| (&f.itemset, f.support_count))
        .collect();
    let engine_freq: BTreeMap<&Itemset, u64> = found
        .frequent
        .iter()
        .map(|f| (&f.itemset, f.support_count))
        .collect();
    let oracle_max: BTreeMap<&Itemset, u64> = expected
        .maximal
        .iter()
        .map(|s| (s, expected.frequent[s]))
        .collect();
    let oracle_freq: BTreeMap<&Itemset, u64> =
        expected.frequent.iter().map(|(s, &n)| (s, n)).collect();

    let diff = |a: &BTreeMap<&Itemset, u64>, b: &BTreeMap<&Itemset, u64>, kind| {
        let keys: BTreeSet<&Itemset> = a.keys().chain(b.keys()).copied().collect();
        keys.into_iter().find_map(|s| {
            let (x, y) = (a.get(s).copied(), b.get(s).copied());
            (x != y).then(|| Mismatch {
                level: matrix.level(),
                kind,
                itemset: matrix.codes(s),
                engine: x,
                oracle: y,
            })
        })
    };
    diff(&engine_max, &oracle_max, MismatchKind::Maximal)
        .or_else(|| diff(&engine_freq, &oracle_freq, MismatchKind::Frequent))
}
