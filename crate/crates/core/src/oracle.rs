//! Brute-force reference for frequent and maximal frequent itemsets.
//!
//! Deliberately independent of the mining engine: supports are computed by
//! scanning matrix cells directly and maximality by pairwise superset tests.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::itemsets::Itemset;
use crate::transactions::LevelMatrix;

pub const MAX_ORACLE_WIDTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub frequent: BTreeMap<Itemset, u64>,
    pub maximal: BTreeSet<Itemset>,
}

pub fn brute_force(matrix: &LevelMatrix, minsup: u64) -> Result<OracleResult> {
    if minsup < 1 {
        return Err(Error::InvalidMinsup(minsup));
    }
    let width = matrix.width();
    if width > MAX_ORACLE_WIDTH {
        return Err(Error::VocabularyTooLarge(width));
    }
    let n = matrix.n_transactions();
    let columns: Vec<Vec<bool>> = (0..width)
        .map(|i| (0..n).map(|t| matrix.get(t, i)).collect())
        .collect();

    let mut frequent = BTreeMap::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), (0..n).collect())];
    while let Some((prefix, tids)) = stack.pop() {
        let start = prefix.last().map_or(0, |&i| i + 1);
        for (item, column) in columns.iter().enumerate().skip(start) {
            let hits: Vec<usize> = tids.iter().copied().filter(|&t| column[t]).collect();
            if hits.len() as u64 >= minsup {
                let mut set = prefix.clone();
                set.push(item);
                frequent.insert(Itemset::new(set.iter().copied()), hits.len() as u64);
                stack.push((set, hits));
            }
        }
    }

    let maximal = frequent
        .keys()
        .filter(|x| {
            !frequent
                .keys()
                .any(|y| y.len() > x.len() && x.items().iter().all(|i| y.items().contains(i)))
        })
        .cloned()
        .collect();
    Ok(OracleResult { frequent, maximal })
}
