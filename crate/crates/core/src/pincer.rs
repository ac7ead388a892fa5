//! Single-level Pincer search.
//!
//! Each database pass counts the bottom-up candidates together with the
//! unresolved members of the maximal frequent candidate set. Frequent MFCS
//! members are confirmed maximal immediately; infrequent itemsets of either
//! kind shrink the MFCS. The search ends once no candidates remain and every
//! MFCS member has been resolved, at which point the MFS is exactly the set
//! of maximal frequent itemsets.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::itemsets::{
    apriori_prune_by, covered_by, join, mfcs_gen, pincer_prune, recover, BorderState, Itemset,
};
use crate::transactions::{LevelMatrix, PassCounter};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassRecord {
    pub k: usize,
    /// |C_k|, bottom-up candidates counted in this pass.
    pub candidates: usize,
    /// MFCS members counted alongside the candidates.
    pub mfcs_counted: usize,
    /// |L_k|
    pub frequent: usize,
    /// |S_k|
    pub infrequent: usize,
    /// Border sizes after the pass.
    pub mfcs: usize,
    pub mfs: usize,
    /// Cumulative database passes.
    pub passes: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PincerTrace {
    pub records: Vec<PassRecord>,
}

impl PincerTrace {
    pub fn passes(&self) -> u64 {
        self.records.last().map_or(0, |r| r.passes)
    }

    pub fn candidates_total(&self) -> usize {
        self.records.iter().map(|r| r.candidates).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PincerResult {
    /// Maximal frequent itemsets with their supports.
    pub mfs: BTreeMap<Itemset, u64>,
    /// Union of the MFS members: exactly the frequent single items.
    pub frequent_items: BTreeSet<usize>,
    pub trace: PincerTrace,
}

/// What an observer sees after each pass.
pub struct PassView<'a> {
    pub record: &'a PassRecord,
    pub border: &'a BorderState,
    /// Every support counted so far, frequent or not.
    pub counted: &'a BTreeMap<Itemset, u64>,
    pub minsup: u64,
}

pub fn pincer_search(matrix: &LevelMatrix, minsup: u64) -> Result<PincerResult> {
    pincer_search_observed(matrix, minsup, |_| {})
}

pub fn pincer_search_observed(
    matrix: &LevelMatrix,
    minsup: u64,
    mut observe: impl FnMut(&PassView<'_>),
) -> Result<PincerResult> {
    if minsup < 1 {
        return Err(Error::InvalidMinsup(minsup));
    }
    let width = matrix.width();
    let mut counter = PassCounter::new();
    let mut trace = PincerTrace::default();
    let mut state = BorderState::initial(width);
    let mut counted: BTreeMap<Itemset, u64> = BTreeMap::new();
    let mut candidates: BTreeSet<Itemset> = (0..width).map(Itemset::singleton).collect();
    let mut k = 1;

    while !candidates.is_empty() || !state.mfcs.is_empty() {
        let mfcs_batch: Vec<Itemset> = state
            .mfcs
            .iter()
            .filter(|m| !counted.contains_key(*m))
            .cloned()
            .collect();
        let counts = matrix.count_many(candidates.iter().chain(&mfcs_batch), &mut counter)?;
        counted.extend(counts);

        let mut infrequent = BTreeSet::new();
        for m in &mfcs_batch {
            if counted[m] >= minsup {
                state.confirm(m.clone());
            } else {
                infrequent.insert(m.clone());
            }
        }

        let (frequent_k, infrequent_k): (BTreeSet<Itemset>, BTreeSet<Itemset>) = candidates
            .iter()
            .cloned()
            .partition(|c| counted[c] >= minsup);
        let n_infrequent = infrequent_k.len();
        infrequent.extend(infrequent_k);

        state = mfcs_gen(&state, &infrequent);
        resolve_known(&mut state, &counted, minsup);

        let joined = join(&frequent_k)?;
        let recovered = recover(&joined, &frequent_k, &state.mfs);
        let closed = apriori_prune_by(&recovered, |s| {
            frequent_k.contains(s) || covered_by(s, &state.mfs)
        });
        let next = pincer_prune(&closed, &state);

        let record = PassRecord {
            k,
            candidates: candidates.len(),
            mfcs_counted: mfcs_batch.len(),
            frequent: frequent_k.len(),
            infrequent: n_infrequent,
            mfcs: state.mfcs.len(),
            mfs: state.mfs.len(),
            passes: counter.passes(),
        };
        log::debug!(
            "pass {}: k={} candidates={} mfcs_counted={} frequent={} mfcs={} mfs={}",
            record.passes,
            k,
            record.candidates,
            record.mfcs_counted,
            record.frequent,
            record.mfcs,
            record.mfs
        );
        observe(&PassView {
            record: &record,
            border: &state,
            counted: &counted,
            minsup,
        });
        trace.records.push(record);

        candidates = next;
        k += 1;
    }

    let mfs: BTreeMap<Itemset, u64> = state
        .mfs
        .into_iter()
        .map(|m| {
            let support = counted[&m];
            (m, support)
        })
        .collect();
    let frequent_items = mfs.keys().flat_map(|m| m.items().iter().copied()).collect();
    Ok(PincerResult {
        mfs,
        frequent_items,
        trace,
    })
}

/// Moves MFCS members whose support is already known to be frequent into the
/// MFS without another count.
fn resolve_known(state: &mut BorderState, counted: &BTreeMap<Itemset, u64>, minsup: u64) {
    let known: Vec<Itemset> = state
        .mfcs
        .iter()
        .filter(|m| counted.get(*m).is_some_and(|&s| s >= minsup))
        .cloned()
        .collect();
    for m in known {
        state.confirm(m);
    }
}
