//! Itemset algebra and the border structures driving Pincer search.
//!
//! The maximal frequent candidate set (MFCS) is an upper border: every
//! frequent itemset lies under one of its members. The maximal frequent set
//! (MFS) is the lower border confirmed so far. Bottom-up candidate counting
//! feeds infrequent itemsets into [`mfcs_gen`], which shrinks the upper border
//! until it meets the lower one.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Strictly increasing list of vocabulary indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Itemset(Vec<usize>);

impl Itemset {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Itemset {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Itemset(v)
    }

    pub fn empty() -> Itemset {
        Itemset(Vec::new())
    }

    pub fn singleton(item: usize) -> Itemset {
        Itemset(vec![item])
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for x in &self.0 {
            for y in rest.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_proper_subset_of(&self, other: &Itemset) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    pub fn with(&self, item: usize) -> Itemset {
        match self.0.binary_search(&item) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, item);
                Itemset(v)
            }
        }
    }

    pub fn without(&self, item: usize) -> Itemset {
        Itemset(self.0.iter().copied().filter(|&x| x != item).collect())
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        Itemset::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &Itemset) -> Itemset {
        Itemset(
            self.0
                .iter()
                .copied()
                .filter(|&x| !other.contains(x))
                .collect(),
        )
    }

    /// The subsets obtained by dropping exactly one item.
    pub fn facets(&self) -> impl Iterator<Item = Itemset> + '_ {
        self.0.iter().map(move |&x| self.without(x))
    }

    /// Every nonempty subset, including `self`.
    pub fn nonempty_subsets(&self) -> Vec<Itemset> {
        let n = self.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Itemset(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

impl From<Vec<usize>> for Itemset {
    fn from(v: Vec<usize>) -> Self {
        Itemset::new(v)
    }
}

impl<const N: usize> From<[usize; N]> for Itemset {
    fn from(v: [usize; N]) -> Self {
        Itemset::new(v)
    }
}

/// True when `set` lies under some member of `family`.
pub fn covered_by<'a>(set: &Itemset, family: impl IntoIterator<Item = &'a Itemset>) -> bool {
    family.into_iter().any(|m| set.is_subset_of(m))
}

/// Keeps only the maximal members of `family`.
pub fn maximal_members(family: impl IntoIterator<Item = Itemset>) -> BTreeSet<Itemset> {
    let mut sets: Vec<Itemset> = family.into_iter().collect();
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Itemset> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| s.is_subset_of(k)) {
            kept.push(s);
        }
    }
    kept.into_iter().collect()
}

pub fn is_antichain<'a>(family: impl IntoIterator<Item = &'a Itemset>) -> bool {
    let v: Vec<&Itemset> = family.into_iter().collect();
    v.iter().enumerate().all(|(i, a)| {
        v.iter()
            .enumerate()
            .all(|(j, b)| i == j || !a.is_subset_of(b))
    })
}

fn uniform_size<'a>(sets: impl IntoIterator<Item = &'a Itemset>) -> Result<Option<usize>> {
    let mut size = None;
    for s in sets {
        match size {
            None => size = Some(s.len()),
            Some(k) if k != s.len() => return Err(Error::MixedSizes),
            _ => {}
        }
    }
    Ok(size)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BorderState {
    pub mfcs: BTreeSet<Itemset>,
    pub mfs: BTreeSet<Itemset>,
}

impl BorderState {
    /// Initial border: the whole vocabulary is the only candidate maximum.
    pub fn initial(width: usize) -> BorderState {
        let mut mfcs = BTreeSet::new();
        if width > 0 {
            mfcs.insert(Itemset::new(0..width));
        }
        BorderState {
            mfcs,
            mfs: BTreeSet::new(),
        }
    }

    /// Adds a confirmed frequent set to the MFS, keeping both borders
    /// consistent: absorbed MFS members and covered MFCS members are dropped.
    pub fn confirm(&mut self, set: Itemset) {
        self.mfcs.remove(&set);
        if covered_by(&set, &self.mfs) {
            return;
        }
        self.mfs.retain(|m| !m.is_proper_subset_of(&set));
        self.mfcs.retain(|m| !m.is_subset_of(&set));
        self.mfs.insert(set);
    }

    pub fn is_consistent(&self) -> bool {
        is_antichain(&self.mfcs)
            && is_antichain(&self.mfs)
            && self.mfcs.iter().all(|m| !covered_by(m, &self.mfs))
    }
}

/// Prefix join: pairs sharing their first k−1 items produce a (k+1)-itemset.
pub fn join(frequent_k: &BTreeSet<Itemset>) -> Result<BTreeSet<Itemset>> {
    let Some(k) = uniform_size(frequent_k)? else {
        return Ok(BTreeSet::new());
    };
    let sets: Vec<&Itemset> = frequent_k.iter().collect();
    let mut out = BTreeSet::new();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            // sorted order keeps equal prefixes contiguous
            if a.items()[..k - 1] != b.items()[..k - 1] {
                break;
            }
            out.insert(a.with(b.items()[k - 1]));
        }
    }
    Ok(out)
}

/// Downward-closure prune: keep candidates whose k-subsets are all in
/// `frequent_k`.
pub fn apriori_prune(
    candidates: &BTreeSet<Itemset>,
    frequent_k: &BTreeSet<Itemset>,
) -> Result<BTreeSet<Itemset>> {
    let cand_size = uniform_size(candidates)?;
    let freq_size = uniform_size(frequent_k)?;
    if let (Some(c), Some(f)) = (cand_size, freq_size) {
        if c != f + 1 {
            return Err(Error::MixedSizes);
        }
    }
    Ok(apriori_prune_by(candidates, |s| frequent_k.contains(s)))
}

/// Same as [`apriori_prune`] with a caller-supplied frequency test.
pub fn apriori_prune_by(
    candidates: &BTreeSet<Itemset>,
    mut is_frequent: impl FnMut(&Itemset) -> bool,
) -> BTreeSet<Itemset> {
    candidates
        .iter()
        .filter(|c| c.facets().all(|s| is_frequent(&s)))
        .cloned()
        .collect()
}

/// Splits every MFCS member that contains an infrequent itemset into the
/// maximal subsets avoiding it, then restores the antichain.
pub fn mfcs_gen(state: &BorderState, infrequent: &BTreeSet<Itemset>) -> BorderState {
    let mut mfcs: Vec<Itemset> = state.mfcs.iter().cloned().collect();
    for s in infrequent {
        if s.is_empty() {
            mfcs.clear();
            break;
        }
        let (hit, keep): (Vec<Itemset>, Vec<Itemset>) =
            mfcs.into_iter().partition(|m| s.is_subset_of(m));
        mfcs = keep;
        for m in hit {
            for &e in s.items() {
                let shard = m.without(e);
                if !shard.is_empty() && !covered_by(&shard, &mfcs) {
                    mfcs.push(shard);
                }
            }
        }
    }
    let mfcs = maximal_members(mfcs)
        .into_iter()
        .filter(|m| !covered_by(m, &state.mfs))
        .collect();
    BorderState {
        mfcs,
        mfs: state.mfs.clone(),
    }
}

/// Restores (k+1)-candidates that the prefix join cannot produce because
/// one of their generating k-subsets lies under an MFS member and was never
/// counted. For each `l` in `frequent_k` and MFS member `m`:
///
/// * `l ⊆ m`: add `l ∪ {e}` for items `e` of `m` after `l`'s last item;
/// * `l` has exactly one item outside `m`: add `l ∪ {e}` for every item `e`
///   of `m` not in `l` (the partner `l − {x} ∪ {e}` is a known-frequent
///   subset of `m`).
pub fn recover(
    candidates: &BTreeSet<Itemset>,
    frequent_k: &BTreeSet<Itemset>,
    mfs: &BTreeSet<Itemset>,
) -> BTreeSet<Itemset> {
    let mut out = candidates.clone();
    for l in frequent_k {
        for m in mfs {
            let outside = l.difference(m).len();
            match outside {
                0 => {
                    let last = l.last().unwrap_or(0);
                    for &e in m.items().iter().filter(|&&e| l.is_empty() || e > last) {
                        out.insert(l.with(e));
                    }
                }
                1 => {
                    for &e in m.items().iter().filter(|&&e| !l.contains(e)) {
                        out.insert(l.with(e));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Drops candidates that cannot be frequent (under no MFCS member) and
/// candidates already known frequent (under an MFS member).
pub fn pincer_prune(candidates: &BTreeSet<Itemset>, state: &BorderState) -> BTreeSet<Itemset> {
    candidates
        .iter()
        .filter(|c| covered_by(c, &state.mfcs) && !covered_by(c, &state.mfs))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Letters of the level-1 bookstore vocabulary: A=0 .. I=8.
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;
    const E: usize = 4;
    const F: usize = 5;
    const G: usize = 6;
    const H: usize = 7;

    fn fam<const N: usize>(sets: [&[usize]; N]) -> BTreeSet<Itemset> {
        sets.iter()
            .map(|s| Itemset::new(s.iter().copied()))
            .collect()
    }

    #[test]
    fn itemset_basics() {
        let s = Itemset::new([3, 1, 2, 3]);
        assert_eq!(s.items(), &[1, 2, 3]);
        assert!(Itemset::from([1, 3]).is_subset_of(&s));
        assert!(!Itemset::from([1, 4]).is_subset_of(&s));
        assert!(Itemset::empty().is_subset_of(&s));
        assert!(!s.is_proper_subset_of(&s));
        assert_eq!(s.with(0).items(), &[0, 1, 2, 3]);
        assert_eq!(s.without(2).items(), &[1, 3]);
        assert_eq!(s.nonempty_subsets().len(), 7);
        assert_eq!(s.facets().count(), 3);
    }

    #[test]
    fn join_examples() {
        assert_eq!(
            join(&fam([&[B], &[C], &[D]])).unwrap(),
            fam([&[B, C], &[B, D], &[C, D]])
        );
        assert_eq!(
            join(&fam([&[C, D], &[C, E], &[C, G]])).unwrap(),
            fam([&[C, D, E], &[C, D, G], &[C, E, G]])
        );
        assert!(join(&BTreeSet::new()).unwrap().is_empty());
        assert_eq!(join(&fam([&[B], &[C, D]])), Err(Error::MixedSizes));
    }

    #[test]
    fn join_matches_all_supersets_sharing_prefix() {
        // brute force: every 3-set whose two smallest-prefix generators are present
        let freq = fam([&[C, D], &[C, E], &[C, G]]);
        let mut brute = BTreeSet::new();
        for a in &freq {
            for b in &freq {
                let u = a.union(b);
                if u.len() == 3 && a.items()[0] == b.items()[0] {
                    brute.insert(u);
                }
            }
        }
        assert_eq!(join(&freq).unwrap(), brute);
    }

    #[test]
    fn apriori_prune_examples() {
        let pruned = apriori_prune(&fam([&[B, C, D]]), &fam([&[B, C], &[C, D]])).unwrap();
        assert!(pruned.is_empty());
        let kept = apriori_prune(&fam([&[C, D, E]]), &fam([&[C, D], &[C, E], &[D, E]])).unwrap();
        assert_eq!(kept, fam([&[C, D, E]]));
        assert!(apriori_prune(&BTreeSet::new(), &fam([&[C, D]]))
            .unwrap()
            .is_empty());
        assert_eq!(
            apriori_prune(&fam([&[C, D]]), &fam([&[C, D]])),
            Err(Error::MixedSizes)
        );
    }

    #[test]
    fn mfcs_gen_first_pass_of_bookstore() {
        let state = BorderState {
            mfcs: fam([&[0, 1, 2, 3, 4, 5, 6, 7, 8]]),
            mfs: BTreeSet::new(),
        };
        let next = mfcs_gen(&state, &fam([&[0], &[8]]));
        assert_eq!(next.mfcs, fam([&[B, C, D, E, F, G, H]]));
    }

    #[test]
    fn mfcs_gen_examples() {
        let state = BorderState {
            mfcs: fam([&[1, 2, 3], &[2, 3, 4]]),
            mfs: BTreeSet::new(),
        };
        assert_eq!(mfcs_gen(&state, &BTreeSet::new()), state);
        let next = mfcs_gen(&state, &fam([&[2, 3]]));
        assert_eq!(next.mfcs, fam([&[1, 2], &[1, 3], &[2, 4], &[3, 4]]));
    }

    #[test]
    fn mfcs_gen_drops_members_under_mfs() {
        let state = BorderState {
            mfcs: fam([&[1, 2, 3]]),
            mfs: fam([&[1, 2, 4]]),
        };
        let next = mfcs_gen(&state, &fam([&[3]]));
        assert!(next.mfcs.is_empty());
    }

    #[test]
    fn recover_examples() {
        let cands = fam([&[B, C, D]]);
        assert_eq!(recover(&cands, &fam([&[C, D]]), &BTreeSet::new()), cands);
        let rec = recover(&BTreeSet::new(), &fam([&[C, D]]), &fam([&[C, D, E, G]]));
        assert_eq!(rec, fam([&[C, D, E], &[C, D, G]]));
        // brute force: 3-subsets of the mfs member containing {C,D} with a larger item
        let brute: BTreeSet<Itemset> = Itemset::from([C, D, E, G])
            .nonempty_subsets()
            .into_iter()
            .filter(|s| s.len() == 3 && s.contains(C) && s.contains(D) && s.last() > Some(D))
            .collect();
        assert_eq!(rec, brute);
        let dup = recover(&fam([&[C, D, E]]), &fam([&[C, D]]), &fam([&[C, D, E, G]]));
        assert_eq!(dup.len(), 2);
    }

    #[test]
    fn recover_restores_partner_under_mfs() {
        // {1,3} is counted; {1,2} lies under the MFS member {1,2,5} and was
        // never counted, so the join never sees it.
        let rec = recover(&BTreeSet::new(), &fam([&[1, 3]]), &fam([&[1, 2, 5]]));
        assert!(rec.contains(&Itemset::from([1, 2, 3])));
        assert!(rec.contains(&Itemset::from([1, 3, 5])));
    }

    #[test]
    fn pincer_prune_examples() {
        let state = BorderState {
            mfcs: fam([&[C, D, E, G], &[B, C], &[E, F], &[E, H]]),
            mfs: BTreeSet::new(),
        };
        let out = pincer_prune(&fam([&[C, D, E], &[B, C, D]]), &state);
        assert_eq!(out, fam([&[C, D, E]]));

        let known = BorderState {
            mfcs: fam([&[B, C]]),
            mfs: fam([&[C, D, E, G]]),
        };
        assert!(pincer_prune(&fam([&[C, D, E]]), &known).is_empty());

        let empty = BorderState::default();
        assert!(pincer_prune(&fam([&[C, D]]), &empty).is_empty());
    }

    #[test]
    fn confirm_keeps_antichains() {
        let mut state = BorderState {
            mfcs: fam([&[1, 2], &[3, 4]]),
            mfs: fam([&[1]]),
        };
        state.confirm(Itemset::from([1, 2]));
        assert_eq!(state.mfs, fam([&[1, 2]]));
        assert_eq!(state.mfcs, fam([&[3, 4]]));
        assert!(state.is_consistent());
    }

    mod props {
        use super::*;
        use proptest::collection::{btree_set, vec};
        use proptest::prelude::*;

        fn itemset(n: usize) -> impl Strategy<Value = Itemset> {
            btree_set(0..n, 1..=n).prop_map(Itemset::new)
        }

        /// Maximal elements of {X ⊆ some old member : no s ∈ S with s ⊆ X}.
        fn mfcs_oracle(
            old: &BTreeSet<Itemset>,
            infrequent: &BTreeSet<Itemset>,
        ) -> BTreeSet<Itemset> {
            let mut all = BTreeSet::new();
            for m in old {
                for x in m.nonempty_subsets() {
                    if !infrequent.iter().any(|s| s.is_subset_of(&x)) {
                        all.insert(x);
                    }
                }
            }
            all.iter()
                .filter(|x| !all.iter().any(|y| x.is_proper_subset_of(y)))
                .cloned()
                .collect()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn mfcs_gen_matches_oracle(
                old in vec(itemset(10), 1..4),
                infrequent in btree_set(itemset(10), 0..6),
            ) {
                let old = maximal_members(old);
                let state = BorderState { mfcs: old.clone(), mfs: BTreeSet::new() };
                let next = mfcs_gen(&state, &infrequent);
                prop_assert_eq!(&next.mfcs, &mfcs_oracle(&old, &infrequent));
                prop_assert!(is_antichain(&next.mfcs));
                for m in &next.mfcs {
                    prop_assert!(!infrequent.iter().any(|s| s.is_subset_of(m)));
                }
            }

            #[test]
            fn join_then_prune_matches_brute_force(
                k in 1usize..4,
                picks in btree_set(itemset(7), 0..25),
            ) {
                let freq: BTreeSet<Itemset> = picks.into_iter().filter(|s| s.len() == k).collect();
                let got = apriori_prune(&join(&freq).unwrap(), &freq).unwrap();
                let universe = Itemset::new(0..7);
                let brute: BTreeSet<Itemset> = universe
                    .nonempty_subsets()
                    .into_iter()
                    .filter(|x| x.len() == k + 1 && x.facets().all(|f| freq.contains(&f)))
                    .collect();
                prop_assert_eq!(got, brute);
            }

            #[test]
            fn maximal_members_is_antichain(family in vec(itemset(8), 0..12)) {
                let max = maximal_members(family.clone());
                prop_assert!(is_antichain(&max));
                for s in &family {
                    prop_assert!(covered_by(s, &max));
                }
            }
        }
    }
}
