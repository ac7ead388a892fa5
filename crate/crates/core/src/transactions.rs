//! Transaction storage, level projection and bitmap support counting.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::itemsets::Itemset;
use crate::taxonomy::{ItemCode, Taxonomy};

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub tid: String,
    pub items: BTreeSet<ItemCode>,
}

#[derive(Debug, Clone)]
pub struct TransactionDb {
    transactions: Vec<Transaction>,
    taxonomy: Arc<Taxonomy>,
}

impl TransactionDb {
    /// Groups `(tid, item)` records into transactions in order of first
    /// appearance. Repeated items within a transaction collapse.
    pub fn from_records<I, T, C>(records: I, taxonomy: Arc<Taxonomy>) -> Result<TransactionDb>
    where
        I: IntoIterator<Item = (T, C)>,
        T: Into<String>,
        C: AsRef<str>,
    {
        let mut transactions: Vec<Transaction> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for (i, (tid, text)) in records.into_iter().enumerate() {
            let record = i + 1;
            let code = taxonomy
                .parse_code(text.as_ref().trim())
                .map_err(|e| e.at_record(record))?;
            if !taxonomy.contains_leaf(&code) {
                return Err(Error::UnknownItem(code.to_string()).at_record(record));
            }
            let tid = tid.into();
            let slot = *index.entry(tid.clone()).or_insert_with(|| {
                transactions.push(Transaction {
                    tid,
                    items: BTreeSet::new(),
                });
                transactions.len() - 1
            });
            transactions[slot].items.insert(code);
        }
        Ok(TransactionDb {
            transactions,
            taxonomy,
        })
    }

    /// Reads a `tid,item` CSV with a header row.
    pub fn from_csv<R: Read>(reader: R, taxonomy: Arc<Taxonomy>) -> Result<TransactionDb> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row?;
            records.push((
                row.get(0).unwrap_or_default().to_string(),
                row.get(1).unwrap_or_default().to_string(),
            ));
        }
        TransactionDb::from_records(records, taxonomy)
    }

    pub fn from_path(path: impl AsRef<Path>, taxonomy: Arc<Taxonomy>) -> Result<TransactionDb> {
        let file = std::fs::File::open(path)?;
        TransactionDb::from_csv(std::io::BufReader::new(file), taxonomy)
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn taxonomy_arc(&self) -> Arc<Taxonomy> {
        Arc::clone(&self.taxonomy)
    }

    /// SHA-256 over the grouped transactions; identifies the dataset in
    /// comparison reports.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for t in &self.transactions {
            hasher.update(t.tid.as_bytes());
            hasher.update([0u8]);
            for item in &t.items {
                hasher.update(item.to_string().as_bytes());
                hasher.update([1u8]);
            }
            hasher.update([2u8]);
        }
        hex::encode(hasher.finalize())
    }

    /// Boolean matrix of the transactions generalized to `level`. With a
    /// filter, only those codes form the vocabulary; otherwise every
    /// taxonomy code at that depth does.
    pub fn project_to_level(
        &self,
        level: usize,
        filter: Option<&BTreeSet<ItemCode>>,
    ) -> Result<LevelMatrix> {
        let levels = self.taxonomy.total_levels();
        if level < 1 || level > levels {
            return Err(Error::LevelOutOfRange { level, max: levels });
        }
        let vocabulary: Vec<ItemCode> = match filter {
            Some(codes) => {
                if let Some(bad) = codes.iter().find(|c| c.depth() != level) {
                    return Err(Error::FilterLevelMismatch(bad.to_string()));
                }
                codes.iter().cloned().collect()
            }
            None => self.taxonomy.codes_at(level),
        };
        let position: HashMap<&ItemCode, usize> =
            vocabulary.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let rows = self
            .transactions
            .iter()
            .map(|t| {
                let mut idx = Vec::with_capacity(t.items.len());
                for leaf in &t.items {
                    let g = leaf.generalize(level)?;
                    if let Some(&i) = position.get(&g) {
                        idx.push(i);
                    }
                }
                Ok(Itemset::new(idx))
            })
            .collect::<Result<Vec<_>>>()?;
        LevelMatrix::new(level, vocabulary, &rows)
    }
}

/// Packed bit vector over transaction positions.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TidSet {
    words: Vec<u64>,
}

impl TidSet {
    fn zeros(n: usize) -> TidSet {
        TidSet {
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }
}

/// Transaction-by-item bit matrix for one taxonomy level. Stored
/// column-wise (one tid bitmap per item) so that support is an AND of the
/// member columns followed by a population count.
#[derive(Debug, Clone)]
pub struct LevelMatrix {
    level: usize,
    vocabulary: Vec<ItemCode>,
    columns: Vec<TidSet>,
    n_transactions: usize,
}

impl LevelMatrix {
    /// `rows[t]` lists the vocabulary indices present in transaction `t`.
    pub fn new(level: usize, vocabulary: Vec<ItemCode>, rows: &[Itemset]) -> Result<LevelMatrix> {
        let width = vocabulary.len();
        let n = rows.len();
        let mut columns = vec![TidSet::zeros(n); width];
        for (t, row) in rows.iter().enumerate() {
            for &i in row.items() {
                if i >= width {
                    return Err(Error::IndexOutOfRange { index: i, width });
                }
                columns[i].set(t);
            }
        }
        Ok(LevelMatrix {
            level,
            vocabulary,
            columns,
            n_transactions: n,
        })
    }

    /// Matrix over generated two-symbol codes (`00`, `01`, …), for tests and
    /// synthetic benchmarks that have no taxonomy.
    pub fn synthetic(width: usize, rows: &[Itemset]) -> Result<LevelMatrix> {
        LevelMatrix::new(2, synthetic_vocabulary(width), rows)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vocabulary(&self) -> &[ItemCode] {
        &self.vocabulary
    }

    pub fn width(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn n_transactions(&self) -> usize {
        self.n_transactions
    }

    pub fn get(&self, transaction: usize, item: usize) -> bool {
        self.columns[item].get(transaction)
    }

    /// Row `t` as an itemset.
    pub fn row(&self, transaction: usize) -> Itemset {
        Itemset::new((0..self.width()).filter(|&i| self.get(transaction, i)))
    }

    pub fn index_of(&self, code: &ItemCode) -> Option<usize> {
        self.vocabulary.binary_search(code).ok()
    }

    pub fn codes(&self, set: &Itemset) -> Vec<ItemCode> {
        set.items()
            .iter()
            .map(|&i| self.vocabulary[i].clone())
            .collect()
    }

    pub fn count_support(&self, set: &Itemset) -> Result<u64> {
        let width = self.width();
        if let Some(&bad) = set.items().iter().find(|&&i| i >= width) {
            return Err(Error::IndexOutOfRange { index: bad, width });
        }
        let Some((&first, rest)) = set.items().split_first() else {
            return Ok(self.n_transactions as u64);
        };
        let first = &self.columns[first].words;
        let total = (0..first.len())
            .map(|w| {
                rest.iter()
                    .fold(first[w], |acc, &i| acc & self.columns[i].words[w])
                    .count_ones() as u64
            })
            .sum();
        Ok(total)
    }

    /// One database pass: counts every itemset and bumps `counter` once,
    /// even for an empty batch.
    pub fn count_many<'a>(
        &self,
        itemsets: impl IntoIterator<Item = &'a Itemset>,
        counter: &mut PassCounter,
    ) -> Result<BTreeMap<Itemset, u64>> {
        counter.tick();
        let mut out = BTreeMap::new();
        for set in itemsets {
            if !out.contains_key(set) {
                let n = self.count_support(set)?;
                out.insert(set.clone(), n);
            }
        }
        Ok(out)
    }
}

pub fn synthetic_vocabulary(width: usize) -> Vec<ItemCode> {
    const SYMBOLS: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
    assert!(
        width <= SYMBOLS.len() * SYMBOLS.len(),
        "synthetic vocabulary too wide"
    );
    (0..width)
        .map(|i| {
            let text: String = [SYMBOLS[i / SYMBOLS.len()], SYMBOLS[i % SYMBOLS.len()]]
                .iter()
                .map(|&b| b as char)
                .collect();
            ItemCode::parse(&text, 2).expect("generated code is valid")
        })
        .collect()
}

/// Number of full database sweeps performed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PassCounter {
    passes: u64,
}

impl PassCounter {
    pub fn new() -> PassCounter {
        PassCounter::default()
    }

    pub fn passes(&self) -> u64 {
        self.passes
    }

    fn tick(&mut self) {
        self.passes += 1;
    }
}

/// Minimum support, either an absolute transaction count or a fraction of
/// the database size (rounded up).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum MinSupport {
    Absolute(u64),
    Fraction(f64),
}

impl MinSupport {
    // Absorbs float noise such as 0.2 * 15 = 3.0000000000000004.
    const FRACTION_SLACK: f64 = 1e-9;

    pub fn validate(&self) -> Result<()> {
        match *self {
            MinSupport::Absolute(n) if n < 1 => Err(Error::InvalidMinsup(n)),
            MinSupport::Fraction(f) if !(f > 0.0 && f <= 1.0) => Err(Error::InvalidFraction(f)),
            _ => Ok(()),
        }
    }

    pub fn resolve(&self, n_transactions: usize) -> Result<u64> {
        self.validate()?;
        Ok(match *self {
            MinSupport::Absolute(n) => n,
            MinSupport::Fraction(f) => {
                let raw = (f * n_transactions as f64 - Self::FRACTION_SLACK).ceil();
                (raw.max(1.0)) as u64
            }
        })
    }
}
