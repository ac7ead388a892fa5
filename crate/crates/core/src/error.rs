use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("item code {text:?} has length {found}, expected {expected}")]
    BadLength {
        text: String,
        found: usize,
        expected: usize,
    },
    #[error("item code {0:?} has a wildcard before a branch symbol")]
    WildcardNotSuffix(String),
    #[error("item code {0:?} has no branch symbols")]
    EmptyCode(String),
    #[error("item code {0:?} contains a character that is neither alphanumeric nor '*'")]
    BadSymbol(String),
    #[error("level {level} is outside 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("taxonomy has no codes")]
    EmptyTaxonomy,
    #[error("duplicate item code {0}")]
    DuplicateCode(String),
    #[error("interior code {0} has no leaf descendant")]
    OrphanCode(String),
    #[error("record {record}: {source}")]
    Record {
        record: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("item {0} is not a leaf of the taxonomy")]
    UnknownItem(String),
    #[error("filter code {0} is not at the projected level")]
    FilterLevelMismatch(String),
    #[error("item index {index} out of range for vocabulary of {width}")]
    IndexOutOfRange { index: usize, width: usize },
    #[error("itemsets of mixed sizes passed where a uniform size is required")]
    MixedSizes,
    #[error("minimum support must be at least 1, got {0}")]
    InvalidMinsup(u64),
    #[error("invalid fractional support {0}; expected 0 < f <= 1")]
    InvalidFraction(f64),
    #[error("minimum confidence must lie in (0, 1], got {0}")]
    InvalidConfidence(f64),
    #[error("level configuration lists {found} thresholds for {expected} levels")]
    LevelCountMismatch { found: usize, expected: usize },
    #[error("maximal itemset of {0} items exceeds the expansion limit")]
    ExpansionTooLarge(usize),
    #[error("support of subset {0} is missing from the frequent collection")]
    MissingSubsetSupport(String),
    #[error("vocabulary of {0} items exceeds the brute-force limit")]
    VocabularyTooLarge(usize),
    #[error("traces come from different datasets ({0} vs {1})")]
    InputMismatch(String, String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at_record(self, record: usize) -> Error {
        Error::Record {
            record,
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping record-position wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Record { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
