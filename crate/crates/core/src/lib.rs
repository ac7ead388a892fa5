//! Multilevel association-rule mining over a concept hierarchy.
//!
//! Items carry hierarchical codes (`A11`, `C1*`, `E**`). Each taxonomy level
//! is projected to a Boolean transaction matrix and mined with Pincer
//! search, which finds the maximal frequent itemsets by combining bottom-up
//! candidate counting with a top-down candidate border. The maximal sets are
//! expanded into all frequent itemsets and confidence-filtered rules.
//! Levelwise Apriori baselines and a brute-force oracle share the same
//! pass instrumentation.
//!
//! ```
//! use pincer_ml::{datasets, pincer::pincer_search};
//!
//! let matrix = datasets::bookstore().project_to_level(1, None).unwrap();
//! let found = pincer_search(&matrix, 3).unwrap();
//! assert_eq!(found.mfs.len(), 4);
//! assert_eq!(found.trace.passes(), 3);
//! ```

pub mod baselines;
pub mod check;
pub mod cli;
pub mod datasets;
pub mod error;
pub mod gen;
pub mod itemsets;
pub mod multilevel;
pub mod oracle;
pub mod pincer;
pub mod report;
pub mod rules;
pub mod taxonomy;
pub mod transactions;

pub use error::{Error, Result};
pub use itemsets::{BorderState, Itemset};
pub use multilevel::{mine_multilevel, DescentPolicy, LevelConfig, MultiLevelResult};
pub use taxonomy::{ItemCode, Taxonomy};
pub use transactions::{LevelMatrix, MinSupport, PassCounter, TransactionDb};
