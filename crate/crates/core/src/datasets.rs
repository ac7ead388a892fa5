//! The bundled bookstore dataset: fifteen transactions over a three-level
//! book taxonomy.

use std::sync::Arc;

use crate::taxonomy::{Taxonomy, DEFAULT_LEVELS};
use crate::transactions::TransactionDb;

pub const BOOKSTORE_TAXONOMY_CSV: &str = include_str!("../data/bookstore_taxonomy.csv");
pub const BOOKSTORE_TRANSACTIONS_CSV: &str = include_str!("../data/bookstore.csv");

pub fn bookstore_taxonomy() -> Arc<Taxonomy> {
    Arc::new(
        Taxonomy::from_csv(BOOKSTORE_TAXONOMY_CSV.as_bytes(), DEFAULT_LEVELS)
            .expect("bundled taxonomy parses"),
    )
}

pub fn bookstore() -> TransactionDb {
    TransactionDb::from_csv(BOOKSTORE_TRANSACTIONS_CSV.as_bytes(), bookstore_taxonomy())
        .expect("bundled transactions parse")
}
