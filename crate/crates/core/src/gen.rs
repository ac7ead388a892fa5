//! Seeded synthetic data: random level matrices for property tests and
//! taxonomy-shaped datasets with a planted frequent pattern.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::itemsets::Itemset;
use crate::taxonomy::{ItemCode, Taxonomy};
use crate::transactions::{LevelMatrix, TransactionDb};

/// Environment variable that seeds test-data generation when set.
pub const SEED_ENV: &str = "PINCER_ML_SEED";

const LEVEL1_SYMBOLS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
const BRANCH_SYMBOLS: &[u8] = b"123456789";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed from `PINCER_ML_SEED`, falling back to `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default)
}

/// Random matrix with `1..=max_items` columns and `0..=max_transactions`
/// rows. Each row draws its own density so that both sparse and dense
/// transactions occur.
pub fn random_matrix(rng: &mut impl Rng, max_items: usize, max_transactions: usize) -> LevelMatrix {
    let width = rng.gen_range(1..=max_items);
    let n = rng.gen_range(0..=max_transactions);
    let rows: Vec<Itemset> = (0..n)
        .map(|_| {
            let density: f64 = rng.gen_range(0.1..0.9);
            Itemset::new((0..width).filter(|_| rng.gen_bool(density)))
        })
        .collect();
    LevelMatrix::synthetic(width, &rows).expect("indices are in range")
}

/// Matrix over `width` items whose rows contain a planted itemset with
/// probability `plant_rate`, plus background noise.
pub fn planted_matrix(
    rng: &mut impl Rng,
    width: usize,
    n: usize,
    planted: &Itemset,
    plant_rate: f64,
    noise: f64,
) -> LevelMatrix {
    let rows: Vec<Itemset> = (0..n)
        .map(|_| {
            let mut items: Vec<usize> = (0..width).filter(|_| rng.gen_bool(noise)).collect();
            if rng.gen_bool(plant_rate) {
                items.extend(planted.items());
            }
            Itemset::new(items)
        })
        .collect();
    LevelMatrix::synthetic(width, &rows).expect("indices are in range")
}

#[derive(Debug, Clone, Serialize)]
pub struct GenParams {
    /// Level-1 categories (at most 26).
    pub categories: usize,
    /// Children per interior node (at most 9).
    pub branching: usize,
    pub transactions: usize,
    /// Number of level-1 categories in the planted pattern.
    pub planted: usize,
    /// Fraction of transactions carrying the planted pattern.
    pub plant_rate: f64,
    /// Per-leaf background probability.
    pub noise: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            categories: 10,
            branching: 2,
            transactions: 60,
            planted: 6,
            plant_rate: 0.4,
            noise: 0.05,
            seed: 7,
        }
    }
}

pub struct GeneratedData {
    pub taxonomy: Vec<(String, String)>,
    pub transactions: Vec<(String, String)>,
    pub planted: Vec<ItemCode>,
}

impl GeneratedData {
    pub fn load(&self) -> Result<TransactionDb> {
        let tax = Taxonomy::from_records(self.taxonomy.iter().cloned(), 3)?;
        TransactionDb::from_records(self.transactions.iter().cloned(), Arc::new(tax))
    }
}

/// Three-level dataset. Planted transactions hold one random leaf under
/// each planted category, so the planted categories form a frequent
/// itemset at level 1.
pub fn generate(params: &GenParams) -> GeneratedData {
    let categories = params.categories.clamp(1, LEVEL1_SYMBOLS.len());
    let branching = params.branching.clamp(1, BRANCH_SYMBOLS.len());
    let mut rng = rng(params.seed);

    let mut leaves = Vec::new();
    for &c in &LEVEL1_SYMBOLS[..categories] {
        for &b in &BRANCH_SYMBOLS[..branching] {
            for &d in &BRANCH_SYMBOLS[..branching] {
                let text: String = [c, b, d].iter().map(|&x| x as char).collect();
                leaves.push(ItemCode::parse(&text, 3).expect("generated code is valid"));
            }
        }
    }
    let taxonomy = leaves
        .iter()
        .map(|c| (c.to_string(), format!("item {c}")))
        .collect();

    let mut cats: Vec<usize> = (0..categories).collect();
    cats.shuffle(&mut rng);
    cats.truncate(params.planted.min(categories));
    cats.sort_unstable();
    let planted: Vec<ItemCode> = cats
        .iter()
        .map(|&i| {
            let text = format!("{}**", LEVEL1_SYMBOLS[i] as char);
            ItemCode::parse(&text, 3).expect("generated code is valid")
        })
        .collect();

    let per_category = branching * branching;
    let mut transactions = Vec::new();
    for t in 0..params.transactions {
        let tid = format!("T{}", t + 1);
        let mut items: Vec<&ItemCode> = leaves
            .iter()
            .filter(|_| rng.gen_bool(params.noise))
            .collect();
        if rng.gen_bool(params.plant_rate) {
            for &cat in &cats {
                let pick = rng.gen_range(0..per_category);
                items.push(&leaves[cat * per_category + pick]);
            }
        }
        if items.is_empty() {
            items.push(leaves.choose(&mut rng).expect("taxonomy has leaves"));
        }
        items.sort();
        items.dedup();
        transactions.extend(items.into_iter().map(|c| (tid.clone(), c.to_string())));
    }
    GeneratedData {
        taxonomy,
        transactions,
        planted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let p = GenParams::default();
        let a = generate(&p);
        let b = generate(&p);
        assert_eq!(a.transactions, b.transactions);
        assert_eq!(a.planted, b.planted);
    }

    #[test]
    fn generated_data_loads() {
        let data = generate(&GenParams::default());
        let db = data.load().unwrap();
        assert_eq!(db.len(), 60);
        assert_eq!(db.taxonomy().leaf_count(), 40);
        assert_eq!(data.planted.len(), 6);
    }

    #[test]
    fn random_matrix_bounds() {
        let mut r = rng(1);
        for _ in 0..50 {
            let m = random_matrix(&mut r, 12, 40);
            assert!((1..=12).contains(&m.width()));
            assert!(m.n_transactions() <= 40);
        }
    }
}
