//! Hierarchical item codes and the code → name catalog.
//!
//! A code is a fixed-width string with one branch symbol per level, most
//! significant first, padded with `*` below its own depth: `A11` is a leaf
//! of a three-level tree, `C1*` its level-2 ancestor and `C**` the level-1
//! category.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_LEVELS: usize = 3;

const WILDCARD: char = '*';

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemCode {
    // Field order matters: derived Ord on `path` matches the textual order,
    // because '*' sorts below every alphanumeric symbol.
    path: Vec<char>,
    total_levels: usize,
}

impl ItemCode {
    pub fn parse(text: &str, total_levels: usize) -> Result<ItemCode> {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() != total_levels {
            return Err(Error::BadLength {
                text: text.to_string(),
                found: chars.len(),
                expected: total_levels,
            });
        }
        let depth = chars.iter().take_while(|&&c| c != WILDCARD).count();
        if chars[depth..].iter().any(|&c| c != WILDCARD) {
            return Err(Error::WildcardNotSuffix(text.to_string()));
        }
        if depth == 0 {
            return Err(Error::EmptyCode(text.to_string()));
        }
        if !chars[..depth].iter().all(|c| c.is_ascii_alphanumeric()) {
            return Err(Error::BadSymbol(text.to_string()));
        }
        Ok(ItemCode {
            path: chars[..depth].to_vec(),
            total_levels,
        })
    }

    pub fn path(&self) -> &[char] {
        &self.path
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    pub fn total_levels(&self) -> usize {
        self.total_levels
    }

    pub fn is_leaf(&self) -> bool {
        self.depth() == self.total_levels
    }

    /// Ancestor at `level`; identity when `level == self.depth()`.
    pub fn generalize(&self, level: usize) -> Result<ItemCode> {
        if level < 1 || level > self.depth() {
            return Err(Error::LevelOutOfRange {
                level,
                max: self.depth(),
            });
        }
        Ok(ItemCode {
            path: self.path[..level].to_vec(),
            total_levels: self.total_levels,
        })
    }

    /// Strict ancestry: a code is not its own ancestor.
    pub fn is_ancestor_of(&self, other: &ItemCode) -> bool {
        self.depth() < other.depth() && other.path.starts_with(&self.path)
    }
}

impl fmt::Display for ItemCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.path {
            write!(f, "{c}")?;
        }
        for _ in self.depth()..self.total_levels {
            write!(f, "{WILDCARD}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ItemCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ItemCode {
    type Err = Error;

    /// Parses with the width taken from the text itself.
    fn from_str(s: &str) -> Result<ItemCode> {
        ItemCode::parse(s, s.chars().count())
    }
}

impl Serialize for ItemCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone)]
pub struct Taxonomy {
    leaves: BTreeSet<ItemCode>,
    names: BTreeMap<ItemCode, String>,
    total_levels: usize,
}

impl Taxonomy {
    /// Builds a taxonomy from `(code, name)` records. Leaf codes define the
    /// tree; interior codes are optional and only contribute names.
    pub fn from_records<I, C, N>(records: I, total_levels: usize) -> Result<Taxonomy>
    where
        I: IntoIterator<Item = (C, N)>,
        C: AsRef<str>,
        N: Into<String>,
    {
        let mut leaves = BTreeSet::new();
        let mut explicit: BTreeMap<ItemCode, String> = BTreeMap::new();
        for (i, (text, name)) in records.into_iter().enumerate() {
            let record = i + 1;
            let code = ItemCode::parse(text.as_ref().trim(), total_levels)
                .map_err(|e| e.at_record(record))?;
            if explicit.contains_key(&code) {
                return Err(Error::DuplicateCode(code.to_string()).at_record(record));
            }
            if code.is_leaf() {
                leaves.insert(code.clone());
            }
            explicit.insert(code, name.into());
        }
        if explicit.is_empty() {
            return Err(Error::EmptyTaxonomy);
        }

        let mut names = BTreeMap::new();
        for leaf in &leaves {
            for level in 1..=total_levels {
                let code = leaf.generalize(level)?;
                names.entry(code).or_insert_with_key(|c| c.to_string());
            }
        }
        for (code, name) in explicit {
            match names.get_mut(&code) {
                Some(slot) => *slot = name,
                None => return Err(Error::OrphanCode(code.to_string())),
            }
        }
        Ok(Taxonomy {
            leaves,
            names,
            total_levels,
        })
    }

    /// Reads a `code,name` CSV with a header row.
    pub fn from_csv<R: Read>(reader: R, total_levels: usize) -> Result<Taxonomy> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let code = row.get(0).unwrap_or_default().to_string();
            let name = row.get(1).unwrap_or_default().to_string();
            records.push((code, name));
        }
        Taxonomy::from_records(records, total_levels)
    }

    pub fn from_path(path: impl AsRef<Path>, total_levels: usize) -> Result<Taxonomy> {
        let file = std::fs::File::open(path)?;
        Taxonomy::from_csv(std::io::BufReader::new(file), total_levels)
    }

    pub fn total_levels(&self) -> usize {
        self.total_levels
    }

    pub fn leaves(&self) -> impl Iterator<Item = &ItemCode> {
        self.leaves.iter()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn contains_leaf(&self, code: &ItemCode) -> bool {
        self.leaves.contains(code)
    }

    pub fn contains(&self, code: &ItemCode) -> bool {
        self.names.contains_key(code)
    }

    pub fn name(&self, code: &ItemCode) -> Option<&str> {
        self.names.get(code).map(String::as_str)
    }

    /// All codes at `level`, in textual order.
    pub fn codes_at(&self, level: usize) -> Vec<ItemCode> {
        self.names
            .keys()
            .filter(|c| c.depth() == level)
            .cloned()
            .collect()
    }

    /// Direct children of `code`, in textual order.
    pub fn children(&self, code: &ItemCode) -> Vec<ItemCode> {
        self.names
            .keys()
            .filter(|c| c.depth() == code.depth() + 1 && code.is_ancestor_of(c))
            .cloned()
            .collect()
    }

    pub fn parse_code(&self, text: &str) -> Result<ItemCode> {
        ItemCode::parse(text, self.total_levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> ItemCode {
        ItemCode::parse(s, 3).unwrap()
    }

    #[test]
    fn parse_examples() {
        let a = code("A11");
        assert_eq!(a.path(), &['A', '1', '1']);
        assert_eq!(a.depth(), 3);
        let c = code("C**");
        assert_eq!(c.path(), &['C']);
        assert_eq!(c.depth(), 1);
        assert_eq!(c.to_string(), "C**");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            ItemCode::parse("A*1", 3),
            Err(Error::WildcardNotSuffix("A*1".into()))
        );
        assert!(matches!(
            ItemCode::parse("A1", 3),
            Err(Error::BadLength { found: 2, .. })
        ));
        assert_eq!(
            ItemCode::parse("***", 3),
            Err(Error::EmptyCode("***".into()))
        );
        assert_eq!(
            ItemCode::parse("A-1", 3),
            Err(Error::BadSymbol("A-1".into()))
        );
    }

    #[test]
    fn generalize_examples() {
        assert_eq!(code("A11").generalize(1).unwrap(), code("A**"));
        assert_eq!(code("C11").generalize(2).unwrap(), code("C1*"));
        assert_eq!(code("E12").generalize(3).unwrap(), code("E12"));
        assert_eq!(
            code("C1*").generalize(3),
            Err(Error::LevelOutOfRange { level: 3, max: 2 })
        );
        assert!(code("C1*").generalize(0).is_err());
    }

    #[test]
    fn ancestry() {
        assert!(code("C**").is_ancestor_of(&code("C11")));
        assert!(!code("C1*").is_ancestor_of(&code("C1*")));
        assert!(!code("D1*").is_ancestor_of(&code("C11")));
        assert!(!code("C11").is_ancestor_of(&code("C1*")));
    }

    #[test]
    fn textual_order_matches_ord() {
        let mut codes = [
            code("C1*"),
            code("C**"),
            code("B12"),
            code("C11"),
            code("A**"),
        ];
        codes.sort();
        let text: Vec<String> = codes.iter().map(ToString::to_string).collect();
        let mut sorted = text.clone();
        sorted.sort();
        assert_eq!(text, sorted);
    }

    #[test]
    fn synthesizes_ancestors() {
        let tax = Taxonomy::from_records([("A11", "x"), ("A12", "y"), ("B11", "z")], 3).unwrap();
        assert_eq!(tax.leaf_count(), 3);
        assert_eq!(tax.codes_at(1), vec![code("A**"), code("B**")]);
        assert_eq!(tax.name(&code("A1*")), Some("A1*"));
        assert_eq!(tax.children(&code("A1*")), vec![code("A11"), code("A12")]);
    }

    #[test]
    fn interior_names_override_defaults() {
        let tax = Taxonomy::from_records([("A**", "Story"), ("A11", "Tinkla")], 3).unwrap();
        assert_eq!(tax.name(&code("A**")), Some("Story"));
        assert_eq!(tax.name(&code("A11")), Some("Tinkla"));
    }

    #[test]
    fn load_errors() {
        let empty: Vec<(&str, &str)> = vec![];
        assert_eq!(
            Taxonomy::from_records(empty, 3).unwrap_err(),
            Error::EmptyTaxonomy
        );
        let dup = Taxonomy::from_records([("A11", "a"), ("A11", "b")], 3).unwrap_err();
        assert_eq!(dup.root(), &Error::DuplicateCode("A11".into()));
        assert!(matches!(dup, Error::Record { record: 2, .. }));
        let bad = Taxonomy::from_records([("A11", "a"), ("A*1", "b")], 3).unwrap_err();
        assert!(matches!(bad, Error::Record { record: 2, .. }));
        let orphan = Taxonomy::from_records([("A11", "a"), ("B**", "b")], 3).unwrap_err();
        assert_eq!(orphan, Error::OrphanCode("B**".into()));
    }

    #[test]
    fn csv_catalog() {
        let text = "code,name\nA11,Child Story book Tinkla\nI**,Dawning book\nI11,S. Chand\n";
        let tax = Taxonomy::from_csv(text.as_bytes(), 3).unwrap();
        assert_eq!(tax.leaf_count(), 2);
        assert_eq!(tax.name(&code("I**")), Some("Dawning book"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn leaf() -> impl Strategy<Value = ItemCode> {
            "[A-Z0-9]{3}".prop_map(|s| ItemCode::parse(&s, 3).unwrap())
        }

        proptest! {
            #[test]
            fn round_trip(c in leaf(), level in 1usize..=3) {
                let g = c.generalize(level).unwrap();
                prop_assert_eq!(ItemCode::parse(&g.to_string(), 3).unwrap(), g);
            }

            #[test]
            fn ancestor_chain(c in leaf(), i in 1usize..=3, j in 1usize..=3) {
                prop_assume!(i < j);
                let gi = c.generalize(i).unwrap();
                let gj = c.generalize(j).unwrap();
                prop_assert!(gi.is_ancestor_of(&gj));
            }

            #[test]
            fn generalize_idempotent(c in leaf(), level in 1usize..=3) {
                let g = c.generalize(level).unwrap();
                prop_assert_eq!(g.generalize(level).unwrap(), g);
            }
        }
    }
}
