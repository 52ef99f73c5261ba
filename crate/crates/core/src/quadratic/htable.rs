//! Class numbers of maximal orders, keyed by fundamental discriminant.
//!
//! The bundled table covers `Q(√d)` for squarefree `|d| ≤ 200`. It is
//! external data as far as the engines are concerned: reports mark every
//! value taken from it.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/class_numbers.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassNumberTable {
    entries: BTreeMap<i64, u64>,
}

impl ClassNumberTable {
    /// Parses lines `d_K h`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("class number table line {}: {raw:?}", lineno + 1));
            let mut parts = line.split_whitespace();
            let dk: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let h: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if parts.next().is_some() || h == 0 {
                return Err(bad());
            }
            entries.insert(dk, h);
        }
        Ok(ClassNumberTable { entries })
    }

    pub fn bundled() -> Self {
        ClassNumberTable::parse(BUNDLED).expect("bundled class number table parses")
    }

    /// The bundled table with entries from `path` taking precedence.
    pub fn bundled_with_override(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.as_ref().display())))?;
        let extra = ClassNumberTable::parse(&text)?;
        let mut table = ClassNumberTable::bundled();
        table.entries.extend(extra.entries);
        Ok(table)
    }

    pub fn get(&self, dk: i64) -> Option<u64> {
        self.entries.get(&dk).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_values() {
        let t = ClassNumberTable::bundled();
        assert_eq!(t.get(8), Some(1));
        assert_eq!(t.get(316), Some(3));
        assert_eq!(t.get(-23), Some(3));
        assert_eq!(t.get(-84), Some(4));
        assert_eq!(t.get(3948), None);
        assert!(t.len() > 200);
    }

    #[test]
    fn override_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        std::fs::write(&path, "3948 4\n8 1 # comment\n").unwrap();
        let t = ClassNumberTable::bundled_with_override(&path).unwrap();
        assert_eq!(t.get(3948), Some(4));
        assert!(ClassNumberTable::parse("12 x").is_err());
        assert!(ClassNumberTable::parse("12 0").is_err());
    }
}
