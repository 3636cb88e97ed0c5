use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sorted, duplicate-free set of row or column indices.
///
/// Stored zero-based; displayed and serialized one-based (`{1,3}`), which is
/// how sensors and actuators are numbered in models and reports.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn from_zero_based(ix: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = ix.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    /// Rejects index 0, which has no meaning in one-based numbering.
    pub fn from_one_based(ix: &[usize]) -> Result<Self> {
        if ix.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, bound: 0 });
        }
        Ok(Self::from_zero_based(ix.iter().map(|i| i - 1)))
    }

    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn check_bound(&self, bound: usize) -> Result<()> {
        match self.0.last() {
            Some(&i) if i >= bound => Err(Error::IndexOutOfRange {
                index: i + 1,
                bound,
            }),
            _ => Ok(()),
        }
    }

    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((0..n).filter(|i| !self.contains(*i)).collect())
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::from_zero_based(self.0.iter().chain(&other.0).copied())
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }

    /// Splits off the `k` smallest indices: `(first k, rest)`.
    pub fn split_lowest(&self, k: usize) -> (IndexSet, IndexSet) {
        let k = k.min(self.0.len());
        (IndexSet(self.0[..k].to_vec()), IndexSet(self.0[k..].to_vec()))
    }

    /// All `k`-subsets of `{0..n}` in lexicographic order.
    pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = IndexSet> {
        (0..n).combinations(k).map(IndexSet)
    }

    /// All subsets of `{0..n}` with cardinality in `sizes`, largest
    /// cardinality first and lexicographic within one cardinality.
    pub fn subsets_descending(n: usize, max: usize, min: usize) -> Vec<IndexSet> {
        let max = max.min(n);
        (min..=max)
            .rev()
            .flat_map(|k| Self::combinations(n, k))
            .collect()
    }

    /// Stacked-row indices selected by these sensors over `samples` time
    /// steps with `width` sensors per step.
    pub fn stacked(&self, width: usize, samples: usize) -> IndexSet {
        IndexSet(
            (0..samples)
                .flat_map(|t| self.0.iter().map(move |i| t * width + i))
                .collect(),
        )
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.one_based().iter().join(","))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        IndexSet::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let s = IndexSet::from_zero_based([2, 0, 2, 1]);
        assert_eq!(s.as_slice(), &[0, 1, 2]);
        assert_eq!(s.to_string(), "{1,2,3}");
        assert!(IndexSet::from_one_based(&[0]).is_err());
    }

    #[test]
    fn enumeration_order() {
        let all = IndexSet::subsets_descending(3, 2, 0);
        let shown: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            shown,
            ["{1,2}", "{1,3}", "{2,3}", "{1}", "{2}", "{3}", "{}"]
        );
    }

    #[test]
    fn stacked_rows() {
        let s = IndexSet::from_one_based(&[2]).unwrap();
        assert_eq!(s.stacked(3, 2).as_slice(), &[1, 4]);
    }

    #[test]
    fn serde_is_one_based() {
        let s = IndexSet::from_one_based(&[1, 3]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[1,3]");
        let back: IndexSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
