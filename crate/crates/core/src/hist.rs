//! Sorted value histograms that serialize as `(value, count)` pairs.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeSeq, Serializer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram<K: Ord = u64>(BTreeMap<K, u64>);

impl<K: Ord> Default for Histogram<K> {
    fn default() -> Self {
        Histogram(BTreeMap::new())
    }
}

impl<K: Ord + Clone> Histogram<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: K) {
        self.add_n(key, 1);
    }

    pub fn add_n(&mut self, key: K, n: u64) {
        if n > 0 {
            *self.0.entry(key).or_insert(0) += n;
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (k, v) in other.0 {
            self.add_n(k, v);
        }
        self
    }

    pub fn get(&self, key: &K) -> u64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &u64)> {
        self.0.iter()
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every observed key is in `allowed`.
    pub fn only(&self, allowed: &[K]) -> bool {
        self.0.keys().all(|k| allowed.contains(k))
    }

    pub fn as_map(&self) -> &BTreeMap<K, u64> {
        &self.0
    }
}

impl<K: Ord + Clone> FromIterator<K> for Histogram<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut h = Histogram::new();
        for k in iter {
            h.add(k);
        }
        h
    }
}

impl<K: Ord + Serialize> Serialize for Histogram<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for pair in &self.0 {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_order_independent() {
        let a: Histogram = [1, 2, 2, 5].into_iter().collect();
        let b: Histogram = [2, 7].into_iter().collect();
        let ab = a.clone().merge(b.clone());
        assert_eq!(ab, b.merge(a));
        assert_eq!(ab.get(&2), 3);
        assert_eq!(ab.total(), 6);
        assert!(ab.only(&[1, 2, 5, 7]));
        assert!(!ab.only(&[1, 2]));
    }
}
