use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An assignment of `n` items to clusters `0..k`.
///
/// A partition is *degenerate* when fewer than `k` of its clusters are
/// nonempty. That can happen when the clustering step collapses (tiny anchor
/// sets, unlucky seeding); it is recorded rather than treated as an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
    degenerate: bool,
}

impl Partition {
    /// Wraps `labels`, which must lie in `0..k`.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("a partition needs at least one cluster"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::input(format!("label {bad} out of range for k = {k}")));
        }
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        let degenerate = seen.iter().any(|s| !s);
        Ok(Self { labels, k, degenerate })
    }

    /// Uses `max(label) + 1` as the cluster count.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(1, |m| m + 1);
        Self::new(labels, k)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Number of nonempty clusters.
    pub fn occupied(&self) -> usize {
        self.cluster_sizes().iter().filter(|&&s| s > 0).count()
    }

    /// Relabels clusters in order of their first member, so label 0 is the
    /// cluster of item 0, label 1 the next cluster encountered, and so on.
    /// Empty clusters take the highest labels.
    pub fn canonicalize(&self) -> Self {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        Self {
            labels,
            k: self.k,
            degenerate: self.degenerate,
        }
    }

    /// True if both partitions group items identically, whatever the label names.
    pub fn same_grouping(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonicalize().labels == other.canonicalize().labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_follows_first_member() {
        let p = Partition::new(vec![2, 2, 0, 1, 0], 3).unwrap();
        assert_eq!(p.canonicalize().labels(), &[0, 0, 1, 2, 1]);
        assert!(!p.is_degenerate());
    }

    #[test]
    fn empty_cluster_marks_degenerate() {
        let p = Partition::new(vec![0, 2, 0], 3).unwrap();
        assert!(p.is_degenerate());
        assert_eq!(p.occupied(), 2);
        assert_eq!(p.cluster_sizes(), vec![2, 0, 1]);
        assert_eq!(p.canonicalize().labels(), &[0, 1, 0]);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Partition::new(vec![0, 3], 3).is_err());
        assert!(Partition::new(vec![], 0).is_err());
    }

    #[test]
    fn grouping_ignores_names() {
        let a = Partition::from_labels(vec![1, 1, 0]).unwrap();
        let b = Partition::from_labels(vec![0, 0, 1]).unwrap();
        assert!(a.same_grouping(&b));
        let c = Partition::from_labels(vec![0, 1, 1]).unwrap();
        assert!(!a.same_grouping(&c));
    }
}
