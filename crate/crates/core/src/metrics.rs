//! Pair-counting agreement between two partitions: Rand Index and Adjusted
//! Rand Index.
//!
//! All pair counts are exact 128-bit integers; the only rounding is the
//! final division.

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Joint cluster counts `n_ij = |C_i ∩ C'_j|` of two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    /// Row-major `rows x cols`.
    pub counts: Vec<u64>,
    pub rows: usize,
    pub cols: usize,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }
}

pub fn contingency(p1: &Partition, p2: &Partition) -> Result<ContingencyTable> {
    if p1.len() != p2.len() {
        return Err(Error::DimensionMismatch {
            expected: p1.len(),
            actual: p2.len(),
        });
    }
    if p1.is_empty() {
        return Err(Error::input("cannot compare empty partitions"));
    }
    let (rows, cols) = (p1.k(), p2.k());
    let mut counts = vec![0u64; rows * cols];
    for (&a, &b) in p1.labels().iter().zip(p2.labels()) {
        counts[a * cols + b] += 1;
    }
    let row_sums = (0..rows)
        .map(|i| counts[i * cols..(i + 1) * cols].iter().sum())
        .collect();
    let col_sums = (0..cols)
        .map(|j| (0..rows).map(|i| counts[i * cols + j]).sum())
        .collect();
    Ok(ContingencyTable {
        counts,
        rows,
        cols,
        row_sums,
        col_sums,
        total: p1.len() as u64,
    })
}

fn choose2(x: u64) -> i128 {
    let x = x as i128;
    x * (x - 1) / 2
}

/// Exact pair counts behind both indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// `C(n, 2)`.
    pub pairs: i128,
    /// `Σ C(n_ij, 2)`: pairs together in both partitions.
    pub together_both: i128,
    /// `Σ C(a_i, 2)`.
    pub together_first: i128,
    /// `Σ C(b_j, 2)`.
    pub together_second: i128,
}

impl PairCounts {
    pub fn from_table(t: &ContingencyTable) -> Self {
        Self {
            pairs: choose2(t.total),
            together_both: t.counts.iter().map(|&c| choose2(c)).sum(),
            together_first: t.row_sums.iter().map(|&c| choose2(c)).sum(),
            together_second: t.col_sums.iter().map(|&c| choose2(c)).sum(),
        }
    }

    /// Pairs on which the partitions agree (together in both or apart in both).
    pub fn agreeing(&self) -> i128 {
        self.pairs + 2 * self.together_both - self.together_first - self.together_second
    }

    /// ARI as an unreduced fraction `(numerator, denominator)`, scaled by
    /// `2 C(n,2)` to stay integral.
    pub fn ari_fraction(&self) -> (i128, i128) {
        let (n2, ab) = (self.pairs, self.together_first * self.together_second);
        let num = 2 * n2 * self.together_both - 2 * ab;
        let den = n2 * (self.together_first + self.together_second) - 2 * ab;
        (num, den)
    }
}

fn pair_counts(p1: &Partition, p2: &Partition) -> Result<PairCounts> {
    let t = contingency(p1, p2)?;
    if t.total < 2 {
        return Err(Error::input("pair-counting indices need at least two items"));
    }
    Ok(PairCounts::from_table(&t))
}

/// Fraction of item pairs on which the two partitions agree.
pub fn rand_index(p1: &Partition, p2: &Partition) -> Result<f64> {
    let c = pair_counts(p1, p2)?;
    Ok(c.agreeing() as f64 / c.pairs as f64)
}

/// Adjusted Rand Index. When the chance-corrected denominator vanishes (both
/// partitions all-singletons or both one block) the result is 1 if they group
/// items identically and 0 otherwise.
pub fn adjusted_rand_index(p1: &Partition, p2: &Partition) -> Result<f64> {
    let c = pair_counts(p1, p2)?;
    let (num, den) = c.ari_fraction();
    if den == 0 {
        return Ok(if p1.same_grouping(p2) { 1.0 } else { 0.0 });
    }
    Ok(num as f64 / den as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(labels: &[usize]) -> Partition {
        Partition::from_labels(labels.to_vec()).unwrap()
    }

    #[test]
    fn contingency_examples() {
        let a = part(&[0, 0, 1, 1]);
        let t = contingency(&a, &a).unwrap();
        assert_eq!(t.counts, vec![2, 0, 0, 2]);
        let b = part(&[0, 1, 0, 1]);
        let t = contingency(&a, &b).unwrap();
        assert_eq!(t.counts, vec![1, 1, 1, 1]);
        assert_eq!(t.row_sums, vec![2, 2]);
        let s = part(&[0, 1, 2, 3]);
        let t = contingency(&a, &s).unwrap();
        assert!(t.col_sums.iter().all(|&c| c == 1));
        assert!(contingency(&a, &part(&[0, 1])).is_err());
    }

    #[test]
    fn crossed_pairs() {
        let a = part(&[0, 0, 1, 1]);
        let b = part(&[0, 1, 0, 1]);
        assert_eq!(adjusted_rand_index(&a, &b).unwrap(), -0.5);
        assert_eq!(rand_index(&a, &b).unwrap(), 1.0 / 3.0);
        let c = PairCounts::from_table(&contingency(&a, &b).unwrap());
        assert_eq!(c.agreeing(), 2);
    }

    #[test]
    fn identical_and_trivial() {
        let a = part(&[0, 1, 1, 2, 0]);
        assert_eq!(adjusted_rand_index(&a, &a).unwrap(), 1.0);
        assert_eq!(rand_index(&a, &a).unwrap(), 1.0);
        let one = part(&[0, 0, 0]);
        let singles = part(&[0, 1, 2]);
        assert_eq!(adjusted_rand_index(&one, &one).unwrap(), 1.0);
        assert_eq!(adjusted_rand_index(&singles, &singles).unwrap(), 1.0);
        assert_eq!(adjusted_rand_index(&one, &singles).unwrap(), 0.0);
        assert_eq!(rand_index(&one, &singles).unwrap(), 0.0);
    }

    #[test]
    fn needs_two_items() {
        let a = part(&[0]);
        assert!(rand_index(&a, &a).is_err());
        assert!(adjusted_rand_index(&a, &a).is_err());
    }

    #[test]
    fn large_n_does_not_overflow() {
        let n = 70_000;
        let a = part(&(0..n).map(|i| i % 10).collect::<Vec<_>>());
        let b = part(&(0..n).map(|i| (i / 7) % 10).collect::<Vec<_>>());
        let ari = adjusted_rand_index(&a, &b).unwrap();
        assert!(ari.is_finite() && ari.abs() < 0.1);
        assert_eq!(adjusted_rand_index(&a, &a).unwrap(), 1.0);
    }
}
