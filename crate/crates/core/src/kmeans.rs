//! k-means with k-means++ seeding, Lloyd iterations and best-of-restarts.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::squared_distance;
use crate::partition::Partition;
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iter: 300,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Row-major `k x p`; row `j` is the centroid of cluster `j`.
    pub centroids: Vec<f64>,
    pub assignment: Partition,
    pub inertia: f64,
    /// Lloyd iterations of the winning restart.
    pub iterations: usize,
    pub restarts_used: usize,
    /// Inertia after seeding and after every Lloyd iteration of the winning
    /// restart.
    pub inertia_history: Vec<f64>,
}

/// Clusters the `n` rows of the row-major `n x p` array `rows` into `k` groups.
///
/// Each restart `r` seeds from its own stream `(seed, KMeans, r)`, so the
/// result does not depend on how restarts are scheduled. The restart with
/// the lowest final inertia wins, ties going to the lower restart number.
pub fn kmeans(rows: &[f64], p: usize, k: usize, opts: &KMeansOptions) -> Result<KMeansResult> {
    if p == 0 || rows.is_empty() || rows.len() % p != 0 {
        return Err(Error::input(format!(
            "{} values do not form rows of width {p}",
            rows.len()
        )));
    }
    let n = rows.len() / p;
    if k == 0 || k > n {
        return Err(Error::input(format!("k = {k} clusters requested for {n} rows")));
    }
    if opts.restarts == 0 {
        return Err(Error::input("k-means needs at least one restart"));
    }
    if rows.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("k-means input has non-finite values"));
    }
    let data = Rows { values: rows, p };
    let runs: Vec<Run> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| lloyd(&data, k, opts.max_iter, opts.seed, r as u64))
        .collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.inertia < a.inertia { b } else { a })
        .expect("at least one restart");

    let partition = Partition::new(best.labels, k)?;
    let canonical = partition.canonicalize();
    let mut centroids = vec![0.0; k * p];
    for (old, new) in partition.labels().iter().zip(canonical.labels()) {
        centroids[new * p..(new + 1) * p].copy_from_slice(&best.centroids[old * p..(old + 1) * p]);
    }
    Ok(KMeansResult {
        centroids,
        assignment: canonical,
        inertia: best.inertia,
        iterations: best.iterations,
        restarts_used: opts.restarts,
        inertia_history: best.history,
    })
}

struct Rows<'a> {
    values: &'a [f64],
    p: usize,
}

impl Rows<'_> {
    fn len(&self) -> usize {
        self.values.len() / self.p
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }
}

struct Run {
    labels: Vec<usize>,
    centroids: Vec<f64>,
    inertia: f64,
    iterations: usize,
    history: Vec<f64>,
}

fn lloyd(data: &Rows<'_>, k: usize, max_iter: usize, seed: u64, restart: u64) -> Run {
    let p = data.p;
    let mut centroids = seed_plus_plus(data, k, seed, restart);
    let mut labels = vec![0; data.len()];
    let mut dists = vec![0.0; data.len()];
    assign(data, &centroids, k, &mut labels, &mut dists);
    repair_empty(data, &mut centroids, k, &mut labels, &mut dists);
    let mut history = vec![dists.iter().sum()];
    let mut iterations = 0;
    let mut next = labels.clone();
    for it in 1..=max_iter {
        update_means(data, &labels, k, &mut centroids);
        assign(data, &centroids, k, &mut next, &mut dists);
        repair_empty(data, &mut centroids, k, &mut next, &mut dists);
        history.push(dists.iter().sum());
        iterations = it;
        if next == labels {
            break;
        }
        std::mem::swap(&mut labels, &mut next);
    }
    debug_assert_eq!(centroids.len(), k * p);
    Run {
        labels: next,
        centroids,
        inertia: *history.last().expect("history is never empty"),
        iterations,
        history,
    }
}

fn seed_plus_plus(data: &Rows<'_>, k: usize, seed: u64, restart: u64) -> Vec<f64> {
    let n = data.len();
    let mut rng = stream(seed, Purpose::KMeans, restart);
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.random_range(0..n));
    let mut d2: Vec<f64> = (0..n)
        .map(|i| squared_distance(data.row(i), data.row(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave the target just past the accumulated sum.
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).expect("positive total"))
        } else {
            // Every row coincides with a chosen centroid.
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n")
        };
        chosen.push(pick);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_distance(data.row(i), data.row(pick)));
        }
    }
    chosen.iter().flat_map(|&i| data.row(i).iter().copied()).collect()
}

/// Nearest centroid per row; strict `<` gives ties to the lower index.
fn assign(data: &Rows<'_>, centroids: &[f64], k: usize, labels: &mut [usize], dists: &mut [f64]) {
    let p = data.p;
    for (i, (l, d)) in labels.iter_mut().zip(dists.iter_mut()).enumerate() {
        let row = data.row(i);
        let mut best = (0, f64::INFINITY);
        for j in 0..k {
            let dj = squared_distance(row, &centroids[j * p..(j + 1) * p]);
            if dj < best.1 {
                best = (j, dj);
            }
        }
        *l = best.0;
        *d = best.1;
    }
}

/// Gives every empty cluster the row farthest from its own centroid, taken
/// from a cluster that has more than one member (lowest index on ties).
fn repair_empty(data: &Rows<'_>, centroids: &mut [f64], k: usize, labels: &mut [usize], dists: &mut [f64]) {
    let p = data.p;
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for j in 0..k {
        if sizes[j] > 0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, &d) in dists.iter().enumerate() {
            if sizes[labels[i]] > 1 && best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let Some((i, _)) = best else { break };
        sizes[labels[i]] -= 1;
        sizes[j] = 1;
        labels[i] = j;
        dists[i] = 0.0;
        centroids[j * p..(j + 1) * p].copy_from_slice(data.row(i));
    }
}

fn update_means(data: &Rows<'_>, labels: &[usize], k: usize, centroids: &mut [f64]) {
    let p = data.p;
    let mut sums = vec![0.0; k * p];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, v) in sums[l * p..(l + 1) * p].iter_mut().zip(data.row(i)) {
            *s += v;
        }
    }
    for j in 0..k {
        if counts[j] > 0 {
            for c in 0..p {
                centroids[j * p + c] = sums[j * p + c] / counts[j] as f64;
            }
        }
    }
}
