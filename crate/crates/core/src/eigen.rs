//! Smallest eigenpairs of graph Laplacians.
//!
//! Large operators go through a thick-restarted block Lanczos iteration with
//! full reorthogonalization. Between restarts the basis grows by the images
//! of the newest block; once it is full, a Rayleigh–Ritz projection checks
//! convergence, the lowest Ritz vectors are kept and the residuals of the
//! unconverged ones start the next cycle. Small
//! operators, and requests for so many pairs that the search space could not
//! hold them plus two blocks, are solved densely.
//!
//! For graph Laplacians the kernel is known exactly: it is spanned by the
//! indicator vectors of the connected components (scaled by `D^{1/2}` for the
//! normalized kinds). With deflation enabled, those vectors enter the search
//! space up front as exact eigenvectors, and the iteration only has to find
//! the remaining pairs. When the graph has at least `k` components no
//! iteration is needed.
//!
//! The random-walk Laplacian is handled through its similarity to the
//! symmetric one: if `S v = λ v` then `D^{-1} Δ (D^{-1/2} v) = λ D^{-1/2} v`.
//! Its returned eigenvectors are those back-transformed vectors scaled to
//! unit norm, so they are not mutually orthogonal in the Euclidean sense
//! (they are `D`-orthogonal).

use nalgebra::{DMatrix, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{Laplacian, LaplacianKind};
use crate::rng::{stream, Purpose};

/// Operators of at most this order are diagonalized densely.
pub const DENSE_THRESHOLD: usize = 64;

/// Largest matrix accepted by [`dense_reference_eigen`].
pub const DENSE_REFERENCE_MAX: usize = 512;

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Relative residual tolerance: a pair converges once
    /// `|L u - λ u| <= tol * max(1, |λ|)`.
    pub tol: f64,
    /// Budget of matrix-vector products; `None` means `10 n`.
    pub max_matvecs: Option<usize>,
    /// Seed of the random starting block.
    pub seed: u64,
    /// Seed the search with the exact kernel of graph Laplacians.
    pub deflate_kernel: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_matvecs: None,
            seed: 0,
            deflate_kernel: true,
        }
    }
}

/// The `k` lowest eigenpairs of a Laplacian. Row `i` of the vector matrix is
/// the embedded point `z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEmbedding {
    pub eigenvalues: Vec<f64>,
    /// Row-major `n x k`; column `j` is the eigenvector of `eigenvalues[j]`.
    pub vectors: Vec<f64>,
    pub residual_norms: Vec<f64>,
    /// Matrix-vector products spent (0 for the dense path).
    pub matvecs: usize,
}

impl SpectralEmbedding {
    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n(&self) -> usize {
        self.vectors.len() / self.k()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.k();
        &self.vectors[i * k..(i + 1) * k]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.vectors.iter().skip(j).step_by(self.k()).copied().collect()
    }
}

/// The `k` smallest eigenpairs of `l`, eigenvalues ascending.
pub fn smallest_eigenpairs(l: &Laplacian, k: usize, opts: &EigenOptions) -> Result<SpectralEmbedding> {
    let n = l.n();
    if k == 0 || k > n {
        return Err(Error::input(format!(
            "requested {k} eigenpairs of an operator of order {n}"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::input("eigensolver tolerance must be positive"));
    }
    let sym = l.symmetrized();
    let mut pairs = if n <= DENSE_THRESHOLD {
        dense_lowest(&sym, k)
    } else {
        let budget = opts.max_matvecs.unwrap_or(10 * n);
        let kernel = if opts.deflate_kernel {
            graph_kernel(&sym)
        } else {
            Vec::new()
        };
        if kernel.len() < k && k + 2 * (k - kernel.len() + 1) > n {
            // The basis could not hold the wanted vectors plus two blocks.
            dense_lowest(&sym, k)
        } else {
            krylov_lowest(&sym, k, opts.tol, budget, opts.seed, kernel)?
        }
    };
    if l.kind() == LaplacianKind::RandomWalk {
        back_transform(&mut pairs.columns, l.degrees());
    }
    for col in &mut pairs.columns {
        canonicalize_sign(col);
    }
    let mut vectors = vec![0.0; n * k];
    for (j, col) in pairs.columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            vectors[i * k + j] = v;
        }
    }
    Ok(SpectralEmbedding {
        eigenvalues: pairs.values,
        vectors,
        residual_norms: pairs.residuals,
        matvecs: pairs.matvecs,
    })
}

struct Pairs {
    values: Vec<f64>,
    columns: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    matvecs: usize,
}

fn dense_lowest(s: &Laplacian, k: usize) -> Pairs {
    let n = s.n();
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, &s.to_dense()));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let mut values = Vec::with_capacity(k);
    let mut columns = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut av = vec![0.0; n];
    for &c in order.iter().take(k) {
        let col: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
        let theta = eig.eigenvalues[c];
        s.matvec(&col, &mut av);
        residuals.push(residual_norm(&av, &col, theta));
        values.push(theta);
        columns.push(col);
    }
    Pairs {
        values,
        columns,
        residuals,
        matvecs: 0,
    }
}

/// Orthonormal kernel basis of a graph Laplacian, one vector per component
/// in component order; empty for operators not built from a graph.
fn graph_kernel(s: &Laplacian) -> Vec<Vec<f64>> {
    let Some(components) = s.components() else {
        return Vec::new();
    };
    let n = s.n();
    let weight = |i: usize| match s.kind() {
        LaplacianKind::Unnormalized => 1.0,
        _ => (s.degrees()[i] as f64).sqrt(),
    };
    let mut vectors = vec![vec![0.0; n]; components.k()];
    for (i, &c) in components.labels().iter().enumerate() {
        vectors[c][i] = weight(i);
    }
    for (c, v) in vectors.iter_mut().enumerate() {
        let nrm = norm(v);
        if nrm > 0.0 {
            v.iter_mut().for_each(|x| *x /= nrm);
        } else {
            // An isolated vertex under a normalized kind: its row is zero.
            let i = components
                .labels()
                .iter()
                .position(|&l| l == c)
                .expect("nonempty component");
            v[i] = 1.0;
        }
    }
    vectors
}

fn krylov_lowest(s: &Laplacian, k: usize, tol: f64, budget: usize, seed: u64, kernel: Vec<Vec<f64>>) -> Result<Pairs> {
    let n = s.n();
    if kernel.len() >= k {
        let mut pairs = Pairs {
            values: Vec::with_capacity(k),
            columns: Vec::with_capacity(k),
            residuals: Vec::with_capacity(k),
            matvecs: 0,
        };
        let mut av = vec![0.0; n];
        for v in kernel.into_iter().take(k) {
            s.matvec(&v, &mut av);
            pairs.matvecs += 1;
            let theta = dot(&v, &av);
            pairs.residuals.push(residual_norm(&av, &v, theta));
            pairs.values.push(theta);
            pairs.columns.push(v);
        }
        return Ok(pairs);
    }
    let block = (k - kernel.len() + 1).min(n);
    let max_basis = n.min((k + 4 * block).max(80));
    let keep = (k + block).max(max_basis / 2).min(max_basis - block);
    debug_assert!(keep >= k + block, "restart would drop wanted vectors");

    let mut rng = stream(seed, Purpose::Eigen, 0);
    let mut random_vector = || -> Vec<f64> { (0..n).map(|_| StandardNormal.sample(&mut rng)).collect() };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    // Projected matrix H = V^T S V, grown incrementally.
    let mut h: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    let mut matvecs = 0;
    for v in kernel {
        push_vector(s, v, &mut basis, &mut images, &mut h);
        matvecs += 1;
    }
    let mut candidates: Vec<Vec<f64>> = (0..block).map(|_| random_vector()).collect();

    loop {
        let mut added = 0;
        for cand in candidates.drain(..) {
            if basis.len() == n {
                break;
            }
            if let Some(q) = orthonormalize(&basis, cand) {
                push_vector(s, q, &mut basis, &mut images, &mut h);
                matvecs += 1;
                added += 1;
            }
        }
        // Between restarts, grow a block Krylov space from the images of the
        // vectors just added and defer the Rayleigh-Ritz step.
        if added > 0 && basis.len() < n && basis.len() + block <= max_basis && matvecs < budget {
            candidates = images[images.len() - added..].to_vec();
            continue;
        }
        if added == 0 && basis.len() < n {
            // The residual directions were numerically inside the basis;
            // widen the search with a fresh random direction.
            for _ in 0..4 {
                if let Some(q) = orthonormalize(&basis, random_vector()) {
                    push_vector(s, q, &mut basis, &mut images, &mut h);
                    matvecs += 1;
                    break;
                }
            }
        }

        let p = basis.len();
        let ritz = ritz_decomposition(&h);
        let want = (k + block).min(p);
        let mut ys = Vec::with_capacity(want);
        let mut rs = Vec::with_capacity(want);
        let mut norms = Vec::with_capacity(want);
        for i in 0..want {
            let coef = ritz.vectors.column(i);
            let y = combine(&basis, coef.as_slice());
            let mut r = combine(&images, coef.as_slice());
            let theta = ritz.values[i];
            for (ri, yi) in r.iter_mut().zip(&y) {
                *ri -= theta * yi;
            }
            norms.push(norm(&r));
            ys.push(y);
            rs.push(r);
        }
        let threshold = |i: usize| tol * ritz.values[i].abs().max(1.0);
        let converged = p >= k && (0..k).all(|i| norms[i] <= threshold(i));
        if converged || p == n {
            if p < k {
                return Err(Error::input("Krylov space collapsed below the requested size"));
            }
            ys.truncate(k);
            norms.truncate(k);
            return Ok(Pairs {
                values: ritz.values[..k].to_vec(),
                columns: ys,
                residuals: norms,
                matvecs,
            });
        }
        if matvecs >= budget {
            let worst = (0..k.min(p)).map(|i| norms[i]).fold(0.0, f64::max);
            return Err(Error::NoConvergence {
                matvecs,
                worst_residual: worst,
                tolerance: tol,
            });
        }

        // Expand with residuals of unconverged wanted pairs first, then of
        // the pairs just above them.
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(block);
        for i in 0..want {
            if next.len() == block {
                break;
            }
            if i >= k || norms[i] > threshold(i) {
                next.push(std::mem::take(&mut rs[i]));
            }
        }
        candidates = next;

        if p + candidates.len() > max_basis {
            let keep = keep.min(p);
            let mut new_basis = Vec::with_capacity(max_basis);
            let mut new_images = Vec::with_capacity(max_basis);
            for i in 0..keep {
                let coef = ritz.vectors.column(i);
                new_basis.push(if i < ys.len() {
                    std::mem::take(&mut ys[i])
                } else {
                    combine(&basis, coef.as_slice())
                });
                new_images.push(combine(&images, coef.as_slice()));
            }
            basis = new_basis;
            images = new_images;
            h = (0..keep)
                .map(|i| {
                    let mut row = vec![0.0; keep];
                    row[i] = ritz.values[i];
                    row
                })
                .collect();
        }
    }
}

struct Ritz {
    values: Vec<f64>,
    /// Columns are coefficient vectors in the current basis, ascending by value.
    vectors: DMatrix<f64>,
}

fn ritz_decomposition(h: &[Vec<f64>]) -> Ritz {
    let p = h.len();
    let m = DMatrix::from_fn(p, p, |i, j| 0.5 * (h[i][j] + h[j][i]));
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    Ritz {
        values: order.iter().map(|&c| eig.eigenvalues[c]).collect(),
        vectors: DMatrix::from_fn(p, p, |i, j| eig.eigenvectors[(i, order[j])]),
    }
}

fn push_vector(
    s: &Laplacian,
    q: Vec<f64>,
    basis: &mut Vec<Vec<f64>>,
    images: &mut Vec<Vec<f64>>,
    h: &mut Vec<Vec<f64>>,
) {
    let mut aq = vec![0.0; q.len()];
    s.matvec(&q, &mut aq);
    let mut new_row: Vec<f64> = basis.iter().map(|v| dot(v, &aq)).collect();
    new_row.push(dot(&q, &aq));
    for (row, &x) in h.iter_mut().zip(&new_row) {
        row.push(x);
    }
    h.push(new_row);
    basis.push(q);
    images.push(aq);
}

/// Two passes of classical Gram–Schmidt against `basis`; `None` if the
/// vector is (numerically) inside its span.
fn orthonormalize(basis: &[Vec<f64>], mut v: Vec<f64>) -> Option<Vec<f64>> {
    let start = norm(&v);
    if !(start > 0.0) || !start.is_finite() {
        return None;
    }
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.iter().map(|q| dot(q, &v)).collect();
        for (q, c) in basis.iter().zip(coeffs) {
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
    }
    let end = norm(&v);
    if end <= 1e-10 * start {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= end);
    Some(v)
}

fn combine(columns: &[Vec<f64>], coef: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; columns[0].len()];
    for (c, &w) in columns.iter().zip(coef) {
        if w != 0.0 {
            for (o, x) in out.iter_mut().zip(c) {
                *o += w * x;
            }
        }
    }
    out
}

fn back_transform(columns: &mut [Vec<f64>], degrees: &[usize]) {
    for col in columns {
        for (v, &d) in col.iter_mut().zip(degrees) {
            if d > 0 {
                *v /= (d as f64).sqrt();
            }
        }
        let nrm = norm(col);
        if nrm > 0.0 {
            col.iter_mut().for_each(|v| *v /= nrm);
        }
    }
}

/// Makes the first entry of magnitude above `1e-10` positive.
fn canonicalize_sign(v: &mut [f64]) {
    if let Some(&first) = v.iter().find(|x| x.abs() > 1e-10) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn residual_norm(av: &[f64], v: &[f64], theta: f64) -> f64 {
    av.iter()
        .zip(v)
        .map(|(a, x)| (a - theta * x) * (a - theta * x))
        .sum::<f64>()
        .sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Independent lanes let the compiler vectorize the reduction.
    let mut acc = [0.0; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for l in 0..8 {
            acc[l] += x[l] * y[l];
        }
    }
    acc.iter().sum::<f64>() + tail
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Full eigendecomposition of a small dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `j` belongs to `values[j]`.
    pub vectors: Vec<f64>,
}

/// Cyclic Jacobi eigendecomposition of the row-major symmetric matrix `m`.
/// Slow but simple and independent of the sparse solver; used as a test
/// oracle.
pub fn dense_reference_eigen(m: &[f64], n: usize) -> Result<DenseEigen> {
    if n == 0 || n > DENSE_REFERENCE_MAX {
        return Err(Error::input(format!(
            "dense reference solver accepts 1 <= n <= {DENSE_REFERENCE_MAX}, got {n}"
        )));
    }
    if m.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            actual: m.len(),
        });
    }
    let mut a = m.to_vec();
    for i in 0..n {
        for j in 0..i {
            if (a[i * n + j] - a[j * n + i]).abs() > 1e-12 * (1.0 + a[i * n + j].abs()) {
                return Err(Error::input(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[p * n + r];
                    let aqr = a[q * n + r];
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]).then(x.cmp(&y)));
    let values = order.iter().map(|&c| a[c * n + c]).collect();
    let mut vectors = vec![0.0; n * n];
    for (j, &c) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + j] = v[r * n + c];
        }
    }
    Ok(DenseEigen { values, vectors })
}
