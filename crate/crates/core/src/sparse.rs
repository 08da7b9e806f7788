//! Compressed sparse row matrices and a sparse Cholesky factorization.
//!
//! The factorization uses a minimum-degree fill-reducing ordering, an
//! elimination tree for the symbolic pattern, and up-looking numeric
//! factorization. It is deterministic: ties in the ordering break on the
//! lowest index.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Square sparse matrix in CSR form with sorted, duplicate-free columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOperator {
    /// Assembles from `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut row_offsets = alloc::vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet out of range");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_offsets[r + 1] += row_offsets[r];
        }
        Self { dim, row_offsets, cols, vals }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_triplets(values.len(), values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Non-zeros of `row` as `(col, value)`.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[row]..self.row_offsets[row + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_offsets[row]..self.row_offsets[row + 1];
        match self.cols[range.clone()].binary_search(&col) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate().take(self.dim) {
            let mut acc = 0.0;
            for k in self.row_offsets[r]..self.row_offsets[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    /// `x^T A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = alloc::vec![0.0; self.dim];
        self.mul_vec(x, &mut y);
        y.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `self + s * other` on the union pattern.
    pub fn add_scaled(&self, s: f64, other: &SparseOperator) -> SparseOperator {
        let mut t: Vec<(usize, usize, f64)> = self.triplets().collect();
        t.extend(other.triplets().map(|(r, c, v)| (r, c, s * v)));
        Self::from_triplets(self.dim, t)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.row(r).map(|(_, v)| v).sum()).collect()
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        self.triplets().map(|(r, c, v)| (v - self.get(c, r)).abs()).fold(0.0, f64::max)
    }
}

/// `P A P^T = L L^T` for a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    /// `perm[new] = old`.
    perm: Vec<usize>,
    /// Column-major strictly-lower-plus-diagonal factor; diagonal first per column.
    col_offsets: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<f64>,
}

const NONE: usize = usize::MAX;

impl Cholesky {
    pub fn factor(a: &SparseOperator) -> Result<Self> {
        let n = a.dim();
        let perm = minimum_degree_order(a);
        let mut inv = alloc::vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        // Upper triangle of the permuted matrix, stored by column: column k
        // holds entries (i, k) with i <= k.
        let mut upper: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); n];
        for (r, c, v) in a.triplets() {
            let (i, k) = (inv[r], inv[c]);
            if i <= k {
                upper[k].push((i, v));
            }
        }
        for col in upper.iter_mut() {
            col.sort_unstable_by_key(|e| e.0);
        }

        let parent = elimination_tree(&upper);

        // Column counts of L via row subtrees.
        let mut counts = alloc::vec![1usize; n];
        let mut mark = alloc::vec![NONE; n];
        let mut stack = Vec::with_capacity(n);
        for k in 0..n {
            ereach(&upper[k], k, &parent, &mut mark, &mut stack);
            for &i in &stack {
                counts[i] += 1;
            }
        }
        let mut col_offsets = alloc::vec![0usize; n + 1];
        for j in 0..n {
            col_offsets[j + 1] = col_offsets[j] + counts[j];
        }
        let nnz = col_offsets[n];
        let mut rows = alloc::vec![0usize; nnz];
        let mut vals = alloc::vec![0.0f64; nnz];
        let mut next = col_offsets.clone();

        let mut x = alloc::vec![0.0f64; n];
        mark.iter_mut().for_each(|m| *m = NONE);
        for k in 0..n {
            ereach(&upper[k], k, &parent, &mut mark, &mut stack);
            for &(i, v) in &upper[k] {
                x[i] = v;
            }
            let mut d = x[k];
            x[k] = 0.0;
            for &i in &stack {
                let lki = x[i] / vals[col_offsets[i]];
                x[i] = 0.0;
                for p in col_offsets[i] + 1..next[i] {
                    x[rows[p]] -= vals[p] * lki;
                }
                d -= lki * lki;
                let p = next[i];
                next[i] += 1;
                rows[p] = k;
                vals[p] = lki;
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: perm[k] });
            }
            let p = next[k];
            next[k] += 1;
            rows[p] = k;
            vals[p] = sqrt(d);
        }
        Ok(Self { dim: n, perm, col_offsets, rows, vals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factor_nnz(&self) -> usize {
        self.vals.len()
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64], work: &mut Vec<f64>) {
        let n = self.dim;
        work.clear();
        work.extend(self.perm.iter().map(|&old| b[old]));
        // L y = P b
        for j in 0..n {
            let start = self.col_offsets[j];
            let yj = work[j] / self.vals[start];
            work[j] = yj;
            for p in start + 1..self.col_offsets[j + 1] {
                work[self.rows[p]] -= self.vals[p] * yj;
            }
        }
        // L^T z = y
        for j in (0..n).rev() {
            let start = self.col_offsets[j];
            let mut acc = work[j];
            for p in start + 1..self.col_offsets[j + 1] {
                acc -= self.vals[p] * work[self.rows[p]];
            }
            work[j] = acc / self.vals[start];
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = work[new];
        }
    }
}

fn elimination_tree(upper: &[Vec<(usize, f64)>]) -> Vec<usize> {
    let n = upper.len();
    let mut parent = alloc::vec![NONE; n];
    let mut ancestor = alloc::vec![NONE; n];
    for k in 0..n {
        for &(i0, _) in &upper[k] {
            let mut i = i0;
            while i != NONE && i < k {
                let next = ancestor[i];
                ancestor[i] = k;
                if next == NONE {
                    parent[i] = k;
                }
                i = next;
            }
        }
    }
    parent
}

/// Pattern of row `k` of L (excluding the diagonal), left in `stack`.
fn ereach(col: &[(usize, f64)], k: usize, parent: &[usize], mark: &mut [usize], stack: &mut Vec<usize>) {
    stack.clear();
    mark[k] = k;
    for &(i0, _) in col {
        if i0 >= k {
            continue;
        }
        let mut i = i0;
        while mark[i] != k {
            stack.push(i);
            mark[i] = k;
            i = parent[i];
        }
    }
    // Increasing index is a valid topological order of the subtree.
    stack.sort_unstable();
}

/// Greedy minimum-degree ordering on the explicit elimination graph.
/// Returns `perm` with `perm[new] = old`.
fn minimum_degree_order(a: &SparseOperator) -> Vec<usize> {
    let n = a.dim();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|r| a.row(r).map(|(c, _)| c).filter(|&c| c != r).collect())
        .collect();
    for r in 0..n {
        let neighbors: Vec<usize> = adj[r].iter().copied().collect();
        for c in neighbors {
            adj[c].insert(r);
        }
    }
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (adj[v].len(), v)).collect();
    let mut eliminated = alloc::vec![false; n];
    let mut perm = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        eliminated[v] = true;
        perm.push(v);
        let neighbors: Vec<usize> = core::mem::take(&mut adj[v]).into_iter().collect();
        for &u in &neighbors {
            queue.remove(&(adj[u].len(), u));
            adj[u].remove(&v);
            for &w in &neighbors {
                if w != u {
                    adj[u].insert(w);
                }
            }
            queue.insert((adj[u].len(), u));
        }
        debug_assert!(neighbors.iter().all(|&u| !eliminated[u]));
    }
    perm
}
