//! Smallest-eigenvalue solvers for real symmetric operators: dense
//! (nalgebra) for small dimensions, Lanczos with full reorthogonalization
//! for the larger truncated Fock spaces.

use nalgebra::DMatrix;

/// Sparse symmetric matrix in triplet-assembled CSR form.
pub struct SparseSym {
    pub dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSym {
    /// Build from triplets; both (i,j) and (j,i) must be supplied for
    /// off-diagonal entries. Duplicate positions are summed.
    pub fn from_triplets(dim: usize, mut trip: Vec<(usize, usize, f64)>) -> Self {
        trip.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(trip.len());
        for (i, j, v) in trip {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        let mut row_ptr = vec![0usize; dim + 1];
        for &(i, _, _) in &merged {
            row_ptr[i + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let cols = merged.iter().map(|&(_, j, _)| j).collect();
        let vals = merged.iter().map(|&(_, _, v)| v).collect();
        SparseSym { dim, row_ptr, cols, vals }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.dim {
            let mut acc = 0.0;
            for t in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[t] * x[self.cols[t]];
            }
            y[i] = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for t in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[t])] += self.vals[t];
            }
        }
        m
    }
}

/// Smallest eigenvalue by dense symmetric eigendecomposition.
pub fn dense_smallest(m: &DMatrix<f64>) -> f64 {
    let eig = m.clone().symmetric_eigen();
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Smallest eigenvalue by Lanczos with full reorthogonalization.
/// Deterministic start vector; converges fast for ground states.
pub fn lanczos_smallest(op: &SparseSym, max_iter: usize, tol: f64) -> f64 {
    let n = op.dim;
    let m = max_iter.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    // deterministic pseudo-random start
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = (i as f64 + 1.0) * 0.618_033_988_749_895;
            (x - x.floor()) - 0.5
        })
        .collect();
    normalize(&mut v);
    let mut alphas = Vec::with_capacity(m);
    let mut betas: Vec<f64> = Vec::with_capacity(m);
    let mut w = vec![0.0; n];
    let mut prev_ritz = f64::INFINITY;
    for it in 0..m {
        op.matvec(&v, &mut w);
        let alpha = dot(&v, &w);
        alphas.push(alpha);
        for (wi, vi) in w.iter_mut().zip(v.iter()) {
            *wi -= alpha * vi;
        }
        if let Some(prev) = basis.last() {
            let b = *betas.last().unwrap();
            for (wi, pi) in w.iter_mut().zip(prev.iter()) {
                *wi -= b * pi;
            }
        }
        basis.push(v.clone());
        // full reorthogonalization
        for q in &basis {
            let c = dot(&w, q);
            for (wi, qi) in w.iter_mut().zip(q.iter()) {
                *wi -= c * qi;
            }
        }
        let beta = norm(&w);
        if it >= 8 && it % 4 == 0 || beta < 1e-13 || it + 1 == m {
            let ritz = tridiag_smallest(&alphas, &betas);
            if (ritz - prev_ritz).abs() < tol || beta < 1e-13 {
                return ritz;
            }
            prev_ritz = ritz;
        }
        if beta < 1e-13 {
            break;
        }
        betas.push(beta);
        v = w.iter().map(|&x| x / beta).collect();
    }
    tridiag_smallest(&alphas, &betas)
}

fn tridiag_smallest(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    dense_smallest(&t)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    for x in a {
        *x /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lanczos_matches_dense_on_random_sparse() {
        // banded test matrix with known assembly
        let n = 120;
        let mut trip = Vec::new();
        for i in 0..n {
            let d = ((i * 2654435761) % 97) as f64 / 10.0 - 4.0;
            trip.push((i, i, d));
            if i + 1 < n {
                let o = ((i * 40503) % 89) as f64 / 20.0 - 2.0;
                trip.push((i, i + 1, o));
                trip.push((i + 1, i, o));
            }
        }
        let sp = SparseSym::from_triplets(n, trip);
        let dense = dense_smallest(&sp.to_dense());
        let lz = lanczos_smallest(&sp, 120, 1e-12);
        assert!((dense - lz).abs() < 1e-9, "dense {dense} lanczos {lz}");
    }
}
