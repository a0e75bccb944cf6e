use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{level, SeedSpec};

/// Eigenpairs sorted by decreasing `|lambda|` (ties: larger `lambda` first).
/// `vectors` is `n x k` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub n: usize,
}

impl EigenPairs {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn vector_entry(&self, i: usize, c: usize) -> f64 {
        self.vectors[i * self.k() + c]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.vector_entry(i, c)).collect()
    }
}

/// Residual tolerance for the iterative solver.
pub const LANCZOS_TOLERANCE: f64 = 1e-10;

/// Top-`k` eigenpairs of a dense symmetric row-major matrix.
pub fn dense_top_k(n: usize, matrix: &[f64], k: usize) -> EigenPairs {
    let m = DMatrix::from_row_slice(n, n, matrix);
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| by_magnitude(eig.eigenvalues[a], eig.eigenvalues[b]));
    let cols: Vec<Vec<f64>> = order[..k].iter().map(|&c| eig.eigenvectors.column(c).iter().copied().collect()).collect();
    assemble(n, order[..k].iter().map(|&c| eig.eigenvalues[c]).collect(), cols)
}

/// Top-`k` eigenpairs of the symmetric operator `apply` (y = M x) by
/// Lanczos with full reorthogonalization. The Krylov space grows until the
/// `k` wanted Ritz pairs have residual at most `LANCZOS_TOLERANCE * max(1, |lambda_1|)`;
/// on breakdown it continues from a fresh vector orthogonal to the basis.
/// Exact multiplicities reachable only through a breakdown are recovered
/// that way; otherwise a single start vector sees one copy of each eigenvalue.
/// Gives up after `10 n` steps.
pub fn lanczos_top_k(n: usize, k: usize, apply: impl Fn(&[f64], &mut [f64])) -> Result<EigenPairs> {
    assert!(k >= 1 && k <= n);
    let mut rng = SeedSpec::new(0x6c61_6e63_7a6f_7321).stream(level::LANCZOS, n as u64);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = random_unit(n, &mut rng, &basis);
    let mut w = vec![0.0; n];
    let cap = 10 * n;
    let mut steps = 0;
    let mut next_check = (2 * k + 20).min(n);
    let mut last_residual = f64::INFINITY;
    loop {
        apply(&q, &mut w);
        steps += 1;
        let a = dot(&q, &w);
        axpy(-a, &q, &mut w);
        if let Some(prev) = basis.last() {
            axpy(-beta[beta.len() - 1], prev, &mut w);
        }
        basis.push(q.clone());
        alpha.push(a);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
        }
        let b = norm(&w);
        let m = basis.len();
        let full = m == n;
        let scale = alpha.iter().map(|x| x.abs()).fold(1.0, f64::max);
        let breakdown = b <= 1e-12 * scale;
        // A breakdown only means the current Krylov space is invariant; other
        // copies of a repeated eigenvalue may lie outside it, so keep going.
        if (m >= next_check && !breakdown) || full {
            let (values, coeffs, residuals) = ritz(&alpha, &beta, b, k.min(m));
            let tol = LANCZOS_TOLERANCE * values.first().map_or(1.0, |v| v.abs().max(1.0));
            let worst = residuals.iter().copied().fold(0.0, f64::max);
            last_residual = worst;
            if values.len() == k && (worst <= tol || full) {
                let cols: Vec<Vec<f64>> = coeffs
                    .iter()
                    .map(|s| {
                        let mut v = vec![0.0; n];
                        for (coef, bv) in s.iter().zip(&basis) {
                            axpy(*coef, bv, &mut v);
                        }
                        let nv = norm(&v);
                        v.iter_mut().for_each(|x| *x /= nv);
                        v
                    })
                    .collect();
                return Ok(assemble(n, values, cols));
            }
            next_check = (m + 10).min(n);
        }
        if steps >= cap {
            return Err(Error::NoConvergence { iterations: steps, residual: last_residual });
        }
        if breakdown {
            beta.push(0.0);
            q = random_unit(n, &mut rng, &basis);
        } else {
            beta.push(b);
            q = w.iter().map(|x| x / b).collect();
        }
    }
}

/// Ritz values, their coefficient vectors in the Lanczos basis, and
/// residual norms `|b * s_last|`, for the `k` largest in magnitude.
fn ritz(alpha: &[f64], beta: &[f64], b: f64, k: usize) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| by_magnitude(eig.eigenvalues[x], eig.eigenvalues[y]));
    let picked = &order[..k];
    let values = picked.iter().map(|&c| eig.eigenvalues[c]).collect();
    let coeffs: Vec<Vec<f64>> =
        picked.iter().map(|&c| eig.eigenvectors.column(c).iter().copied().collect()).collect();
    let residuals = coeffs.iter().map(|s: &Vec<f64>| (b * s[m - 1]).abs()).collect();
    (values, coeffs, residuals)
}

fn by_magnitude(a: f64, b: f64) -> std::cmp::Ordering {
    b.abs().total_cmp(&a.abs()).then(b.total_cmp(&a))
}

/// Packs columns row-major and fixes each sign so the largest-magnitude
/// entry (lowest index on ties) is positive.
fn assemble(n: usize, values: Vec<f64>, mut cols: Vec<Vec<f64>>) -> EigenPairs {
    for col in &mut cols {
        let mut pivot = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[pivot].abs() + 1e-12 {
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let k = values.len();
    let mut vectors = vec![0.0; n * k];
    for (c, col) in cols.iter().enumerate() {
        for i in 0..n {
            vectors[i * k + c] = col[i];
        }
    }
    EigenPairs { values, vectors, n }
}

fn random_unit<R: Rng>(n: usize, rng: &mut R, basis: &[Vec<f64>]) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return v;
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

#[inline]
fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply_dense(n: usize, m: &[f64]) -> impl Fn(&[f64], &mut [f64]) + '_ {
        move |x, y| {
            for i in 0..n {
                y[i] = dot(&m[i * n..(i + 1) * n], x);
            }
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        let n = 4;
        let m: Vec<f64> = (0..16).map(|k| if k / 4 == k % 4 { 0.0 } else { 1.0 }).collect();
        let e = dense_top_k(n, &m, 2);
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1].abs() - 1.0).abs() < 1e-12);
        for i in 0..4 {
            assert!((e.vector_entry(i, 0) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn lanczos_matches_dense() {
        let n = 40;
        let mut rng = SeedSpec::new(5).stream(0, 0);
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = if rng.random::<f64>() < 0.2 { 1.0 } else { 0.0 };
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        let dense = dense_top_k(n, &m, 4);
        let lanczos = lanczos_top_k(n, 4, apply_dense(n, &m)).unwrap();
        for c in 0..4 {
            assert!((dense.values[c] - lanczos.values[c]).abs() < 1e-8);
            let d = dense.column(c);
            let l = lanczos.column(c);
            assert!((dot(&d, &l).abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn lanczos_repeated_eigenvalues() {
        // Two disjoint K5: eigenvalue 4 twice.
        let n = 10;
        let m: Vec<f64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                if i != j && i / 5 == j / 5 { 1.0 } else { 0.0 }
            })
            .collect();
        let e = lanczos_top_k(n, 2, apply_dense(n, &m)).unwrap();
        assert!((e.values[0] - 4.0).abs() < 1e-9 && (e.values[1] - 4.0).abs() < 1e-9);
        assert!(dot(&e.column(0), &e.column(1)).abs() < 1e-8);
    }
}
