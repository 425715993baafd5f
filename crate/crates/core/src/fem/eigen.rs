//! Lowest eigenpairs of K u = mu M u by shifted block inverse iteration.

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use faer::Side;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::assemble::SymCsr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// K + shift * M is factored; any positive value keeps it definite.
    pub shift: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { shift: 1.0, tol: 1e-8, max_iter: 2000, seed: 0x5eed }
    }
}

#[derive(Debug, Clone)]
pub struct GevpSolution {
    pub values: Vec<f64>,
    /// M-orthonormal eigenvectors in dof ordering.
    pub vectors: Vec<Vec<f64>>,
    /// |K u - mu M u| / |M u|.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

fn factor(a: &SymCsr) -> Result<faer::sparse::linalg::solvers::Llt<usize, f64>> {
    let mut trip = Vec::with_capacity(a.data.len() / 2 + a.n);
    for i in 0..a.n {
        for p in a.indptr[i]..a.indptr[i + 1] {
            let j = a.indices[p];
            if j >= i {
                trip.push(Triplet::new(j, i, a.data[p]));
            }
        }
    }
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(a.n, a.n, &trip).map_err(|_| Error::Factorization(a.n))?;
    mat.sp_cholesky(Side::Lower).map_err(|_| Error::Factorization(a.n))
}

fn apply_block(a: &SymCsr, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.par_iter().map(|col| a.apply(col)).collect()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn gram(x: &[Vec<f64>], y: &[Vec<f64>]) -> DMatrix<f64> {
    let p = x.len();
    let entries: Vec<(usize, usize, f64)> =
        (0..p).flat_map(|i| (i..p).map(move |j| (i, j))).collect::<Vec<_>>().par_iter().map(|&(i, j)| (i, j, dot(&x[i], &y[j]))).collect();
    let mut g = DMatrix::zeros(p, p);
    for (i, j, v) in entries {
        g[(i, j)] = v;
        g[(j, i)] = v;
    }
    g
}

/// Rayleigh-Ritz on span(y): returns ascending Ritz values and the
/// M-orthonormal Ritz vectors.
fn rayleigh_ritz(k: &SymCsr, m: &SymCsr, y: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let ky = apply_block(k, y);
    let my = apply_block(m, y);
    let kr = gram(y, &ky);
    let mr = gram(y, &my);
    let chol = mr.cholesky().ok_or(Error::Factorization(y.len()))?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or(Error::Factorization(y.len()))?;
    let c = &linv * kr * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let coeff = linv.transpose() * &eig.eigenvectors;
    let n = y[0].len();
    let vectors: Vec<Vec<f64>> = order
        .par_iter()
        .map(|&c| {
            let mut v = vec![0.0; n];
            for (j, yj) in y.iter().enumerate() {
                let s = coeff[(j, c)];
                for (vi, yi) in v.iter_mut().zip(yj) {
                    *vi += s * yi;
                }
            }
            v
        })
        .collect();
    Ok((order.iter().map(|&i| eig.eigenvalues[i]).collect(), vectors))
}

fn residual(k: &SymCsr, m: &SymCsr, mu: f64, x: &[f64]) -> f64 {
    let kx = k.apply(x);
    let mx = m.apply(x);
    let r: f64 = kx.iter().zip(&mx).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt();
    r / dot(&mx, &mx).sqrt()
}

/// The `count` lowest eigenpairs of the pencil (K, M).
pub fn solve_gevp(k: &SymCsr, m: &SymCsr, count: usize, opts: &SolverOptions) -> Result<GevpSolution> {
    let n = k.n;
    if count == 0 || count > n {
        return Err(Error::Domain(format!("cannot extract {count} eigenpairs from {n} dofs")));
    }
    let p = (2 * count).max(count + 8).min(n);
    let llt = factor(&k.plus_scaled(opts.shift, m))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..p).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let mut best = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let mx = apply_block(m, &x);
        let mut rhs = Mat::<f64>::zeros(n, p);
        for (j, col) in mx.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                rhs[(i, j)] = *v;
            }
        }
        llt.solve_in_place(rhs.as_mut());
        let y: Vec<Vec<f64>> = (0..p).map(|j| (0..n).map(|i| rhs[(i, j)]).collect()).collect();
        let (values, vectors) = rayleigh_ritz(k, m, &y)?;
        let residuals: Vec<f64> =
            (0..count).into_par_iter().map(|i| residual(k, m, values[i], &vectors[i])).collect();
        let worst = residuals.iter().copied().fold(0.0, f64::max);
        best = best.min(worst);
        x = vectors;
        if worst <= opts.tol {
            x.truncate(count);
            return Ok(GevpSolution { values: values[..count].to_vec(), vectors: x, residuals, iterations: iter });
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual: best })
}
