use nalgebra::{DMatrix, SymmetricEigen};

use super::matvec::Operator;
use super::EigenPair;
use crate::error::{Error, Result};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub(crate) fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

fn project_out(v: &mut [f64], against: Option<&[f64]>) {
    if let Some(d) = against {
        let c = dot(v, d);
        axpy(-c, d, v);
    }
}

/// Rayleigh quotient and residual norm of a unit vector.
fn rayleigh(op: &mut Operator, v: &[f64], w: &mut [f64]) -> Result<(f64, f64)> {
    op.apply(v, w)?;
    let lambda = dot(v, w);
    let r: f64 = w.iter().zip(v).map(|(wi, vi)| (wi - lambda * vi).powi(2)).sum();
    Ok((lambda, r.sqrt()))
}

/// Largest eigenpair by shifted power iteration, optionally restricted to
/// the complement of `deflate`. The shift keeps the most negative
/// eigenvalue from dominating.
pub(crate) fn power(
    op: &mut Operator,
    mut v: Vec<f64>,
    deflate: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<EigenPair> {
    let shift = op.frobenius() / (op.n().max(1) as f64).sqrt();
    project_out(&mut v, deflate);
    normalize(&mut v);
    let mut w = vec![0.0; v.len()];
    let mut last = (0.0, f64::INFINITY);
    for it in 1..=max_iter {
        last = rayleigh(op, &v, &mut w)?;
        if last.1 <= tol {
            return Ok(EigenPair { value: last.0, vector: v, residual: last.1, iterations: it });
        }
        axpy(shift, &v, &mut w);
        project_out(&mut w, deflate);
        normalize(&mut w);
        std::mem::swap(&mut v, &mut w);
    }
    Err(Error::NonConverged(Box::new(EigenPair {
        value: last.0,
        vector: v,
        residual: last.1,
        iterations: max_iter,
    })))
}

/// Largest eigenvalue of the tridiagonal matrix and its eigenvector.
fn top_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let top = eig.eigenvalues.imax();
    (eig.eigenvalues[top], eig.eigenvectors.column(top).iter().copied().collect())
}

/// Largest eigenpair by Lanczos with full reorthogonalisation and explicit
/// restarts from the current Ritz vector. Accepts only when the true
/// residual of the Ritz pair is within `tol`; `iterations` counts products.
pub(crate) fn lanczos(
    op: &mut Operator,
    mut v: Vec<f64>,
    deflate: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
    krylov_dim: usize,
) -> Result<EigenPair> {
    let n = op.n();
    let breakdown = 1e-12 * op.frobenius().max(1.0);
    let dim = krylov_dim.min(n - usize::from(deflate.is_some())).max(1);
    project_out(&mut v, deflate);
    normalize(&mut v);
    let mut w = vec![0.0; n];
    let mut used = 0usize;
    loop {
        let mut basis = vec![v];
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let coeffs = loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w)?;
            used += 1;
            alphas.push(dot(&w, &basis[j]));
            for _ in 0..2 {
                project_out(&mut w, deflate);
                for b in &basis {
                    let c = dot(&w, b);
                    axpy(-c, b, &mut w);
                }
            }
            let beta = dot(&w, &w).sqrt();
            let k = alphas.len();
            let exhausted = k >= dim || beta <= breakdown || used >= max_iter;
            if exhausted || k % 8 == 0 {
                let (_, y) = top_ritz(&alphas, &betas);
                if exhausted || beta * y[k - 1].abs() <= 0.25 * tol {
                    break y;
                }
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        };
        let mut u = vec![0.0; n];
        for (c, b) in coeffs.iter().zip(&basis) {
            axpy(*c, b, &mut u);
        }
        project_out(&mut u, deflate);
        normalize(&mut u);
        let (value, residual) = rayleigh(op, &u, &mut w)?;
        used += 1;
        let pair = EigenPair { value, vector: u, residual, iterations: used };
        if residual <= tol {
            return Ok(pair);
        }
        if used >= max_iter {
            return Err(Error::NonConverged(Box::new(pair)));
        }
        v = pair.vector;
    }
}
