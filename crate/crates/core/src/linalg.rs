//! Numeric eigen decomposition of the linear part of a map.
//!
//! The matrix is first split into the connected blocks of its sparsity
//! pattern. Blocks of size one and two are solved in closed form, which
//! returns `+-sqrt(l1 l2), l3, ...` for the gamma family to rounding accuracy.
//! Larger blocks go through nalgebra's Schur decomposition.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("Schur decomposition did not converge")]
    NoConvergence,
    #[error("matrix is not diagonalizable (eigenbasis condition {condition:e})")]
    NotDiagonalizable { condition: f64 },
}

/// `A = S diag(values) S^-1`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    /// Eigenvectors as columns, unit Euclidean norm, first nonzero entry positive real.
    pub vectors: DMatrix<Complex64>,
    pub inverse: DMatrix<Complex64>,
}

const ZERO_TOL: f64 = 1e-14;
const CONDITION_TOL: f64 = 1e-10;

pub fn to_dmatrix(a: &[Vec<Complex64>]) -> Result<DMatrix<Complex64>, EigenError> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(EigenError::NotSquare);
    }
    Ok(DMatrix::from_fn(n, n, |i, j| a[i][j]))
}

/// Connected blocks of the symmetric sparsity pattern, each sorted, ordered by smallest index.
fn blocks(a: &DMatrix<Complex64>) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)] != Complex64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_slot[r] {
            Some(slot) => out[slot].push(i),
            None => {
                root_slot[r] = Some(out.len());
                out.push(vec![i]);
            }
        }
    }
    out
}

fn sub_matrix(a: &DMatrix<Complex64>, idx: &[usize]) -> DMatrix<Complex64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])])
}

fn two_by_two_values(b: &DMatrix<Complex64>) -> [Complex64; 2] {
    let (p, q, r, s) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let half_trace = (p + s) * 0.5;
    let half_gap = (p - s) * 0.5;
    let disc = (half_gap * half_gap + q * r).sqrt();
    [half_trace + disc, half_trace - disc]
}

fn schur_values(b: DMatrix<Complex64>) -> Result<Vec<Complex64>, EigenError> {
    let schur = nalgebra::Schur::try_new(b, f64::EPSILON, 10_000).ok_or(EigenError::NoConvergence)?;
    let values = schur.eigenvalues().ok_or(EigenError::NoConvergence)?;
    Ok(values.iter().copied().collect())
}

fn block_values(b: &DMatrix<Complex64>) -> Result<Vec<Complex64>, EigenError> {
    match b.nrows() {
        1 => Ok(vec![b[(0, 0)]]),
        2 => Ok(two_by_two_values(b).to_vec()),
        _ => schur_values(b.clone()),
    }
}

/// Eigenvalues with algebraic multiplicity.
pub fn eigenvalues(a: &[Vec<Complex64>]) -> Result<Vec<Complex64>, EigenError> {
    let m = to_dmatrix(a)?;
    let mut values = Vec::with_capacity(m.nrows());
    for idx in blocks(&m) {
        values.extend(block_values(&sub_matrix(&m, &idx))?);
    }
    Ok(values)
}

pub fn spectral_radius(a: &[Vec<Complex64>]) -> Result<f64, EigenError> {
    Ok(eigenvalues(a)?.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Null space basis of `b - mu I` from the SVD.
fn null_vectors(b: &DMatrix<Complex64>, mu: Complex64, scale: f64) -> Vec<Vec<Complex64>> {
    let n = b.nrows();
    let shifted = b - DMatrix::<Complex64>::identity(n, n) * mu;
    let svd = shifted.svd(false, true);
    let Some(v_t) = svd.v_t else { return Vec::new() };
    let tol = 1e-9 * scale.max(1.0);
    let mut out = Vec::new();
    for (k, &sv) in svd.singular_values.iter().enumerate() {
        if sv <= tol {
            out.push((0..n).map(|j| v_t[(k, j)].conj()).collect());
        }
    }
    if out.is_empty() {
        // Numerical rank deficiency lost to rounding: take the smallest singular direction.
        let (k, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (k, &s)| if s < acc.1 { (k, s) } else { acc });
        out.push((0..n).map(|j| v_t[(k, j)].conj()).collect());
    }
    out
}

fn normalize(v: &mut [Complex64]) {
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if norm == 0.0 {
        return;
    }
    let lead = v.iter().copied().find(|z| z.norm() > ZERO_TOL * norm).unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    for z in v.iter_mut() {
        *z = *z * phase / norm;
    }
}

fn block_eigenpairs(
    b: &DMatrix<Complex64>,
    scale: f64,
) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>), EigenError> {
    let vals = block_values(b)?;
    match b.nrows() {
        1 => Ok((vals, vec![vec![Complex64::new(1.0, 0.0)]])),
        2 => {
            let (p, q, r, s) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
            let vecs = vals
                .iter()
                .map(|&mu| if q.norm() >= r.norm() { vec![q, mu - p] } else { vec![mu - s, r] })
                .collect();
            Ok((vals, vecs))
        }
        _ => {
            // Group numerically equal eigenvalues and take their null space once.
            let mut used = vec![false; vals.len()];
            let mut ordered = Vec::with_capacity(vals.len());
            let mut vecs = Vec::with_capacity(vals.len());
            for i in 0..vals.len() {
                if used[i] {
                    continue;
                }
                let mu = vals[i];
                let group: Vec<usize> = (i..vals.len())
                    .filter(|&k| !used[k] && (vals[k] - mu).norm() <= 1e-9 * scale.max(1.0))
                    .collect();
                let basis = null_vectors(b, mu, scale);
                for (slot, &k) in group.iter().enumerate() {
                    used[k] = true;
                    ordered.push(vals[k]);
                    // A defective eigenvalue has too few null vectors; repeating one makes the basis singular.
                    vecs.push(basis[slot.min(basis.len() - 1)].clone());
                }
            }
            Ok((ordered, vecs))
        }
    }
}

/// Numeric diagonalization; errors when no well-conditioned eigenbasis exists.
pub fn eigen_decompose(a: &[Vec<Complex64>]) -> Result<Eigen, EigenError> {
    let m = to_dmatrix(a)?;
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut values = Vec::with_capacity(n);
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    let mut col = 0;
    for idx in blocks(&m) {
        let (vals, mut local) = block_eigenpairs(&sub_matrix(&m, &idx), scale)?;
        values.extend(vals);
        for v in local.iter_mut() {
            normalize(v);
            for (r, &i) in idx.iter().enumerate() {
                vectors[(i, col)] = v[r];
            }
            col += 1;
        }
    }
    let sv = vectors.clone().singular_values();
    let (min, max) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let condition = if max == 0.0 { 0.0 } else { min / max };
    if condition < CONDITION_TOL {
        return Err(EigenError::NotDiagonalizable { condition });
    }
    let inverse = vectors.clone().try_inverse().ok_or(EigenError::NotDiagonalizable { condition })?;
    Ok(Eigen { values, vectors, inverse })
}
