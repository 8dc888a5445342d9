//! Small dense linear-algebra helpers over `Vector4` lists.
//!
//! Rank decisions use a singular-value threshold of `RANK_TOL` times the
//! largest singular value.

use nalgebra::{DMatrix, DVector};

use crate::lie::{Vector4, DIM};

pub const RANK_TOL: f64 = 1e-9;

fn columns(vectors: &[Vector4]) -> DMatrix<f64> {
    DMatrix::from_fn(DIM, vectors.len(), |r, c| vectors[c][r])
}

fn threshold(singular: &DVector<f64>) -> f64 {
    let smax = singular.iter().fold(0.0f64, |m, s| m.max(*s));
    RANK_TOL * smax
}

pub fn rank(vectors: &[Vector4]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let svd = columns(vectors).svd(false, false);
    let tol = threshold(&svd.singular_values);
    svd.singular_values.iter().filter(|s| **s > tol && **s > 0.0).count()
}

/// Orthonormal basis of the span.
pub fn span_basis(vectors: &[Vector4]) -> Vec<Vector4> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let svd = columns(vectors).svd(true, false);
    let tol = threshold(&svd.singular_values);
    let u = svd.u.expect("requested U");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol && **s > 0.0)
        .map(|(i, _)| Vector4([u[(0, i)], u[(1, i)], u[(2, i)], u[(3, i)]]))
        .collect()
}

/// Orthonormal basis of the kernel of `a` (any shape).
pub fn null_space(a: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Pad to at least n rows so the SVD returns a full V.
    let rows = a.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let svd = padded.svd(false, true);
    let tol = threshold(&svd.singular_values);
    let v_t = svd.v_t.expect("requested V^T");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol || **s == 0.0)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect()
}

/// Orthonormal basis of the orthogonal complement of the span.
pub fn complement(vectors: &[Vector4]) -> Vec<Vector4> {
    let a = DMatrix::from_fn(vectors.len(), DIM, |r, c| vectors[r][c]);
    null_space(&a)
        .into_iter()
        .map(|v| Vector4([v[0], v[1], v[2], v[3]]))
        .collect()
}

/// Least-squares coefficients of `target` in the given spanning list, plus
/// the max-entry residual.
pub fn coordinates(basis: &[Vector4], target: &Vector4) -> (Vec<f64>, f64) {
    let a = columns(basis);
    let b = DVector::from_column_slice(&target.0);
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-14)
        .unwrap_or_else(|_| DVector::zeros(basis.len()));
    let r = &a * &x - b;
    let resid = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (x.iter().copied().collect(), resid)
}

/// Orthonormal basis of the intersection of two spans.
pub fn intersection(a: &[Vector4], b: &[Vector4]) -> Vec<Vector4> {
    let a = span_basis(a);
    let b = span_basis(b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // x in span(a) ∩ span(b)  <=>  A y = B z.
    let mut m = DMatrix::zeros(DIM, a.len() + b.len());
    for (c, v) in a.iter().enumerate() {
        for r in 0..DIM {
            m[(r, c)] = v[r];
        }
    }
    for (c, v) in b.iter().enumerate() {
        for r in 0..DIM {
            m[(r, a.len() + c)] = -v[r];
        }
    }
    let vecs: Vec<Vector4> = null_space(&m)
        .into_iter()
        .map(|k| {
            a.iter()
                .enumerate()
                .fold(Vector4::ZERO, |acc, (i, v)| acc + *v * k[i])
        })
        .collect();
    span_basis(&vecs)
}
