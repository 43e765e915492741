//! Dense linear algebra for the small (k <= 4) systems the solvers need.

use crate::scalar::{dot, Real};

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
pub fn solve<F: Real>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = b.len();
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col].abs() <= F::epsilon() * F::c(16.0) {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for k in col..=n {
                    let update = factor * m[col][k];
                    m[row][k] = m[row][k] - update;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
/// Vectors shorter than `tol` in norm after projection are dropped.
pub fn orthonormalize<F: Real>(vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut basis: Vec<Vec<F>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi = *wi - coeff * *bi;
                }
            }
        }
        let n = dot(&w, &w).sqrt();
        if n > F::epsilon().sqrt() {
            for wi in w.iter_mut() {
                *wi = *wi / n;
            }
            basis.push(w);
        }
    }
    basis
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<F: Real>(matrix: &[Vec<F>]) -> Vec<F> {
    let n = matrix.len();
    let mut a: Vec<Vec<F>> = matrix.to_vec();
    for _sweep in 0..64 {
        let mut off = F::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[p][q] * a[p][q];
            }
        }
        if off <= F::epsilon() * F::epsilon() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= F::min_positive_value() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (F::c(2.0) * a[p][q]);
                let t = {
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    sign / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// `m v` for a dense matrix stored by rows.
pub fn mat_vec<F: Real>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter().map(|row| dot(row, v)).collect()
}
