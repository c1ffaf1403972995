//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! Jacobi is slow for large matrices but computes small singular values to high
//! relative accuracy, which the refined extraction relies on when the smallest
//! singular value of `T(mu) W` is itself tiny.

use super::matrix::{dot, fix_phase, norm, phase_factor, ComplexMatrix, C64, ZERO};
use super::ortho::complete_columns;
use crate::error::{NepError, Result};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(s) V^H` with `k = min(rows, cols)` triplets.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// Columns `u_1 .. u_k`.
    pub left_vectors: ComplexMatrix,
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// Columns `v_1 .. v_k`.
    pub right_vectors: ComplexMatrix,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().expect("nonempty")
    }

    /// Smallest singular triplet `(sigma, u, v)`.
    pub fn smallest(&self) -> (f64, Vec<C64>, Vec<C64>) {
        let k = self.singular_values.len() - 1;
        (
            self.singular_values[k],
            self.left_vectors.column(k),
            self.right_vectors.column(k),
        )
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let us = ComplexMatrix::from_fn(self.left_vectors.rows(), k, |i, j| {
            self.left_vectors[(i, j)] * self.singular_values[j]
        });
        us.matmul(&self.right_vectors.adjoint())
    }

    /// Number of singular values at or below `tol`.
    pub fn count_below(&self, tol: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s <= tol).count()
    }
}

/// Full thin SVD with the deterministic phase convention: each right singular
/// vector has its largest-magnitude entry real positive.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    if a.rows() >= a.cols() {
        jacobi_tall(a)
    } else {
        // A = (A^H)^H = (U S V^H)^H = V S U^H
        let t = jacobi_tall(&a.adjoint())?;
        let mut out = SvdResult {
            left_vectors: t.right_vectors,
            singular_values: t.singular_values,
            right_vectors: t.left_vectors,
        };
        rephase(&mut out);
        Ok(out)
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.singular_values)
}

pub fn sigma_min(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.sigma_min())
}

fn jacobi_tall(a: &ComplexMatrix) -> Result<SvdResult> {
    let m = a.rows();
    let n = a.cols();
    let mut cols = a.columns();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    // Dot-product roundoff grows with the column length.
    let tol = 2.0 * f64::EPSILON * (m.max(4) as f64);
    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Strip the phase of gamma into column q, then apply a real rotation.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(NepError::ConvergenceFailure {
            routine: "jacobi svd",
            budget: MAX_SWEEPS,
        });
    }

    let mut triplets: Vec<(f64, Vec<C64>, Vec<C64>)> = cols
        .into_iter()
        .zip(v)
        .map(|(c, vj)| (norm(&c), c, vj))
        .collect();
    // Stable sort keeps input order among exact ties.
    triplets.sort_by(|x, y| y.0.total_cmp(&x.0));

    let smax = triplets[0].0;
    let mut left: Vec<Option<Vec<C64>>> = Vec::with_capacity(n);
    let mut sing = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for (s, c, vj) in triplets {
        sing.push(s);
        right.push(vj);
        if s > 0.0 && s > smax * f64::EPSILON * 1e-3 {
            left.push(Some(c.iter().map(|z| z / s).collect()));
        } else {
            left.push(None);
        }
    }
    let left = complete_columns(m, left);

    let mut out = SvdResult {
        left_vectors: ComplexMatrix::from_columns(&left)?,
        singular_values: sing,
        right_vectors: ComplexMatrix::from_columns(&right)?,
    };
    rephase(&mut out);
    Ok(out)
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Fixes the phase of each right vector and rotates the paired left vector with it.
fn rephase(out: &mut SvdResult) {
    for j in 0..out.singular_values.len() {
        let mut vj = out.right_vectors.column(j);
        let f = phase_factor(&vj);
        fix_phase(&mut vj);
        out.right_vectors.set_column(j, &vj);
        let uj: Vec<C64> = out.left_vectors.column(j).iter().map(|z| z * f).collect();
        out.left_vectors.set_column(j, &uj);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn diagonal_values() {
        let a = ComplexMatrix::diag(&[c(1.0), c(3.0)]);
        let s = svd(&a).unwrap();
        assert!((s.singular_values[0] - 3.0).abs() < 1e-15);
        assert!((s.singular_values[1] - 1.0).abs() < 1e-15);
        assert!((s.right_vectors[(1, 0)] - ONE).norm() < 1e-15);
    }

    #[test]
    fn rank_one_example_matrix() {
        // T(0) W for the 3x3 rational fixture.
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let s = svd(&a).unwrap();
        assert_eq!(s.singular_values, vec![1.0, 0.0]);
        let (_, u, v) = s.smallest();
        assert!((v[0] - ONE).norm() < 1e-15);
        assert!((norm(&u) - 1.0).abs() < 1e-15);
        assert!(s.left_vectors.adjoint().matmul(&s.left_vectors).distance_from_identity() < 1e-15);
    }

    #[test]
    fn wide_matrix_round_trip() {
        let a = ComplexMatrix::from_fn(2, 4, |i, j| C64::new((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let s = svd(&a).unwrap();
        assert_eq!(s.singular_values.len(), 2);
        assert!(s.reconstruct().sub(&a).norm_fro() < 1e-13 * a.norm_fro());
    }

    #[test]
    fn zero_matrix() {
        let a = ComplexMatrix::zeros(3, 2);
        let s = svd(&a).unwrap();
        assert_eq!(s.singular_values, vec![0.0, 0.0]);
        assert!(s.left_vectors.adjoint().matmul(&s.left_vectors).distance_from_identity() < 1e-15);
    }
}
