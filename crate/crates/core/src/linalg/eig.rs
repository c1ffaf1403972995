//! Dense complex eigensolver: Householder reduction to Hessenberg form, shifted
//! QR iteration to Schur form, then back substitution for eigenvectors.

use std::cmp::Ordering;

use super::matrix::{fix_phase, norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{NepError, Result};

pub const EIG_DIMENSION_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: C64,
    /// Unit norm, largest-magnitude entry real positive.
    pub vector: Vec<C64>,
}

/// All eigenpairs of a square matrix, ordered by ascending modulus then argument.
pub fn eig_dense(m: &ComplexMatrix) -> Result<Vec<EigenPair>> {
    let (t, q) = schur(m)?;
    let n = t.rows();
    let tnorm = t.norm_fro().max(f64::MIN_POSITIVE);
    let smin = f64::EPSILON * tnorm;
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![ZERO; n];
        y[k] = ONE;
        for j in (0..k).rev() {
            let mut acc = ZERO;
            for l in j + 1..=k {
                acc += t[(j, l)] * y[l];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            y[j] = -acc / d;
            // Rescale to keep the back substitution from overflowing.
            let big = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for z in y.iter_mut() {
                    *z /= big;
                }
            }
        }
        let mut v = q.mul_vec(&y);
        let vn = norm(&v);
        for z in v.iter_mut() {
            *z /= vn;
        }
        fix_phase(&mut v);
        pairs.push(EigenPair { value: lambda, vector: v });
    }
    pairs.sort_by(|a, b| spectral_order(a.value, b.value));
    Ok(pairs)
}

/// Eigenvalues only, in the same order as [`eig_dense`].
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let (t, _) = schur(m)?;
    let mut vals: Vec<C64> = (0..t.rows()).map(|k| t[(k, k)]).collect();
    vals.sort_by(|a, b| spectral_order(*a, *b));
    Ok(vals)
}

/// Ascending modulus, then ascending argument; moduli within a relative 1e-12 tie.
pub fn spectral_order(a: C64, b: C64) -> Ordering {
    let (ma, mb) = (a.norm(), b.norm());
    if (ma - mb).abs() <= 1e-12 * ma.max(mb) {
        a.arg().total_cmp(&b.arg())
    } else {
        ma.total_cmp(&mb)
    }
}

/// Complex Schur decomposition `m = Q T Q^H` with `T` upper triangular.
pub fn schur(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !m.is_square() {
        return Err(NepError::ShapeMismatch("eigensolver needs a square matrix".into()));
    }
    let n = m.rows();
    if n > EIG_DIMENSION_LIMIT {
        return Err(NepError::DimensionGuard {
            dim: n,
            limit: EIG_DIMENSION_LIMIT,
        });
    }
    let (mut h, mut q) = hessenberg(m);
    shifted_qr(&mut h, &mut q)?;
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok((h, q))
}

fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xn = norm(&x);
        if xn == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let mut v = x.clone();
        v[0] += phase * xn;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        // H <- P H P with P = I - 2 v v^H / v^H v acting on rows/cols k+1..n
        for j in 0..n {
            let mut s = ZERO;
            for (i, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + i, j)];
            }
            let s = s * (2.0 / vv);
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= s * vi;
            }
        }
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = ZERO;
                for (l, vl) in v.iter().enumerate() {
                    s += mat[(i, k + 1 + l)] * vl;
                }
                let s = s * (2.0 / vv);
                for (l, vl) in v.iter().enumerate() {
                    mat[(i, k + 1 + l)] -= s * vl.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

fn shifted_qr(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Result<()> {
    let n = h.rows();
    if n <= 1 {
        return Ok(());
    }
    let budget = 60 * n;
    let hnorm = h.norm_fro();
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let off = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if off <= f64::EPSILON * scale || off < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        total += 1;
        iter_since_deflation += 1;
        if total > budget {
            return Err(NepError::ConvergenceFailure {
                routine: "shifted QR",
                budget,
            });
        }
        let shift = if iter_since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(h, q, lo, hi, shift);
    }
    Ok(())
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let l1 = (a + d) * 0.5 + disc;
    let l2 = (a + d) * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit-shift QR step on the active block `lo..=hi`, applied to the
/// whole matrix so that the final form is a full Schur form.
fn qr_sweep(h: &mut ComplexMatrix, q: &mut ComplexMatrix, lo: usize, hi: usize, shift: C64) {
    let n = h.rows();
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (a / r, b / r) };
        // G = [[conj(c), conj(s)], [-s, c]] applied to rows k, k+1.
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        rotations.push((c, s));
    }
    for (idx, k) in (lo..hi).enumerate() {
        let (c, s) = rotations[idx];
        let top = (k + 2).min(hi);
        // Right-multiply by G^H = [[c, -conj(s)], [s, conj(c)]] on columns k, k+1.
        for i in 0..=top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
        for i in 0..n {
            let x = q[(i, k)];
            let y = q[(i, k + 1)];
            q[(i, k)] = x * c + y * s;
            q[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}
