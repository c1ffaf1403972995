use super::matrix::{dot, fix_phase, norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{NepError, Result};

/// Orthonormal basis for the column span of `m`, by modified Gram-Schmidt
/// with one reorthogonalization pass.
///
/// Columns are processed in input order. Each output column is phase-fixed so
/// its largest-magnitude entry is real positive.
pub fn orthonormalize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let tolerance = 1e-12 * m.norm_fro();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut v = m.column(j);
        for _ in 0..2 {
            project_out(&mut v, &basis);
        }
        let r = norm(&v);
        if r <= tolerance || r == 0.0 {
            return Err(NepError::RankDeficient {
                column: j,
                residual: r,
                tolerance,
            });
        }
        for z in v.iter_mut() {
            *z /= r;
        }
        fix_phase(&mut v);
        basis.push(v);
    }
    ComplexMatrix::from_columns(&basis)
}

fn project_out(v: &mut [C64], basis: &[Vec<C64>]) {
    for q in basis {
        let c = dot(q, v);
        for (x, qi) in v.iter_mut().zip(q) {
            *x -= c * qi;
        }
    }
}

/// Turns a list of nearly orthonormal vectors (some missing) into an exactly
/// orthonormal set of `n`-vectors. Missing or degenerate entries are filled with
/// the standard basis vector that has the largest residual against the rest.
pub(crate) fn complete_columns(n: usize, vectors: Vec<Option<Vec<C64>>>) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    let mut pending = Vec::new();
    let mut slots: Vec<Option<Vec<C64>>> = vec![None; vectors.len()];
    for (idx, v) in vectors.into_iter().enumerate() {
        match v {
            Some(mut v) => {
                for _ in 0..2 {
                    project_out(&mut v, &basis);
                }
                let r = norm(&v);
                if r > 0.5 {
                    for z in v.iter_mut() {
                        *z /= r;
                    }
                    basis.push(v.clone());
                    slots[idx] = Some(v);
                } else {
                    pending.push(idx);
                }
            }
            None => pending.push(idx),
        }
    }
    for idx in pending {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..n {
            let mut e = vec![ZERO; n];
            e[k] = ONE;
            for _ in 0..2 {
                project_out(&mut e, &basis);
            }
            let r = norm(&e);
            if best.as_ref().is_none_or(|(b, _)| r > *b + 1e-12) {
                best = Some((r, e));
            }
        }
        let (r, mut e) = best.expect("n > 0");
        for z in e.iter_mut() {
            *z /= r;
        }
        fix_phase(&mut e);
        basis.push(e.clone());
        slots[idx] = Some(e);
    }
    slots.into_iter().map(|s| s.expect("filled")).collect()
}

/// Orthonormal basis of the orthogonal complement of `span(w)` where `w` has
/// orthonormal columns. Built from a Householder QR of `w`, so the result is a
/// deterministic function of `w`. Returns `None` when `w` is square.
pub fn orthonormal_complement(w: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = w.rows();
    let m = w.cols();
    if m >= n {
        return None;
    }
    let reflectors = householder_reflectors(w);
    // Q = H_1 ... H_m; the complement is Q applied to e_{m+1} .. e_n.
    let mut cols = Vec::with_capacity(n - m);
    for k in m..n {
        let mut e = vec![ZERO; n];
        e[k] = ONE;
        for v in reflectors.iter().rev() {
            apply_reflector(v, &mut e);
        }
        fix_phase(&mut e);
        cols.push(e);
    }
    Some(ComplexMatrix::from_columns(&cols).expect("nonempty complement"))
}

/// Complement of a single unit vector, e.g. `X_perp` for `x*` or `Z_perp` for `z`.
pub fn complement_of_vector(x: &[C64]) -> Option<ComplexMatrix> {
    let w = ComplexMatrix::from_columns(&[x.to_vec()]).ok()?;
    orthonormal_complement(&w)
}

/// Householder vectors `v_k` (full length, zero above k) with `H_k = I - 2 v v^H / v^H v`.
fn householder_reflectors(w: &ComplexMatrix) -> Vec<Vec<C64>> {
    let n = w.rows();
    let m = w.cols();
    let mut a = w.clone();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let x: Vec<C64> = (k..n).map(|i| a[(i, k)]).collect();
        let xn = norm(&x);
        let mut v = vec![ZERO; n];
        if xn == 0.0 {
            out.push(v);
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xn;
        for (i, xi) in x.iter().enumerate() {
            v[k + i] = *xi;
        }
        v[k] -= alpha;
        // Apply to the remaining columns of a.
        for j in k..m {
            let mut col = a.column(j);
            apply_reflector(&v, &mut col);
            a.set_column(j, &col);
        }
        out.push(v);
    }
    out
}

fn apply_reflector(v: &[C64], x: &mut [C64]) {
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if vv == 0.0 {
        return;
    }
    let c = dot(v, x) * (2.0 / vv);
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= c * vi;
    }
}
