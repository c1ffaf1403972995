//! Independent oracles built on nalgebra and plain polynomial arithmetic.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use nepritz::linalg::{ComplexMatrix, C64};

pub fn to_na(m: &ComplexMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Singular values from nalgebra, descending.
pub fn oracle_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigenvalues of a square matrix through nalgebra's complex Schur form.
pub fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<C64> {
    let schur = nalgebra::linalg::Schur::new(to_na(m));
    schur.eigenvalues().expect("complex Schur has eigenvalues").iter().copied().collect()
}

/// Polynomial with coefficients in ascending powers.
pub type P = Vec<C64>;

fn padd(a: &P, b: &P) -> P {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default())
        .collect()
}

fn pmul(a: &P, b: &P) -> P {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    if n == 1 {
        return vec![(vec![0], 1.0)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // Inserting the largest element at `pos` adds n - 1 - pos inversions.
            let sign = if (n - 1 - pos).is_multiple_of(2) { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// `det(sum_k lambda^k C_k)` by Leibniz expansion over polynomial entries.
pub fn det_polynomial(coeffs: &[ComplexMatrix]) -> P {
    let m = coeffs[0].rows();
    let entry = |i: usize, j: usize| -> P { coeffs.iter().map(|c| c[(i, j)]).collect() };
    let mut det: P = vec![C64::new(0.0, 0.0)];
    for (perm, sign) in permutations(m) {
        let mut term: P = vec![C64::new(sign, 0.0)];
        for (i, &j) in perm.iter().enumerate() {
            term = pmul(&term, &entry(i, j));
        }
        det = padd(&det, &term);
    }
    det
}

/// Roots via the eigenvalues of the scalar companion matrix, then Newton polish.
pub fn scalar_roots(p: &P) -> Vec<C64> {
    let mut p = p.clone();
    while p.len() > 1 && p.last().unwrap().norm() < 1e-14 * p.iter().map(|c| c.norm()).fold(0.0, f64::max) {
        p.pop();
    }
    let d = p.len() - 1;
    let lead = p[d];
    let comp = DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -p[d - 1 - j] / lead
        } else if i == j + 1 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let roots: Vec<C64> = nalgebra::linalg::Schur::new(comp).eigenvalues().unwrap().iter().copied().collect();
    let dp: P = (1..=d).map(|k| p[k] * k as f64).collect();
    let eval = |q: &P, x: C64| q.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c);
    roots
        .into_iter()
        .map(|mut x| {
            for _ in 0..5 {
                let dv = eval(&dp, x);
                if dv.norm() == 0.0 {
                    break;
                }
                x -= eval(&p, x) / dv;
            }
            x
        })
        .collect()
}

/// Largest distance from any point of `a` to its nearest point in `b` and vice versa.
pub fn match_distance(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
