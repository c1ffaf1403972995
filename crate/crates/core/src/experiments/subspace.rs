//! Seeded subspaces at a controlled deviation from a target vector.

use crate::error::{NepError, Result};
use crate::linalg::{fix_phase, norm, scale_vec, ComplexMatrix, C64};
use crate::projection::{deviation, Subspace};
use crate::random::{gaussian_matrix, gaussian_vector, seeded};

fn check_unit(x: &[C64]) -> Result<()> {
    let xn = norm(x);
    if (xn - 1.0).abs() > 1e-12 {
        return Err(NepError::InvalidInput(format!("target vector has norm {xn}, expected 1")));
    }
    Ok(())
}

/// Orthonormal columns: `leading` first (kept in order), then `extra` seeded
/// random directions orthogonalized against everything before them.
fn complete_with_random(leading: Vec<Vec<C64>>, extra: usize, seed: u64) -> Result<ComplexMatrix> {
    let n = leading[0].len();
    let mut cols = leading;
    if extra > 0 {
        cols.extend(gaussian_matrix(&mut seeded(seed), n, extra, 1.0).columns());
    }
    crate::linalg::orthonormalize(&ComplexMatrix::from_columns(&cols)?)
}

/// `W` whose first column is `x*` (phase fixed), padded with `m - 1` seeded columns.
pub fn build_subspace_exact(x_star: &[C64], m: usize, seed: u64) -> Result<Subspace> {
    check_unit(x_star)?;
    let n = x_star.len();
    if m == 0 || m > n {
        return Err(NepError::ConstructionFailed(format!("m = {m} outside 1..={n}")));
    }
    let mut x = x_star.to_vec();
    fix_phase(&mut x);
    Subspace::new(complete_with_random(vec![x], m - 1, seed)?)
}

/// `W` with `deviation(W, x*) = eps`: the first column is `sqrt(1 - eps^2) x* + eps q`
/// for a seeded unit `q` orthogonal to `x*`, the rest are orthogonal to both.
pub fn build_subspace_eps(x_star: &[C64], m: usize, eps: f64, seed: u64) -> Result<Subspace> {
    check_unit(x_star)?;
    let n = x_star.len();
    if !(eps > 0.0 && eps < 1.0) {
        return Err(NepError::InvalidInput(format!("eps = {eps} outside (0, 1)")));
    }
    if m == 0 || m + 1 > n {
        return Err(NepError::ConstructionFailed(format!(
            "m = {m} leaves no room for the deviation direction in C^{n}"
        )));
    }
    // Salted so the direction never replays a stream the caller drew x* from.
    let g = gaussian_vector(&mut seeded(seed ^ 0x5851_f42d_4c95_7f2d), n, 1.0);
    // q orthogonal to x*, two passes.
    let mut q = g;
    for _ in 0..2 {
        let c = crate::linalg::dot(x_star, &q);
        for (qi, xi) in q.iter_mut().zip(x_star) {
            *qi -= c * xi;
        }
    }
    let qn = norm(&q);
    if qn < 1e-8 {
        return Err(NepError::ConstructionFailed("deviation direction collapsed".into()));
    }
    let q = scale_vec(&q, C64::new(1.0 / qn, 0.0));
    let c = (1.0 - eps * eps).sqrt();
    let w1: Vec<C64> = x_star.iter().zip(&q).map(|(x, qi)| x * c + qi * eps).collect();

    // Orthogonalize the padding against x* and q, then drop them.
    let padded = complete_with_random(vec![x_star.to_vec(), q], m - 1, seed.wrapping_add(0x9e37_79b9))?;
    let mut cols = vec![w1];
    cols.extend(padded.columns().into_iter().skip(2));
    let s = Subspace::new(ComplexMatrix::from_columns(&cols)?)?;
    let measured = deviation(&s, x_star)?;
    if (measured - eps).abs() > 1e-10 {
        return Err(NepError::ConstructionFailed(format!(
            "measured deviation {measured:e} differs from requested {eps:e}"
        )));
    }
    Ok(s)
}

/// Adds complex Gaussian noise of standard deviation `sigma` to `W` and re-orthonormalizes.
pub fn perturb_subspace(s: &Subspace, sigma: f64, seed: u64) -> Result<Subspace> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(NepError::InvalidInput(format!("sigma = {sigma} must be non-negative")));
    }
    if sigma == 0.0 {
        return Ok(s.clone());
    }
    let w = s.basis();
    let noise = gaussian_matrix(&mut seeded(seed), w.rows(), w.cols(), sigma);
    Subspace::from_span(&w.add(&noise))
}

/// `orth(W0 + tilt * e c^T)` for a seeded unit `c`: moves `span(W0)` towards `e`
/// without disturbing the structure of `W0^H A W0` more than `O(tilt)`.
pub fn tilted_subspace(w0: &ComplexMatrix, direction: &[C64], tilt: f64, seed: u64) -> Result<Subspace> {
    if direction.len() != w0.rows() {
        return Err(NepError::ShapeMismatch("tilt direction length differs from W0 rows".into()));
    }
    let c = crate::random::unit_vector(&mut seeded(seed), w0.cols());
    let shift = ComplexMatrix::from_fn(w0.rows(), w0.cols(), |i, j| direction[i] * c[j] * tilt);
    Subspace::from_span(&w0.add(&shift))
}
