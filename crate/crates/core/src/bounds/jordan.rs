use crate::error::{NepError, Result};
use crate::linalg::{singular_values, ComplexMatrix, C64};

/// `mu` must satisfy `sigma_min(M - mu I) <= 1e-8 max(1, ||M||)`.
pub const JORDAN_EIGENVALUE_TOL: f64 = 1e-8;

/// Size of the largest Jordan block of `m` at `mu`: the largest `k` with
/// `rank(A^k) < rank(A^(k-1))`, `A = M - mu I`.
///
/// Rank of `A^k` counts singular values above `1e-8 max(1, ||M||)^k`. `mu` has to
/// be accurate to roughly the same level; a computed eigenvalue of a Jordan
/// block of size `k` carries an error near `eps^(1/k)` and is not good enough.
pub fn jordan_block_order(m: &ComplexMatrix, mu: C64) -> Result<usize> {
    if !m.is_square() {
        return Err(NepError::ShapeMismatch(format!("matrix is {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let a = m.shift_diagonal(-mu);
    let scale = m.norm2().max(1.0);
    let sv = singular_values(&a)?;
    let smin = *sv.last().unwrap_or(&0.0);
    if smin > JORDAN_EIGENVALUE_TOL * scale {
        return Err(NepError::NotAnEigenvalue { value: mu, sigma_min: smin });
    }
    let mut prev_rank = n;
    let mut order = 0;
    let mut power = ComplexMatrix::identity(n);
    for k in 1..=n {
        power = power.matmul(&a);
        let tol = JORDAN_EIGENVALUE_TOL * scale.powi(k as i32);
        let rank = singular_values(&power)?.iter().filter(|&&s| s > tol).count();
        if rank < prev_rank {
            order = k;
            prev_rank = rank;
        } else {
            break;
        }
    }
    Ok(order)
}
