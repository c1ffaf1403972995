use super::matrix::{ComplexMatrix, C64, ZERO};
use super::svd::singular_values;
use crate::error::{NepError, Result};

/// Conditioning floor below which systems are rejected as numerically singular.
pub const SINGULAR_RATIO: f64 = 1e-14;

/// Packed LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes without a conditioning check; exact zero pivots are an error.
    pub fn factor(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(NepError::ShapeMismatch("LU needs a square matrix".into()));
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| lu[(a, k)].norm().total_cmp(&lu[(b, k)].norm()))
                .expect("nonempty range");
            if lu[(p, k)] == ZERO {
                return Err(NepError::NearSingular { ratio: 0.0 });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_matrix(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let cols: Vec<Vec<C64>> = (0..b.cols()).map(|j| self.solve(&b.column(j))).collect();
        ComplexMatrix::from_columns(&cols).expect("same shape as rhs")
    }
}

/// Rejects `m` when `sigma_min / sigma_max <= 1e-14`.
pub fn check_conditioning(m: &ComplexMatrix) -> Result<()> {
    let s = singular_values(m)?;
    let smax = s[0];
    let smin = *s.last().expect("nonempty");
    let ratio = if smax == 0.0 { 0.0 } else { smin / smax };
    if ratio <= SINGULAR_RATIO {
        return Err(NepError::NearSingular { ratio });
    }
    Ok(())
}

/// Solves `m x = b` for square, numerically nonsingular `m`.
pub fn solve_linear(m: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if !m.is_square() || m.rows() != b.len() {
        return Err(NepError::ShapeMismatch(format!(
            "system {}x{} with rhs of length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    check_conditioning(m)?;
    Ok(Lu::factor(m)?.solve(b))
}

/// Solves `m X = b` column by column, with the same conditioning check.
pub fn solve_matrix(m: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_conditioning(m)?;
    Ok(Lu::factor(m)?.solve_matrix(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn identity_system() {
        let b = vec![c(1.0), C64::new(0.0, 2.0), c(-3.0)];
        let x = solve_linear(&ComplexMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_system() {
        let m = ComplexMatrix::diag(&[c(2.0), c(4.0)]);
        let x = solve_linear(&m, &[c(2.0), c(4.0)]).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-15 && (x[1] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(
            solve_linear(&m, &[c(1.0), c(1.0)]),
            Err(NepError::NearSingular { .. })
        ));
    }

    #[test]
    fn needs_pivoting() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let x = solve_linear(&m, &[c(3.0), c(5.0)]).unwrap();
        assert!((x[0] - c(5.0)).norm() < 1e-15 && (x[1] - c(3.0)).norm() < 1e-15);
    }
}
