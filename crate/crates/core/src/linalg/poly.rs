use serde::{Deserialize, Serialize};

use super::eig::eigenvalues;
use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::Result;

/// Complex polynomial with ascending coefficients `c_0 + c_1 x + ...`.
///
/// Trailing zero coefficients are trimmed so `degree` is meaningful; the zero
/// polynomial keeps a single zero coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// `x - root`
    pub fn linear_factor(root: C64) -> Self {
        Self::new(vec![-root, ONE])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(ZERO);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        self.scale(ONE / self.leading())
    }

    /// Roots from the eigenvalues of the companion matrix, ordered by ascending
    /// modulus then argument.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let d = self.degree();
        if d == 0 {
            return Ok(Vec::new());
        }
        let lead = self.leading();
        let comp = ComplexMatrix::from_fn(d, d, |i, j| {
            if i == 0 {
                -self.coeffs[d - 1 - j] / lead
            } else if i == j + 1 {
                ONE
            } else {
                ZERO
            }
        });
        eigenvalues(&comp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_evaluates() {
        let p = Poly::from_real(&[1.0, 0.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(C64::new(2.0, 0.0)), C64::new(9.0, 0.0));
        assert_eq!(p.derivative(), Poly::from_real(&[0.0, 4.0]));
        assert!(Poly::new(vec![]).is_zero());
    }

    #[test]
    fn roots_of_quadratic() {
        let r = Poly::from_real(&[-1.0, 0.0, 1.0]).roots().unwrap();
        assert!((r[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - C64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn product_of_linear_factors() {
        let p = Poly::linear_factor(C64::new(1.0, 0.0)).mul(&Poly::linear_factor(C64::new(0.0, 2.0)));
        let r = p.roots().unwrap();
        assert!((r[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - C64::new(0.0, 2.0)).norm() < 1e-14);
    }
}
