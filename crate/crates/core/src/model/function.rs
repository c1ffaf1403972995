use std::f64::consts::PI;

use super::scalar::ScalarFn;
use crate::error::{NepError, Result};
use crate::linalg::{norm, ComplexMatrix, C64};

/// Safety factor applied to sampled maxima of Taylor remainders.
pub const REMAINDER_SAFETY: f64 = 1.5;

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub function: ScalarFn,
    pub matrix: ComplexMatrix,
}

impl Term {
    pub fn new(function: ScalarFn, matrix: ComplexMatrix) -> Self {
        Self { function, matrix }
    }
}

/// `T(lambda) = sum_i f_i(lambda) A_i` with every `A_i` of size `n x n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFunction {
    dim: usize,
    terms: Vec<Term>,
    poles: Vec<C64>,
}

impl MatrixFunction {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| NepError::InvalidInput("matrix function needs at least one term".into()))?;
        let dim = first.matrix.rows();
        for t in &terms {
            if t.matrix.rows() != dim || t.matrix.cols() != dim {
                return Err(NepError::ShapeMismatch(format!(
                    "term matrix is {}x{}, expected {dim}x{dim}",
                    t.matrix.rows(),
                    t.matrix.cols()
                )));
            }
        }
        let mut poles: Vec<C64> = Vec::new();
        for t in &terms {
            for p in t.function.poles()? {
                if !poles.iter().any(|q| (q - p).norm() <= 1e-10 * (1.0 + p.norm())) {
                    poles.push(p);
                }
            }
        }
        Ok(Self { dim, terms, poles })
    }

    /// `A - lambda I`
    pub fn linear(a: &ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        Self::new(vec![
            Term::new(ScalarFn::monomial(0), a.clone()),
            Term::new(ScalarFn::monomial(1), ComplexMatrix::identity(n).scale(C64::new(-1.0, 0.0))),
        ])
    }

    /// `sum_k lambda^k C_k`
    pub fn polynomial(coefficients: &[ComplexMatrix]) -> Result<Self> {
        Self::new(
            coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| Term::new(ScalarFn::monomial(k), c.clone()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn has_exponential(&self) -> bool {
        self.terms.iter().any(|t| t.function.is_exponential())
    }

    /// `sum_i f_i^(order)(lambda) A_i`
    pub fn eval(&self, lambda: C64, order: usize) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for t in &self.terms {
            let f = t.function.eval(lambda, order)?;
            out.axpy(f, &t.matrix);
        }
        Ok(out)
    }

    /// Same scalar functions, coefficient matrices transformed by `g`.
    pub fn map_matrices(&self, mut g: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        Self::new(
            self.terms
                .iter()
                .map(|t| Term::new(t.function.clone(), g(&t.matrix)))
                .collect(),
        )
    }

    /// The function whose value is the sum of both.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(terms)
    }

    pub fn distance_to_nearest_pole(&self, lambda: C64) -> f64 {
        self.poles
            .iter()
            .map(|p| (p - lambda).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Bound estimate `gamma` for `||T(l) - T(c) - T'(c)(l - c)|| <= gamma |l - c|^2`
/// on the disc of the given radius around `center`.
///
/// Samples `samples` equispaced angles on circles of radius `radius/4`,
/// `radius/2` and `radius`, and returns `1.5` times the largest sampled ratio.
pub fn taylor_remainder_const(t: &MatrixFunction, center: C64, radius: f64, samples: usize) -> Result<f64> {
    if samples < 8 {
        return Err(NepError::InvalidInput("remainder estimation needs at least 8 samples".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(NepError::InvalidInput("remainder radius must be positive".into()));
    }
    if let Some(p) = t.poles().iter().find(|p| (*p - center).norm() <= radius) {
        return Err(NepError::PoleHit(*p));
    }
    let t0 = t.eval(center, 0)?;
    let t1 = t.eval(center, 1)?;
    let mut worst: f64 = 0.0;
    for r in [radius / 4.0, radius / 2.0, radius] {
        for k in 0..samples {
            let theta = 2.0 * PI * k as f64 / samples as f64;
            let h = C64::from_polar(r, theta);
            let mut rem = t.eval(center + h, 0)?.sub(&t0);
            rem.axpy(-h, &t1);
            worst = worst.max(rem.norm2() / (r * r));
        }
    }
    Ok(REMAINDER_SAFETY * worst)
}

/// Target eigenpair `(lambda*, x*)` with unit `x*` and `T(lambda*) x* = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePair {
    pub lambda_star: C64,
    pub x_star: Vec<C64>,
}

impl ReferencePair {
    /// Validates the pair against `t`.
    pub fn new(t: &MatrixFunction, lambda_star: C64, x_star: Vec<C64>) -> Result<Self> {
        if x_star.len() != t.dim() {
            return Err(NepError::ShapeMismatch(format!(
                "reference vector has length {}, problem dimension is {}",
                x_star.len(),
                t.dim()
            )));
        }
        let xn = norm(&x_star);
        if (xn - 1.0).abs() > 1e-12 {
            return Err(NepError::InvalidInput(format!("x_star has norm {xn}, expected 1")));
        }
        if t.distance_to_nearest_pole(lambda_star) <= 1e-12 {
            return Err(NepError::PoleHit(lambda_star));
        }
        let tl = t.eval(lambda_star, 0)?;
        let res = norm(&tl.mul_vec(&x_star));
        // Floor at 1: T(lambda*) can vanish entirely (scalar problems).
        let scale = tl.norm2().max(1.0);
        if res > 1e-10 * scale {
            return Err(NepError::NotAnEigenvalue {
                value: lambda_star,
                sigma_min: res,
            });
        }
        Ok(Self { lambda_star, x_star })
    }
}
