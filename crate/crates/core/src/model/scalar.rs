use crate::error::{NepError, Result};
use crate::linalg::{Poly, C64, ZERO};

pub const MAX_POLY_DEGREE: usize = 32;
pub const MAX_DERIVATIVE_ORDER: usize = 8;

/// Scalar analytic coefficient function `f_i` of a matrix-valued function.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFn {
    Polynomial(Poly),
    Rational { numerator: Poly, denominator: Poly },
    /// `exp(scale * lambda)`
    Exponential { scale: C64 },
}

impl ScalarFn {
    pub fn polynomial(p: Poly) -> Result<Self> {
        check_degree(&p)?;
        Ok(Self::Polynomial(p))
    }

    pub fn rational(numerator: Poly, denominator: Poly) -> Result<Self> {
        check_degree(&numerator)?;
        check_degree(&denominator)?;
        if denominator.is_zero() {
            return Err(NepError::InvalidInput("rational denominator is identically zero".into()));
        }
        Ok(Self::Rational {
            numerator,
            denominator,
        })
    }

    pub fn exponential(scale: C64) -> Self {
        Self::Exponential { scale }
    }

    /// `lambda^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ZERO; k + 1];
        c[k] = C64::new(1.0, 0.0);
        Self::Polynomial(Poly::new(c))
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self, Self::Exponential { .. })
    }

    /// Roots of the denominator; empty for non-rational variants.
    pub fn poles(&self) -> Result<Vec<C64>> {
        match self {
            Self::Rational { denominator, .. } => denominator.roots(),
            _ => Ok(Vec::new()),
        }
    }

    /// `order`-th derivative at `lambda`, computed exactly from the coefficients.
    pub fn eval(&self, lambda: C64, order: usize) -> Result<C64> {
        if order > MAX_DERIVATIVE_ORDER {
            return Err(NepError::InvalidInput(format!(
                "derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}"
            )));
        }
        match self {
            Self::Polynomial(p) => Ok(p.nth_derivative(order).eval(lambda)),
            Self::Exponential { scale } => Ok(scale.powu(order as u32) * (scale * lambda).exp()),
            Self::Rational {
                numerator,
                denominator,
            } => {
                let q = denominator.eval(lambda);
                let deg = denominator.degree() as i32;
                if q.norm() < 1e-14 * (1.0 + lambda.norm().powi(deg)) {
                    return Err(NepError::PoleHit(lambda));
                }
                // Differentiate p = q f repeatedly (Leibniz) and solve for f^(k).
                let mut f = Vec::with_capacity(order + 1);
                let mut qd = vec![q];
                for k in 0..=order {
                    if k > 0 {
                        qd.push(denominator.nth_derivative(k).eval(lambda));
                    }
                    let mut acc = numerator.nth_derivative(k).eval(lambda);
                    let mut binom = 1.0;
                    for j in 1..=k {
                        binom = binom * (k + 1 - j) as f64 / j as f64;
                        acc -= qd[j] * f[k - j] * binom;
                    }
                    f.push(acc / q);
                }
                Ok(f[order])
            }
        }
    }
}

fn check_degree(p: &Poly) -> Result<()> {
    if p.degree() > MAX_POLY_DEGREE {
        return Err(NepError::InvalidInput(format!(
            "polynomial degree {} exceeds {MAX_POLY_DEGREE}",
            p.degree()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    fn lambda_over_lambda_minus_one() -> ScalarFn {
        ScalarFn::rational(Poly::from_real(&[0.0, 1.0]), Poly::from_real(&[-1.0, 1.0])).unwrap()
    }

    #[test]
    fn polynomial_square() {
        assert_eq!(ScalarFn::monomial(2).eval(r(2.0), 0).unwrap(), r(4.0));
    }

    #[test]
    fn rational_value_and_derivative_at_zero() {
        let f = lambda_over_lambda_minus_one();
        assert_eq!(f.eval(r(0.0), 0).unwrap(), r(0.0));
        // Quotient rule oracle: (q p' - p q') / q^2 = (-1 * 1 - 0) / 1 = -1
        assert!((f.eval(r(0.0), 1).unwrap() - r(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn rational_higher_derivatives_match_closed_form() {
        // lambda / (lambda - 1) = 1 + 1/(lambda - 1); k-th derivative (-1)^k k! (lambda - 1)^{-k-1}
        let f = lambda_over_lambda_minus_one();
        let x = C64::new(0.3, -0.2);
        let mut fact = 1.0;
        for k in 1..=MAX_DERIVATIVE_ORDER {
            fact *= k as f64;
            let expected = (x - 1.0).powi(-(k as i32) - 1) * fact * if k % 2 == 0 { 1.0 } else { -1.0 };
            let got = f.eval(x, k).unwrap();
            assert!((got - expected).norm() <= 1e-11 * expected.norm(), "order {k}");
        }
    }

    #[test]
    fn pole_detected() {
        assert_eq!(
            lambda_over_lambda_minus_one().eval(r(1.0), 0),
            Err(NepError::PoleHit(r(1.0)))
        );
    }

    #[test]
    fn exponential_derivative() {
        let f = ScalarFn::exponential(C64::new(0.0, 2.0));
        let v = f.eval(r(0.5), 3).unwrap();
        let expected = C64::new(0.0, 2.0).powu(3) * C64::new(0.0, 1.0).exp();
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn guards() {
        assert!(ScalarFn::polynomial(Poly::from_real(&[1.0; 34])).is_err());
        assert!(ScalarFn::rational(Poly::one(), Poly::new(vec![])).is_err());
        assert!(ScalarFn::monomial(1).eval(r(0.0), 9).is_err());
    }
}
