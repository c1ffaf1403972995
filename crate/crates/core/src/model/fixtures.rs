//! The small rational eigenvalue problem used to demonstrate Ritz non-uniqueness.
//!
//! `T(l) = [[l, 1, l^2], [1, l, 0], [0, 0, l/(l-1)]]` with `det T = l (l + 1)`,
//! target pair `(0, e3)` and subspace basis `W = [e3, e1]`.

use super::function::{MatrixFunction, ReferencePair, Term};
use super::scalar::ScalarFn;
use crate::linalg::{unit_vector, ComplexMatrix, Poly, C64, ZERO};

pub fn example_rep() -> (MatrixFunction, ReferencePair) {
    let t = MatrixFunction::new(vec![
        Term::new(
            ScalarFn::monomial(0),
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]),
        ),
        Term::new(
            ScalarFn::monomial(1),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]),
        ),
        Term::new(
            ScalarFn::monomial(2),
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]),
        ),
        Term::new(
            ScalarFn::rational(Poly::from_real(&[0.0, 1.0]), Poly::from_real(&[-1.0, 1.0])).expect("valid rational"),
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]),
        ),
    ])
    .expect("fixture is well formed");
    let r = ReferencePair::new(&t, ZERO, unit_vector(3, 2)).expect("fixture pair is exact");
    (t, r)
}

/// Columns `e3, e1`.
pub fn example_basis() -> ComplexMatrix {
    ComplexMatrix::from_columns(&[unit_vector(3, 2), unit_vector(3, 0)]).expect("two columns")
}

/// The second eigenvalue of the fixture, `-1`, with its eigenvector.
pub fn example_other_pair() -> (C64, Vec<C64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (C64::new(-1.0, 0.0), vec![C64::new(s, 0.0), C64::new(s, 0.0), ZERO])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        let (t, _) = example_rep();
        let t0 = t.eval(ZERO, 0).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        assert_eq!(t0, expected);
        let t1 = t.eval(ZERO, 1).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, -1.0]]);
        assert!(t1.sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn other_eigenpair_is_exact() {
        let (t, _) = example_rep();
        let (l, x) = example_other_pair();
        assert!(ReferencePair::new(&t, l, x).is_ok());
    }

    #[test]
    fn remainder_bound_holds_at_fresh_points() {
        use crate::model::taylor_remainder_const;
        use crate::random::{seeded, uniform};
        let (t, _) = example_rep();
        let radius = 0.1;
        let gamma = taylor_remainder_const(&t, ZERO, radius, 16).unwrap();
        assert!(gamma > 0.0 && gamma.is_finite());
        let t0 = t.eval(ZERO, 0).unwrap();
        let t1 = t.eval(ZERO, 1).unwrap();
        let mut rng = seeded(3);
        for _ in 0..100 {
            let r = radius * uniform(&mut rng, 0.0, 1.0).sqrt();
            let lam = C64::from_polar(r, uniform(&mut rng, 0.0, std::f64::consts::TAU));
            let mut rem = t.eval(lam, 0).unwrap().sub(&t0);
            rem.axpy(-lam, &t1);
            assert!(rem.norm2() <= gamma * r * r);
        }
    }
}
