//! Projection subspaces, the deviation `eps = ||W_perp^H x*||` and the
//! projected function `B(lambda) = W^H T(lambda) W`.

use crate::error::{NepError, Result};
use crate::linalg::{norm, orthonormal_complement, orthonormalize, scale_vec, sub_vec, ComplexMatrix, C64};
use crate::model::{MatrixFunction, ReferencePair};

/// Orthonormality tolerance for subspace bases.
pub const ORTHO_TOL: f64 = 1e-12;

/// Orthonormal basis `W` (n x m) together with its orthonormal complement
/// `W_perp` (n x (n - m)), absent when `m = n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: ComplexMatrix,
    complement: Option<ComplexMatrix>,
}

impl Subspace {
    /// Accepts a basis that is already orthonormal to `1e-12`.
    pub fn new(basis: ComplexMatrix) -> Result<Self> {
        if basis.cols() > basis.rows() {
            return Err(NepError::ShapeMismatch(format!(
                "subspace basis is {}x{}, needs cols <= rows",
                basis.rows(),
                basis.cols()
            )));
        }
        let gram = basis.adjoint().matmul(&basis);
        let dev = gram.distance_from_identity();
        if dev > ORTHO_TOL {
            return Err(NepError::InvalidInput(format!(
                "basis columns are not orthonormal (||W^H W - I|| = {dev:e})"
            )));
        }
        let complement = orthonormal_complement(&basis);
        Ok(Self { basis, complement })
    }

    /// Orthonormalizes the columns of `m` first.
    pub fn from_span(m: &ComplexMatrix) -> Result<Self> {
        Self::new(orthonormalize(m)?)
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn complement(&self) -> Option<&ComplexMatrix> {
        self.complement.as_ref()
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Subspace dimension `m`.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// `W^H x`
    pub fn coordinates(&self, x: &[C64]) -> Vec<C64> {
        self.basis.adjoint_mul_vec(x)
    }

    /// `W y`
    pub fn lift(&self, y: &[C64]) -> Vec<C64> {
        self.basis.mul_vec(y)
    }

    fn check_len(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(NepError::ShapeMismatch(format!(
                "vector of length {} against subspace in C^{}",
                x.len(),
                self.ambient_dim()
            )));
        }
        Ok(())
    }
}

/// `eps = ||W_perp^H x||` for unit `x`. Cross-checked against `||(I - W W^H) x||`.
pub fn deviation(s: &Subspace, x: &[C64]) -> Result<f64> {
    s.check_len(x)?;
    let via_complement = match s.complement() {
        Some(wp) => norm(&wp.adjoint_mul_vec(x)),
        None => 0.0,
    };
    let via_projector = norm(&sub_vec(x, &s.lift(&s.coordinates(x))));
    debug_assert!(
        (via_complement - via_projector).abs() <= 1e-12 * (1.0 + norm(x)),
        "deviation cross-check: {via_complement} vs {via_projector}"
    );
    Ok(via_complement.min(1.0))
}

/// `B(lambda) = W^H T(lambda) W` as a function with the same scalar terms.
pub fn project(t: &MatrixFunction, s: &Subspace) -> Result<MatrixFunction> {
    project_onto(t, s.basis())
}

/// `X^H T(lambda) X` for any `n x k` matrix `X`.
pub fn project_onto(t: &MatrixFunction, x: &ComplexMatrix) -> Result<MatrixFunction> {
    if x.rows() != t.dim() {
        return Err(NepError::ShapeMismatch(format!(
            "projector has {} rows, problem dimension is {}",
            x.rows(),
            t.dim()
        )));
    }
    let xh = x.adjoint();
    t.map_matrices(|a| xh.matmul(&a.matmul(x)))
}

/// Rank-one perturbation `E` making `lambda*` an exact eigenvalue of `B + E`.
#[derive(Clone, Debug)]
pub struct PerturbationWitness {
    pub e_at_lambda_star: ComplexMatrix,
    /// `W^H x* / sqrt(1 - eps^2)`
    pub u_hat: Vec<C64>,
    /// `B(lambda*) u_hat`
    pub residual: Vec<C64>,
    pub epsilon: f64,
    /// `||(B(lambda*) + E) u_hat||`
    pub eigen_residual: f64,
}

pub fn perturbation_witness(t: &MatrixFunction, s: &Subspace, reference: &ReferencePair) -> Result<PerturbationWitness> {
    let x = &reference.x_star;
    let eps = deviation(s, x)?;
    if eps >= 1.0 - 1e-10 {
        return Err(NepError::DegenerateDeviation(eps));
    }
    let c = (1.0 - eps * eps).sqrt();
    let u = s.coordinates(x);
    let u_hat = scale_vec(&u, C64::new(1.0 / c, 0.0));
    let t_star = t.eval(reference.lambda_star, 0)?;
    let w = s.basis();
    let b_star = w.adjoint().matmul(&t_star.matmul(w));
    let residual = b_star.mul_vec(&u_hat);

    let m = s.dim();
    let e = match s.complement() {
        Some(wp) => {
            let u_perp = wp.adjoint_mul_vec(x);
            // (1/c) W^H T W_perp u_perp u_hat^H
            let left = w.adjoint_mul_vec(&t_star.mul_vec(&wp.mul_vec(&u_perp)));
            ComplexMatrix::from_fn(m, m, |i, j| left[i] * u_hat[j].conj() / c)
        }
        None => ComplexMatrix::zeros(m, m),
    };
    let eigen_residual = norm(&b_star.add(&e).mul_vec(&u_hat));
    Ok(PerturbationWitness {
        e_at_lambda_star: e,
        u_hat,
        residual,
        epsilon: eps,
        eigen_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, unit_vector, ZERO};
    use crate::model::fixtures;
    use crate::random::{gaussian_matrix, seeded, unit_vector as random_unit};

    #[test]
    fn deviation_extremes() {
        let s = Subspace::new(fixtures::example_basis()).unwrap();
        assert_eq!(deviation(&s, &unit_vector(3, 2)).unwrap(), 0.0);
        assert!((deviation(&s, &unit_vector(3, 1)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn full_space_has_no_complement() {
        let s = Subspace::new(ComplexMatrix::identity(3)).unwrap();
        assert!(s.complement().is_none());
        assert_eq!(deviation(&s, &unit_vector(3, 0)).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]]);
        assert!(Subspace::new(m.clone()).is_err());
        assert!(Subspace::from_span(&m).is_ok());
    }

    #[test]
    fn projected_fixture_vanishes_at_zero() {
        let (t, _) = fixtures::example_rep();
        let s = Subspace::new(fixtures::example_basis()).unwrap();
        let b = project(&t, &s).unwrap();
        assert_eq!(b.eval(ZERO, 0).unwrap().max_abs(), 0.0);
        // B(l) = [[l/(l-1), 0], [l^2, l]]
        let l = C64::new(0.3, 0.2);
        let bl = b.eval(l, 0).unwrap();
        assert!((bl[(0, 0)] - l / (l - 1.0)).norm() < 1e-15);
        assert!((bl[(1, 0)] - l * l).norm() < 1e-15);
        assert!((bl[(1, 1)] - l).norm() < 1e-15);
        assert_eq!(bl[(0, 1)], ZERO);
    }

    #[test]
    fn evaluation_commutes_with_projection() {
        let mut rng = seeded(11);
        let coeffs: Vec<_> = (0..3).map(|_| gaussian_matrix(&mut rng, 5, 5, 1.0)).collect();
        let t = MatrixFunction::polynomial(&coeffs).unwrap();
        let s = Subspace::from_span(&gaussian_matrix(&mut rng, 5, 2, 1.0)).unwrap();
        let b = project(&t, &s).unwrap();
        let w = s.basis();
        for _ in 0..20 {
            let l = crate::random::complex_gaussian(&mut rng, 1.0);
            let direct = w.adjoint().matmul(&t.eval(l, 0).unwrap().matmul(w));
            let diff = b.eval(l, 0).unwrap().sub(&direct).max_abs();
            assert!(diff <= 1e-12 * (1.0 + direct.max_abs()), "{diff}");
        }
    }

    #[test]
    fn pythagoras() {
        let mut rng = seeded(5);
        for _ in 0..20 {
            let s = Subspace::from_span(&gaussian_matrix(&mut rng, 6, 3, 1.0)).unwrap();
            let x = random_unit(&mut rng, 6);
            let eps = deviation(&s, &x).unwrap();
            let u = s.coordinates(&x);
            assert!((eps * eps + dot(&u, &u).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_is_exact_eigenvector_of_perturbed_function() {
        let (t, r) = fixtures::example_rep();
        let mut rng = seeded(2);
        let w = fixtures::example_basis().add(&gaussian_matrix(&mut rng, 3, 2, 1e-3));
        let s = Subspace::from_span(&w).unwrap();
        let wit = perturbation_witness(&t, &s, &r).unwrap();
        assert!(wit.epsilon > 0.0);
        assert!(wit.eigen_residual <= 1e-12);
        let bound = wit.epsilon / (1.0 - wit.epsilon.powi(2)).sqrt() * t.eval(ZERO, 0).unwrap().norm2();
        assert!(wit.e_at_lambda_star.norm2() <= bound + 1e-12);
        assert!(norm(&wit.residual) <= bound + 1e-12);
    }

    #[test]
    fn witness_vanishes_for_exact_subspace() {
        let (t, r) = fixtures::example_rep();
        let s = Subspace::new(fixtures::example_basis()).unwrap();
        let wit = perturbation_witness(&t, &s, &r).unwrap();
        assert_eq!(wit.e_at_lambda_star.max_abs(), 0.0);
        assert_eq!(norm(&wit.residual), 0.0);
    }

    #[test]
    fn orthogonal_target_is_degenerate() {
        let a = ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let t = MatrixFunction::linear(&a).unwrap();
        let r = ReferencePair::new(&t, C64::new(1.0, 0.0), unit_vector(2, 0)).unwrap();
        let s = Subspace::new(ComplexMatrix::from_columns(&[unit_vector(2, 1)]).unwrap()).unwrap();
        assert!(matches!(
            perturbation_witness(&t, &s, &r),
            Err(NepError::DegenerateDeviation(_))
        ));
    }
}
