//! Ritz and refined Ritz vectors for a selected Ritz value `mu`.

use serde::{Deserialize, Serialize};

use crate::error::{NepError, Result};
use crate::linalg::{dot, norm, svd, ComplexMatrix, C64};
use crate::model::MatrixFunction;
use crate::projection::Subspace;

/// Relative threshold counting near-zero singular values of `B(mu)`.
pub const MULTIPLICITY_TOL: f64 = 1e-8;
/// `mu` must satisfy `sigma_min(B(mu)) <= 1e-6 max(1, ||B(mu)||)`.
pub const EIGENVALUE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RitzExtraction {
    pub mu: C64,
    pub z: Vec<C64>,
    /// `W z`
    pub x_tilde: Vec<C64>,
    /// `||T(mu) x_tilde||`
    pub residual_norm: f64,
    pub geometric_multiplicity: usize,
    pub nonunique_flag: bool,
    /// Singular values of `B(mu)`, descending.
    pub b_singular_values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RefinedExtraction {
    pub mu: C64,
    pub y: Vec<C64>,
    /// `W y`
    pub x_hat: Vec<C64>,
    /// Smallest singular value of `T(mu) W`, equal to `||T(mu) x_hat||`.
    pub sigma_hat_1: f64,
    /// Second smallest; equals `sigma_hat_1` when `m = 1`.
    pub sigma_hat_2: f64,
    /// Largest.
    pub sigma_hat_m: f64,
    /// Left singular vector paired with `sigma_hat_1`.
    pub s: Vec<C64>,
    /// `sigma_hat_2 - sigma_hat_1 > 1e-10`, or `m = 1`.
    pub gap_certificate: bool,
}

/// Ritz vector from the smallest right singular vector of `B(mu) = W^H T(mu) W`.
pub fn ritz_vector(t: &MatrixFunction, mu: C64, s: &Subspace) -> Result<RitzExtraction> {
    ritz_vector_with(t, mu, s, MULTIPLICITY_TOL)
}

pub fn ritz_vector_with(t: &MatrixFunction, mu: C64, s: &Subspace, multiplicity_tol: f64) -> Result<RitzExtraction> {
    let w = s.basis();
    let t_mu = t.eval(mu, 0)?;
    let b_mu = w.adjoint().matmul(&t_mu.matmul(w));
    let dec = svd(&b_mu)?;
    let scale = dec.sigma_max().max(1.0);
    let (smin, _, z) = dec.smallest();
    if smin > EIGENVALUE_TOL * scale {
        return Err(NepError::NotAnEigenvalue {
            value: mu,
            sigma_min: smin,
        });
    }
    let geometric_multiplicity = dec.count_below(multiplicity_tol * scale);
    let x_tilde = s.lift(&z);
    let residual_norm = norm(&t_mu.mul_vec(&x_tilde));
    Ok(RitzExtraction {
        mu,
        z,
        x_tilde,
        residual_norm,
        geometric_multiplicity,
        nonunique_flag: geometric_multiplicity > 1,
        b_singular_values: dec.singular_values,
    })
}

/// `||T(mu) W z||` for a caller-chosen unit `z`.
pub fn ritz_residual_for(t: &MatrixFunction, mu: C64, s: &Subspace, z: &[C64]) -> Result<f64> {
    if z.len() != s.dim() {
        return Err(NepError::ShapeMismatch(format!(
            "coefficient vector has length {}, subspace dimension is {}",
            z.len(),
            s.dim()
        )));
    }
    let zn = norm(z);
    if (zn - 1.0).abs() > 1e-12 {
        return Err(NepError::InvalidInput(format!("z has norm {zn}, expected 1")));
    }
    Ok(norm(&t.eval(mu, 0)?.mul_vec(&s.lift(z))))
}

/// `T(mu) W`
pub fn residual_matrix(t: &MatrixFunction, mu: C64, s: &Subspace) -> Result<ComplexMatrix> {
    Ok(t.eval(mu, 0)?.matmul(s.basis()))
}

/// Unit vector in `span(W)` minimizing `||T(mu) v||`.
pub fn refined_vector(t: &MatrixFunction, mu: C64, s: &Subspace) -> Result<RefinedExtraction> {
    let dec = svd(&residual_matrix(t, mu, s)?)?;
    let k = dec.singular_values.len();
    let (sigma_hat_1, left, y) = dec.smallest();
    let sigma_hat_2 = if k >= 2 { dec.singular_values[k - 2] } else { sigma_hat_1 };
    Ok(RefinedExtraction {
        mu,
        x_hat: s.lift(&y),
        y,
        sigma_hat_1,
        sigma_hat_2,
        sigma_hat_m: dec.sigma_max(),
        s: left,
        gap_certificate: k == 1 || sigma_hat_2 - sigma_hat_1 > 1e-10,
    })
}

/// `sin` of the angle between unit vectors, as `||b - a (a^H b)||` clamped to `[0, 1]`.
///
/// Stays accurate for tiny angles where `sqrt(1 - |a^H b|^2)` cancels.
pub fn sin_angle(a: &[C64], b: &[C64]) -> f64 {
    let c = dot(a, b);
    let perp: Vec<C64> = b.iter().zip(a).map(|(bi, ai)| bi - ai * c).collect();
    let s = norm(&perp).clamp(0.0, 1.0);
    debug_assert!(
        (s * s - (1.0 - c.norm_sqr()).max(0.0)).abs() <= 1e-12,
        "sin_angle cross-check failed"
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fix_phase, unit_vector, ONE, ZERO};
    use crate::model::fixtures;
    use crate::random::{seeded, unit_vector as random_unit};

    fn fixture_subspace() -> Subspace {
        Subspace::new(fixtures::example_basis()).unwrap()
    }

    #[test]
    fn fixture_ritz_is_nonunique() {
        let (t, _) = fixtures::example_rep();
        let ritz = ritz_vector(&t, ZERO, &fixture_subspace()).unwrap();
        assert_eq!(ritz.geometric_multiplicity, 2);
        assert!(ritz.nonunique_flag);
        assert!((norm(&ritz.x_tilde) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixture_custom_residuals() {
        let (t, _) = fixtures::example_rep();
        let s = fixture_subspace();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = ritz_residual_for(&t, ZERO, &s, &[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
        assert!((r - h).abs() < 1e-15);
        assert_eq!(ritz_residual_for(&t, ZERO, &s, &[ONE, ZERO]).unwrap(), 0.0);
        assert!(ritz_residual_for(&t, ZERO, &s, &[ONE, ONE]).is_err());
    }

    #[test]
    fn fixture_refined_recovers_target() {
        let (t, r) = fixtures::example_rep();
        let refined = refined_vector(&t, ZERO, &fixture_subspace()).unwrap();
        assert_eq!(refined.sigma_hat_1, 0.0);
        assert_eq!(refined.sigma_hat_m, 1.0);
        let mut x = refined.x_hat.clone();
        fix_phase(&mut x);
        assert!(norm(&crate::linalg::sub_vec(&x, &r.x_star)) < 1e-14);
        assert!(refined.gap_certificate);
    }

    #[test]
    fn linear_ritz_and_refined() {
        let a = ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let t = MatrixFunction::linear(&a).unwrap();
        let s = Subspace::new(ComplexMatrix::identity(2)).unwrap();
        let mu = C64::new(1.0, 0.0);
        let ritz = ritz_vector(&t, mu, &s).unwrap();
        assert_eq!(ritz.x_tilde, unit_vector(2, 0));
        assert_eq!(ritz.geometric_multiplicity, 1);
        let refined = refined_vector(&t, mu, &s).unwrap();
        assert_eq!(refined.sigma_hat_1, 0.0);
        assert!(sin_angle(&refined.x_hat, &unit_vector(2, 0)) < 1e-15);
        assert!(matches!(
            ritz_vector(&t, C64::new(1.5, 0.0), &s),
            Err(NepError::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn sin_angle_basics() {
        let mut rng = seeded(4);
        let a = random_unit(&mut rng, 4);
        assert!(sin_angle(&a, &a) < 1e-15);
        assert_eq!(sin_angle(&unit_vector(3, 0), &unit_vector(3, 1)), 1.0);
        // Phase invariance
        let b: Vec<C64> = a.iter().map(|z| z * C64::from_polar(1.0, 0.4)).collect();
        assert!(sin_angle(&a, &b) < 1e-15);
        // Tiny angle resolved well below sqrt(eps)
        let tiny: f64 = 1e-12;
        let v = vec![C64::new((1.0 - tiny * tiny).sqrt(), 0.0), C64::new(tiny, 0.0)];
        assert!((sin_angle(&unit_vector(2, 0), &v) - tiny).abs() < 1e-20);
    }
}
