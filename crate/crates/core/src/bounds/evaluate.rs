//! Both sides of every bound for one instance `(T, W, lambda*, x*, mu)`.

use std::collections::BTreeMap;

use super::profile::{sigma_min_profile, DerivativeProfile, ProfileOptions};
use super::report::{BoundReport, TheoremId};
use crate::error::{NepError, Result};
use crate::extraction::{refined_vector, ritz_vector, sin_angle, RefinedExtraction, RitzExtraction};
use crate::linalg::{complement_of_vector, norm, singular_values, solve_linear, svd, ComplexMatrix, C64};
use crate::model::{taylor_remainder_const, MatrixFunction, ReferencePair};
use crate::projection::{perturbation_witness, project, project_onto, PerturbationWitness, Subspace};

#[derive(Clone, Debug)]
pub struct BoundSettings {
    /// Multiplier on the `gamma d^2` terms a bound drops.
    pub slack_factor: f64,
    /// Relative allowance for bounds that hold exactly up to rounding.
    pub rounding: f64,
    /// Absolute allowance for the angle sandwich and its identity.
    pub sandwich_tol: f64,
    /// Relative allowance for the residual-ratio sandwich.
    pub ratio_slack: f64,
    /// Relative allowance for the rate bound, covering finite-difference error in `alpha`.
    pub rate_slack: f64,
    /// Angles per circle when sampling Taylor remainders.
    pub remainder_samples: usize,
    pub profile: ProfileOptions,
}

impl Default for BoundSettings {
    fn default() -> Self {
        Self {
            slack_factor: 10.0,
            rounding: 1e-10,
            sandwich_tol: 1e-8,
            ratio_slack: 1e-8,
            rate_slack: 1e-3,
            remainder_samples: 32,
            profile: ProfileOptions::default(),
        }
    }
}

/// Every quantity the bounds share, computed once.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub t: MatrixFunction,
    pub subspace: Subspace,
    pub reference: ReferencePair,
    pub b: MatrixFunction,
    pub mu: C64,
    /// `|mu - lambda*|`
    pub distance: f64,
    pub epsilon: f64,
    /// `sqrt(1 - eps^2)`
    pub cos_eps: f64,
    pub t_star: ComplexMatrix,
    pub t_mu: ComplexMatrix,
    pub norm_t_star: f64,
    pub norm_t_prime: f64,
    pub norm_t_mu: f64,
    /// `||T(mu) x*||`
    pub t_mu_x_star: f64,
    /// Taylor remainder constant of `T` around `lambda*`; absent if the disc meets a pole.
    pub gamma: Option<f64>,
    pub remainder_radius: f64,
    /// Orthonormal complement of `x*`; absent when `n = 1`.
    pub x_perp: Option<ComplexMatrix>,
    pub witness: PerturbationWitness,
    pub ritz: RitzExtraction,
    pub refined: RefinedExtraction,
}

impl Analysis {
    pub fn new(
        t: &MatrixFunction,
        subspace: &Subspace,
        reference: &ReferencePair,
        mu: C64,
        settings: &BoundSettings,
    ) -> Result<Self> {
        if subspace.ambient_dim() != t.dim() {
            return Err(NepError::ShapeMismatch(format!(
                "subspace lives in C^{}, problem dimension is {}",
                subspace.ambient_dim(),
                t.dim()
            )));
        }
        let lambda_star = reference.lambda_star;
        let witness = perturbation_witness(t, subspace, reference)?;
        let epsilon = witness.epsilon;
        let b = project(t, subspace)?;
        let ritz = ritz_vector(t, mu, subspace)?;
        let refined = refined_vector(t, mu, subspace)?;
        let t_star = t.eval(lambda_star, 0)?;
        let t_mu = t.eval(mu, 0)?;
        let distance = (mu - lambda_star).norm();

        // The disc must contain mu and stay clear of every pole.
        let pole_room = 0.9 * t.distance_to_nearest_pole(lambda_star);
        let remainder_radius = (2.0 * distance).max(1e-2).min(pole_room);
        let gamma = if remainder_radius > distance && remainder_radius > 0.0 {
            Some(taylor_remainder_const(t, lambda_star, remainder_radius, settings.remainder_samples)?)
        } else {
            None
        };

        Ok(Self {
            t: t.clone(),
            subspace: subspace.clone(),
            reference: reference.clone(),
            b,
            mu,
            distance,
            epsilon,
            cos_eps: (1.0 - epsilon * epsilon).sqrt(),
            norm_t_star: t_star.norm2(),
            norm_t_prime: t.eval(lambda_star, 1)?.norm2(),
            norm_t_mu: t_mu.norm2(),
            t_mu_x_star: norm(&t_mu.mul_vec(&reference.x_star)),
            t_star,
            t_mu,
            gamma,
            remainder_radius,
            x_perp: complement_of_vector(&reference.x_star),
            witness,
            ritz,
            refined,
        })
    }

    pub fn lambda_star(&self) -> C64 {
        self.reference.lambda_star
    }

    /// Absolute floor for bounds whose two sides may both vanish.
    fn rounding_floor(&self) -> f64 {
        1e-13 * self.norm_t_star.max(self.norm_t_mu).max(1.0)
    }

    fn gamma_or_fail(&self) -> Result<f64> {
        if self.distance == 0.0 {
            return Ok(self.gamma.unwrap_or(0.0));
        }
        self.gamma.ok_or_else(|| {
            NepError::HypothesisFailed(format!(
                "no pole-free disc around lambda* reaches mu (distance {:e})",
                self.distance
            ))
        })
    }

    /// `gamma d^2`, the second-order Taylor remainder of `T` at `mu`.
    fn quadratic_term(&self) -> Result<f64> {
        Ok(self.gamma_or_fail()? * self.distance * self.distance)
    }

    fn base(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        m.insert("epsilon".into(), self.epsilon);
        m.insert("distance".into(), self.distance);
        m.insert("norm_t_star".into(), self.norm_t_star);
        m.insert("norm_t_prime".into(), self.norm_t_prime);
        m.insert("norm_t_mu".into(), self.norm_t_mu);
        if let Some(g) = self.gamma {
            m.insert("gamma".into(), g);
            m.insert("remainder_radius".into(), self.remainder_radius);
        }
        m
    }

    fn x_perp_or_fail(&self) -> Result<&ComplexMatrix> {
        self.x_perp
            .as_ref()
            .ok_or_else(|| NepError::HypothesisFailed("x* has no orthogonal complement (n = 1)".into()))
    }
}

/// `L(mu) = X_perp^H T(mu) X_perp` and its smallest singular value.
pub fn schur_complement_l(t: &MatrixFunction, mu: C64, x_star: &[C64]) -> Result<(ComplexMatrix, f64)> {
    let xn = norm(x_star);
    if (xn - 1.0).abs() > 1e-12 {
        return Err(NepError::InvalidInput(format!("x* has norm {xn}, expected 1")));
    }
    if x_star.len() != t.dim() {
        return Err(NepError::ShapeMismatch("x* length differs from problem dimension".into()));
    }
    let xp = complement_of_vector(x_star)
        .ok_or_else(|| NepError::HypothesisFailed("x* has no orthogonal complement (n = 1)".into()))?;
    let l = xp.adjoint().matmul(&t.eval(mu, 0)?.matmul(&xp));
    let s = *singular_values(&l)?.last().unwrap_or(&0.0);
    Ok((l, s))
}

/// `||E(lambda*)|| <= eps / sqrt(1 - eps^2) ||T(lambda*)||`
pub fn perturbation_norm_bound(a: &Analysis, settings: &BoundSettings) -> Result<BoundReport> {
    let rhs = a.epsilon / a.cos_eps * a.norm_t_star;
    let lhs = a.witness.e_at_lambda_star.norm2();
    Ok(BoundReport::new(TheoremId::PerturbationNorm, lhs, rhs, settings.rounding, a.rounding_floor()).with_all(&a.base()))
}

/// `(B(lambda*) + E) u_hat = 0`
pub fn perturbed_eigenpair_check(a: &Analysis) -> Result<BoundReport> {
    let scale = a.b.eval(a.lambda_star(), 0)?.norm2().max(1.0);
    Ok(
        BoundReport::new(TheoremId::PerturbedEigenpair, a.witness.eigen_residual, 0.0, 0.0, 1e-10 * scale)
            .with("norm_b_star", scale),
    )
}

/// `sigma_min(B(lambda*)) <= eps / sqrt(1 - eps^2) ||T(lambda*)||`
pub fn sigma_min_projected_bound(a: &Analysis, settings: &BoundSettings) -> Result<BoundReport> {
    let lhs = *singular_values(&a.b.eval(a.lambda_star(), 0)?)?.last().unwrap_or(&0.0);
    let rhs = a.epsilon / a.cos_eps * a.norm_t_star;
    Ok(BoundReport::new(TheoremId::SigmaMinProjected, lhs, rhs, settings.rounding, a.rounding_floor()).with_all(&a.base()))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `|mu - lambda*| <= (eps / sqrt(1 - eps^2) m! / alpha ||T(lambda*)||)^(1/m)`
///
/// Also returns the profile it used, when one exists.
pub fn ritz_value_rate_bound(
    a: &Analysis,
    settings: &BoundSettings,
) -> Result<(BoundReport, Option<DerivativeProfile>)> {
    let floor = 1e-14 * (1.0 + a.lambda_star().norm());
    if a.distance <= floor {
        let r = BoundReport::new(TheoremId::RitzValueRate, a.distance, 0.0, 0.0, floor).with_all(&a.base());
        return Ok((r, None));
    }
    let profile = sigma_min_profile(&a.b, a.lambda_star(), a.mu, &settings.profile)?;
    let m = profile.detected_m_mu;
    let alpha = profile.alpha_estimate;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(NepError::HypothesisFailed(format!("alpha estimate {alpha:e} is not positive")));
    }
    let rhs = (a.epsilon / a.cos_eps * factorial(m) / alpha * a.norm_t_star).powf(1.0 / m as f64);
    let r = BoundReport::new(TheoremId::RitzValueRate, a.distance, rhs, settings.rate_slack, floor)
        .with_all(&a.base())
        .with("m_mu", m as f64)
        .with("alpha", alpha)
        .with("step", profile.step)
        .with("sigma_min_multiplicity", profile.sigma_min_multiplicity as f64)
        .with("readings_disagree", profile.readings_disagree() as u8 as f64)
        .with("unresolved", profile.unresolved as u8 as f64);
    Ok((r, Some(profile)))
}

/// `sin(x*, x) <= (rho + ||T'(lambda*)|| d) / sigma_min(L(mu))` for any unit `x`
/// with `rho = ||T(mu) x||`. The dropped remainder is `gamma d^2 / sigma_min(L(mu))`.
pub fn residual_angle_bound(
    a: &Analysis,
    settings: &BoundSettings,
    id: TheoremId,
    x: &[C64],
    rho: f64,
) -> Result<BoundReport> {
    let xp = a.x_perp_or_fail()?;
    let l = xp.adjoint().matmul(&a.t_mu.matmul(xp));
    let l_sigma = *singular_values(&l)?.last().unwrap_or(&0.0);
    if l_sigma <= 1e-13 * a.norm_t_mu.max(1.0) {
        return Err(NepError::HypothesisFailed(format!("sigma_min(L(mu)) = {l_sigma:e}")));
    }
    let rhs = (rho + a.norm_t_prime * a.distance) / l_sigma;
    let dropped = settings.slack_factor * a.quadratic_term()? / l_sigma;
    let lhs = sin_angle(&a.reference.x_star, x);
    Ok(BoundReport::new(id, lhs, rhs, dropped / rhs.max(1e-30), 1e-12)
        .with_all(&a.base())
        .with("rho", rho)
        .with("sigma_min_l_mu", l_sigma))
}

pub fn residual_angle_ritz(a: &Analysis, settings: &BoundSettings) -> Result<BoundReport> {
    residual_angle_bound(a, settings, TheoremId::ResidualAngleRitz, &a.ritz.x_tilde, a.ritz.residual_norm)
}

pub fn residual_angle_refined(a: &Analysis, settings: &BoundSettings) -> Result<BoundReport> {
    residual_angle_bound(a, settings, TheoremId::ResidualAngleRefined, &a.refined.x_hat, a.refined.sigma_hat_1)
}

/// `sin(x*, x_tilde) <= (1 + ||T(lambda*)|| / (sqrt(1 - eps^2) s_C)) eps + ||T'|| d / s_C`
/// with `s_C = sigma_min(Z_perp^H B(lambda*) Z_perp)`. Needs a simple Ritz value.
pub fn ritz_vector_apriori_bound(a: &Analysis, settings: &BoundSettings) -> Result<BoundReport> {
    if a.ritz.geometric_multiplicity != 1 {
        return Err(NepError::HypothesisFailed(format!(
            "Ritz value has geometric multiplicity {}",
            a.ritz.geometric_multiplicity
        )));
    }
    let lhs = sin_angle(&a.reference.x_star, &a.ritz.x_tilde);
    let Some(zp) = complement_of_vector(&a.ritz.z) else {
        // m = 1: x_tilde spans W and the angle is eps itself.
        return Ok(
            BoundReport::new(TheoremId::RitzVectorApriori, lhs, a.epsilon, settings.rounding, 1e-12).with_all(&a.base())
        );
    };
    let b_star = a.b.eval(a.lambda_star(), 0)?;
    let c = zp.adjoint().matmul(&b_star.matmul(&zp));
    let c_sigma = *singular_values(&c)?.last().unwrap_or(&0.0);
    if c_sigma <= 1e-13 * b_star.norm2().max(1.0) {
        return Err(NepError::HypothesisFailed(format!("sigma_min(C(lambda*)) = {c_sigma:e}")));
    }
    let rhs = (1.0 + a.norm_t_star / (a.cos_eps * c_sigma)) * a.epsilon + a.norm_t_prime * a.distance / c_sigma;
    let dropped = settings.slack_factor * a.quadratic_term()? / c_sigma;
    Ok(BoundReport::new(TheoremId::RitzVectorApriori, lhs, rhs, dropped / rhs.max(1e-30), 1e-12)
        .with_all(&a.base())
        .with("sigma_min_c_star", c_sigma))
}

/// Refined residual and angle bounds: the local forms through `||T(mu) x*||`,
/// then the forms expanded around `lambda*`.
pub fn refined_bounds(a: &Analysis, settings: &BoundSettings) -> Vec<(TheoremId, Result<BoundReport>)> {
    let sigma1 = a.refined.sigma_hat_1;
    let lhs_angle = sin_angle(&a.reference.x_star, &a.refined.x_hat);
    let floor = a.rounding_floor();
    let local_rhs = (a.t_mu_x_star + a.norm_t_mu * a.epsilon) / a.cos_eps;
    let mut base = a.base();
    base.insert("sigma_hat_1".into(), sigma1);
    base.insert("t_mu_x_star".into(), a.t_mu_x_star);

    let mut out = Vec::new();
    out.push((
        TheoremId::RefinedResidualLocal,
        Ok(BoundReport::new(TheoremId::RefinedResidualLocal, sigma1, local_rhs, settings.rounding, floor).with_all(&base)),
    ));

    let expanded = a.quadratic_term().map(|q| (a.norm_t_mu * a.epsilon + a.norm_t_prime * a.distance + q) / a.cos_eps);
    out.push((
        TheoremId::RefinedResidual,
        expanded.clone().map(|rhs| {
            BoundReport::new(TheoremId::RefinedResidual, sigma1, rhs, settings.rounding, floor).with_all(&base)
        }),
    ));

    out.push((
        TheoremId::RefinedAngleLocal,
        (|| {
            let (_, l_sigma) = schur_complement_l(&a.t, a.mu, &a.reference.x_star)?;
            if l_sigma <= 1e-13 * a.norm_t_mu.max(1.0) {
                return Err(NepError::HypothesisFailed(format!("sigma_min(L(mu)) = {l_sigma:e}")));
            }
            Ok(
                BoundReport::new(TheoremId::RefinedAngleLocal, lhs_angle, local_rhs / l_sigma, settings.rounding, 1e-12)
                    .with_all(&base)
                    .with("sigma_min_l_mu", l_sigma),
            )
        })(),
    ));

    out.push((
        TheoremId::RefinedAngle,
        (|| {
            let residual_rhs = expanded?;
            let (lower, consts) = l_lower_estimate(a, settings)?;
            if lower <= 0.0 {
                return Err(NepError::HypothesisFailed(format!(
                    "lower estimate of sigma_min(L(mu)) is {lower:e}"
                )));
            }
            Ok(
                BoundReport::new(TheoremId::RefinedAngle, lhs_angle, residual_rhs / lower, settings.rounding, 1e-12)
                    .with_all(&base)
                    .with_all(&consts),
            )
        })(),
    ));
    out
}

/// `sigma_min(L(lambda*)) - ||L'(lambda*)|| d - beta d^2`, a lower bound on `sigma_min(L(mu))`.
pub fn l_lower_estimate(a: &Analysis, settings: &BoundSettings) -> Result<(f64, BTreeMap<String, f64>)> {
    let xp = a.x_perp_or_fail()?;
    let l_fun = project_onto(&a.t, xp)?;
    let ls = l_fun.eval(a.lambda_star(), 0)?;
    let l_sigma_star = *singular_values(&ls)?.last().unwrap_or(&0.0);
    let l_prime = l_fun.eval(a.lambda_star(), 1)?.norm2();
    let beta = if a.distance == 0.0 {
        0.0
    } else {
        a.gamma_or_fail()?;
        taylor_remainder_const(&l_fun, a.lambda_star(), a.remainder_radius, settings.remainder_samples)?
    };
    let lower = l_sigma_star - l_prime * a.distance - beta * a.distance * a.distance;
    let mut m = BTreeMap::new();
    m.insert("sigma_min_l_star".into(), l_sigma_star);
    m.insert("norm_l_prime".into(), l_prime);
    m.insert("beta".into(), beta);
    m.insert("sigma_min_l_lower".into(), lower);
    Ok((lower, m))
}

/// Simplicity of the smallest singular value of `T(mu)` and of `sigma_hat_1`.
///
/// Both reports are inapplicable when their hypotheses fail. The gap report
/// checks `sigma_hat_2 - sigma_hat_1 >= sigma_2(T(lambda*)) / 2 - gamma d^2`.
pub fn uniqueness_check(a: &Analysis, settings: &BoundSettings) -> Vec<(TheoremId, Result<BoundReport>)> {
    let sv_star = match singular_values(&a.t_star) {
        Ok(v) => v,
        Err(e) => return vec![(TheoremId::SmallestSingularSimple, Err(e))],
    };
    let n = sv_star.len();
    if n < 2 {
        let e = || NepError::HypothesisFailed("n = 1 has no second singular value".into());
        return vec![
            (TheoremId::SmallestSingularSimple, Err(e())),
            (TheoremId::RefinedUniqueness, Err(e())),
        ];
    }
    let sigma2 = sv_star[n - 2];
    let first_order = a.norm_t_prime * a.distance;
    let quad = a.quadratic_term();

    let mut base = a.base();
    base.insert("sigma_2_t_star".into(), sigma2);
    base.insert("sigma_hat_1".into(), a.refined.sigma_hat_1);
    base.insert("sigma_hat_2".into(), a.refined.sigma_hat_2);
    base.insert("gap_certificate".into(), a.refined.gap_certificate as u8 as f64);

    let simple = quad.clone().and_then(|q| {
        if first_order + q >= sigma2 / 2.0 {
            return Err(NepError::HypothesisFailed(format!(
                "||T'|| d + gamma d^2 = {:e} is not below sigma_2 / 2 = {:e}",
                first_order + q,
                sigma2 / 2.0
            )));
        }
        let sv_mu = singular_values(&a.t_mu)?;
        Ok(BoundReport::new(TheoremId::SmallestSingularSimple, sv_mu[n - 1], sv_mu[n - 2], 0.0, 0.0).with_all(&base))
    });

    let gap = quad.and_then(|q| {
        if a.subspace.dim() < 2 {
            return Err(NepError::HypothesisFailed("m = 1, the refined vector is trivially unique".into()));
        }
        let h1 = a.refined.sigma_hat_1 < sigma2 / 2.0 - first_order;
        let h2 = sigma2 > 2.0 * q;
        if !(h1 && h2) {
            return Err(NepError::HypothesisFailed(format!(
                "uniqueness hypotheses fail (sigma_hat_1 condition {h1}, curvature condition {h2})"
            )));
        }
        let lhs = sigma2 / 2.0 - q;
        let rhs = a.refined.sigma_hat_2 - a.refined.sigma_hat_1;
        let mut r = BoundReport::new(
            TheoremId::RefinedUniqueness,
            lhs,
            rhs,
            settings.rounding,
            1e-13 * a.refined.sigma_hat_m.max(1.0),
        )
        .with_all(&base);
        r.holds = r.holds && a.refined.gap_certificate;
        Ok(r)
    });
    vec![(TheoremId::SmallestSingularSimple, simple), (TheoremId::RefinedUniqueness, gap)]
}

/// Lower bound, upper bound and exact value of `sin(x_tilde, x_hat)` through
/// `C(mu) = Z_perp^H B(mu) Z_perp`.
pub fn ritz_refined_angle_sandwich(a: &Analysis, settings: &BoundSettings) -> Vec<(TheoremId, Result<BoundReport>)> {
    let ids = [
        TheoremId::RitzRefinedAngleLower,
        TheoremId::RitzRefinedAngleUpper,
        TheoremId::RitzRefinedAngleIdentity,
    ];
    match angle_sandwich_reports(a, settings) {
        Ok(reports) => ids.into_iter().zip(reports.into_iter().map(Ok)).collect(),
        Err(e) => ids.into_iter().map(|id| (id, Err(e.clone()))).collect(),
    }
}

fn angle_sandwich_reports(a: &Analysis, settings: &BoundSettings) -> Result<[BoundReport; 3]> {
    let zp = complement_of_vector(&a.ritz.z)
        .ok_or_else(|| NepError::HypothesisFailed("m = 1, Ritz and refined vectors coincide".into()))?;
    let b_mu = a.b.eval(a.mu, 0)?;
    let c = zp.adjoint().matmul(&b_mu.matmul(&zp));
    let dec = svd(&c)?;
    let (c_min, c_max) = (dec.sigma_min(), dec.sigma_max());
    if c_min <= 1e-12 {
        return Err(NepError::HypothesisFailed(format!("sigma_min(C(mu)) = {c_min:e}")));
    }
    let sigma1 = a.refined.sigma_hat_1;
    let ws = a.subspace.coordinates(&a.refined.s);
    let q = zp.adjoint_mul_vec(&ws);
    let sin = sin_angle(&a.ritz.z, &a.refined.y);
    let exact = sigma1 * norm(&solve_linear(&c, &q)?);
    let tol = settings.sandwich_tol;

    let mut base = a.base();
    base.insert("sigma_hat_1".into(), sigma1);
    base.insert("sigma_min_c_mu".into(), c_min);
    base.insert("sigma_max_c_mu".into(), c_max);
    base.insert("norm_projected_s".into(), norm(&q));
    base.insert("norm_w_s".into(), norm(&ws));
    base.insert("upper_loose".into(), sigma1 * norm(&ws) / c_min);

    Ok([
        BoundReport::new(TheoremId::RitzRefinedAngleLower, sigma1 * norm(&q) / c_max, sin, 0.0, tol).with_all(&base),
        BoundReport::new(TheoremId::RitzRefinedAngleUpper, sin, sigma1 * norm(&q) / c_min, 0.0, tol).with_all(&base),
        BoundReport::equality(TheoremId::RitzRefinedAngleIdentity, sin, exact, 0.0, tol).with_all(&base),
    ])
}

/// `cos^2 + (s2/s1)^2 sin^2 <= (r_tilde / r_hat)^2 <= cos^2 + (sm/s1)^2 sin^2`
/// with the angle between the Ritz and refined vectors.
pub fn residual_ratio_sandwich(a: &Analysis, settings: &BoundSettings) -> Vec<(TheoremId, Result<BoundReport>)> {
    let ids = [TheoremId::ResidualRatioLower, TheoremId::ResidualRatioUpper];
    let s1 = a.refined.sigma_hat_1;
    let sm = a.refined.sigma_hat_m;
    if s1 <= 1e-12 * sm.max(1.0) {
        return ids.into_iter().map(|id| (id, Err(NepError::DegenerateRatio(s1)))).collect();
    }
    let sin = sin_angle(&a.ritz.z, &a.refined.y);
    let cos2 = 1.0 - sin * sin;
    let ratio2 = (a.ritz.residual_norm / s1).powi(2);
    let k2 = (a.refined.sigma_hat_2 / s1).powi(2);
    let km = (sm / s1).powi(2);
    let lower = cos2 + k2 * sin * sin;
    let upper = cos2 + km * sin * sin;
    // Residuals and singular values carry absolute errors near eps * sigma_hat_m.
    let unit = 1e-14 * sm / s1;
    let allowance = 4.0 * unit * ratio2.max(1.0) + 4e-16 * (sin + 1e-16) * km;

    let mut base = a.base();
    base.insert("sigma_hat_1".into(), s1);
    base.insert("sigma_hat_2".into(), a.refined.sigma_hat_2);
    base.insert("sigma_hat_m".into(), sm);
    base.insert("sin_theta".into(), sin);
    base.insert("ritz_residual".into(), a.ritz.residual_norm);
    vec![
        (
            ids[0],
            Ok(BoundReport::new(ids[0], lower, ratio2, settings.ratio_slack, allowance).with_all(&base)),
        ),
        (
            ids[1],
            Ok(BoundReport::new(ids[1], ratio2, upper, settings.ratio_slack, allowance).with_all(&base)),
        ),
    ]
}

/// Every evaluator in a fixed order. Inapplicable bounds come back as errors
/// for which `is_inapplicable()` holds.
pub fn evaluate_all(a: &Analysis, settings: &BoundSettings) -> Vec<(TheoremId, Result<BoundReport>)> {
    let mut out = vec![
        (TheoremId::PerturbationNorm, perturbation_norm_bound(a, settings)),
        (TheoremId::PerturbedEigenpair, perturbed_eigenpair_check(a)),
        (TheoremId::SigmaMinProjected, sigma_min_projected_bound(a, settings)),
        (
            TheoremId::RitzValueRate,
            ritz_value_rate_bound(a, settings).map(|(r, _)| r),
        ),
        (TheoremId::ResidualAngleRitz, residual_angle_ritz(a, settings)),
        (TheoremId::ResidualAngleRefined, residual_angle_refined(a, settings)),
        (TheoremId::RitzVectorApriori, ritz_vector_apriori_bound(a, settings)),
    ];
    out.extend(refined_bounds(a, settings));
    out.extend(uniqueness_check(a, settings));
    out.extend(ritz_refined_angle_sandwich(a, settings));
    out.extend(residual_ratio_sandwich(a, settings));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unit_vector, ZERO};
    use crate::model::fixtures;

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    fn fixture_analysis() -> Analysis {
        let (t, rp) = fixtures::example_rep();
        let s = Subspace::new(fixtures::example_basis()).unwrap();
        Analysis::new(&t, &s, &rp, ZERO, &BoundSettings::default()).unwrap()
    }

    fn find(reports: &[(TheoremId, Result<BoundReport>)], id: TheoremId) -> &Result<BoundReport> {
        &reports.iter().find(|(i, _)| *i == id).unwrap().1
    }

    #[test]
    fn schur_complement_examples() {
        let (t, rp) = fixtures::example_rep();
        let (l, s) = schur_complement_l(&t, ZERO, &rp.x_star).unwrap();
        assert_eq!(l.rows(), 2);
        assert!((s - 1.0).abs() < 1e-14);
        let lin = MatrixFunction::linear(&ComplexMatrix::diag(&[r(1.0), r(2.0), r(3.0)])).unwrap();
        let (l, s) = schur_complement_l(&lin, r(1.0), &unit_vector(3, 0)).unwrap();
        assert!((s - 1.0).abs() < 1e-14);
        let mut sv = singular_values(&l).unwrap();
        sv.sort_by(f64::total_cmp);
        assert!((sv[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fixture_verdicts() {
        let a = fixture_analysis();
        let all = evaluate_all(&a, &BoundSettings::default());
        for id in [
            TheoremId::PerturbationNorm,
            TheoremId::SigmaMinProjected,
            TheoremId::RitzValueRate,
            TheoremId::RefinedResidual,
            TheoremId::RefinedAngle,
            TheoremId::RefinedUniqueness,
        ] {
            let rep = find(&all, id).as_ref().unwrap();
            assert!(rep.holds, "{id}: {rep:?}");
        }
        assert_eq!(find(&all, TheoremId::RefinedResidual).as_ref().unwrap().lhs, 0.0);
        assert!(matches!(
            find(&all, TheoremId::RitzVectorApriori),
            Err(NepError::HypothesisFailed(_))
        ));
        assert!(matches!(
            find(&all, TheoremId::RitzRefinedAngleIdentity),
            Err(NepError::HypothesisFailed(_))
        ));
        assert!(matches!(
            find(&all, TheoremId::ResidualRatioUpper),
            Err(NepError::DegenerateRatio(_))
        ));
        for (id, res) in &all {
            if let Err(e) = res {
                assert!(e.is_inapplicable(), "{id}: {e}");
            }
        }
    }

    #[test]
    fn every_bound_holds_on_a_perturbed_linear_problem() {
        use crate::random::{gaussian_matrix, seeded};
        let mut rng = seeded(21);
        let n = 6;
        let d: Vec<C64> = (0..n).map(|k| r(k as f64 + 1.0)).collect();
        let a_mat = ComplexMatrix::diag(&d);
        let t = MatrixFunction::linear(&a_mat).unwrap();
        let rp = ReferencePair::new(&t, r(1.0), unit_vector(n, 0)).unwrap();
        let mut w0 = ComplexMatrix::zeros(n, 3);
        for k in 0..3 {
            w0[(k, k)] = r(1.0);
        }
        let s = Subspace::from_span(&w0.add(&gaussian_matrix(&mut rng, n, 3, 1e-4))).unwrap();
        let b = project(&t, &s).unwrap();
        let spec = crate::solver::solve_projected(&b, r(1.0), 0.4).unwrap();
        let mu = crate::solver::select_ritz_value(&spec, crate::solver::Selection::Oracle(r(1.0))).unwrap();
        let an = Analysis::new(&t, &s, &rp, mu, &BoundSettings::default()).unwrap();
        for (id, res) in evaluate_all(&an, &BoundSettings::default()) {
            match res {
                Ok(rep) => assert!(rep.holds, "{id}: {rep:?}"),
                Err(e) => assert!(e.is_inapplicable(), "{id}: {e}"),
            }
        }
    }
}
