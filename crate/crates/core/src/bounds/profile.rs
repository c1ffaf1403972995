//! Finite-difference profile of `g(t) = sigma_min(B(lambda* + t d))` along the
//! ray from `lambda*` towards `mu`.

use serde::{Deserialize, Serialize};

use crate::error::{NepError, Result};
use crate::linalg::{sigma_min, singular_values, C64};
use crate::model::MatrixFunction;

/// Highest derivative order with a stencil.
pub const MAX_PROFILE_ORDER: usize = 5;
/// Below this `sigma_min(B(lambda*))` the profile is undefined.
pub const DEGENERATE_SIGMA: f64 = 1e-13;
/// Relative accuracy assumed for each computed `sigma_min`.
const SIGMA_ROUNDING: f64 = 1e-15;
/// An order is resolved when its estimate exceeds this multiple of its noise level.
const RESOLUTION_FACTOR: f64 = 100.0;

/// Central second-order stencils, `(offset, weight)` pairs in units of `h`.
fn stencil(order: usize) -> &'static [(i32, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        5 => &[(-3, -0.5), (-2, 2.0), (-1, -2.5), (1, 2.5), (2, -2.0), (3, 0.5)],
        _ => unreachable!("stencil order checked by caller"),
    }
}

fn half_width(order: usize) -> usize {
    stencil(order).iter().map(|(o, _)| o.unsigned_abs() as usize).max().unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct ProfileOptions {
    /// At most `MAX_PROFILE_ORDER`.
    pub max_order: usize,
    /// Defaults to `min(1e-3, |mu - lambda*| / 10)` so stencils stay clear of `mu`.
    pub step: Option<f64>,
    /// Relative threshold for detecting the first non-vanishing derivative.
    pub tau_deriv: f64,
    /// Points along the segment used for `alpha`.
    pub alpha_samples: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            max_order: 4,
            step: None,
            tau_deriv: 1e-2,
            alpha_samples: 25,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivativeProfile {
    pub step: f64,
    pub direction: C64,
    /// `g^(j)(0)` for `j = 0..=max_order`.
    pub derivatives: Vec<f64>,
    /// Rounding noise carried by each estimate.
    pub noise: Vec<f64>,
    /// Orders whose estimates stand clear of their noise.
    pub resolved: Vec<bool>,
    /// Smallest resolved `j >= 1` with `|g^(j)| > tau max_resolved |g^(i)|`.
    pub detected_m_mu: usize,
    /// No order resolved; `detected_m_mu` fell back to 1.
    pub unresolved: bool,
    /// Minimum of `|g^(m)|` over the sampled segment `[lambda*, mu)`.
    pub alpha_estimate: f64,
    /// Singular values of `B(lambda*)` within `1e-6` (relative) of the smallest.
    pub sigma_min_multiplicity: usize,
}

impl DerivativeProfile {
    /// The derivative order and the singular value multiplicity tell different stories.
    pub fn readings_disagree(&self) -> bool {
        self.sigma_min_multiplicity != self.detected_m_mu
    }
}

fn g(b: &MatrixFunction, center: C64, direction: C64, t: f64) -> Result<f64> {
    sigma_min(&b.eval(center + direction * t, 0)?)
}

fn derivative_at(b: &MatrixFunction, center: C64, direction: C64, t: f64, h: f64, order: usize) -> Result<f64> {
    let mut acc = 0.0;
    for &(off, w) in stencil(order) {
        acc += w * g(b, center, direction, t + off as f64 * h)?;
    }
    Ok(acc / h.powi(order as i32))
}

/// Profile of `sigma_min(B)` at `lambda*` in the direction of `mu`.
///
/// Fails with `DegenerateSigma` when `sigma_min(B(lambda*)) <= 1e-13`, where `g`
/// is not differentiable.
pub fn sigma_min_profile(
    b: &MatrixFunction,
    lambda_star: C64,
    mu: C64,
    options: &ProfileOptions,
) -> Result<DerivativeProfile> {
    if options.max_order == 0 || options.max_order > MAX_PROFILE_ORDER {
        return Err(NepError::InvalidInput(format!(
            "profile order must lie in 1..={MAX_PROFILE_ORDER}"
        )));
    }
    let dist = (mu - lambda_star).norm();
    let b_star = b.eval(lambda_star, 0)?;
    let sv = singular_values(&b_star)?;
    let g0 = *sv.last().unwrap_or(&0.0);
    if g0 <= DEGENERATE_SIGMA || dist == 0.0 {
        return Err(NepError::DegenerateSigma(g0));
    }
    let direction = (mu - lambda_star) / dist;
    let h = options.step.unwrap_or((dist / 10.0).min(1e-3));
    if !(h > 0.0 && h.is_finite()) {
        return Err(NepError::InvalidInput("profile step must be positive".into()));
    }
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);

    let mut derivatives = Vec::with_capacity(options.max_order + 1);
    let mut noise = Vec::with_capacity(options.max_order + 1);
    for j in 0..=options.max_order {
        derivatives.push(derivative_at(b, lambda_star, direction, 0.0, h, j)?);
        let weight: f64 = stencil(j).iter().map(|(_, w)| w.abs()).sum();
        noise.push(SIGMA_ROUNDING * scale * weight / h.powi(j as i32));
    }
    let resolved: Vec<bool> = derivatives
        .iter()
        .zip(&noise)
        .map(|(d, n)| d.abs() > RESOLUTION_FACTOR * n)
        .collect();
    let top = (1..=options.max_order)
        .filter(|&j| resolved[j])
        .map(|j| derivatives[j].abs())
        .fold(0.0, f64::max);
    let detected = (1..=options.max_order).find(|&j| resolved[j] && derivatives[j].abs() > options.tau_deriv * top);
    let unresolved = detected.is_none();
    let m = detected.unwrap_or(1);

    // alpha over t in [0, dist - (w + 1) h] keeps every stencil off the kink at mu.
    let reach = (dist - (half_width(m) + 1) as f64 * h).max(0.0);
    let samples = options.alpha_samples.max(1);
    let mut alpha = f64::INFINITY;
    for i in 0..samples {
        let t = if samples == 1 { 0.0 } else { reach * i as f64 / (samples - 1) as f64 };
        alpha = alpha.min(derivative_at(b, lambda_star, direction, t, h, m)?.abs());
    }

    let sigma_min_multiplicity = sv.iter().filter(|&&s| s <= g0 * (1.0 + 1e-6)).count();
    Ok(DerivativeProfile {
        step: h,
        direction,
        derivatives,
        noise,
        resolved,
        detected_m_mu: m,
        unresolved,
        alpha_estimate: alpha,
        sigma_min_multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn stencils_are_exact_on_monomials() {
        // A stencil of order j annihilates lower powers and maps t^j to j!.
        for j in 1..=MAX_PROFILE_ORDER {
            let mut fact = 1.0;
            for i in 1..=j {
                fact *= i as f64;
            }
            for p in 0..=j {
                let v: f64 = stencil(j).iter().map(|&(o, w)| w * (o as f64).powi(p as i32)).sum();
                let expected = if p == j { fact } else { 0.0 };
                assert!((v - expected).abs() < 1e-12, "order {j}, power {p}: {v}");
            }
        }
    }

    #[test]
    fn simple_eigenvalue_gives_order_one() {
        // B(l) = diag(1 - l, 2 - l); g(t) = |1 - (0.99 + t)| near lambda* = 0.99.
        let b = MatrixFunction::linear(&ComplexMatrix::diag(&[r(1.0), r(2.0)])).unwrap();
        let p = sigma_min_profile(&b, r(0.99), r(1.0), &ProfileOptions::default()).unwrap();
        assert_eq!(p.detected_m_mu, 1);
        assert!((p.derivatives[1] + 1.0).abs() < 1e-6);
        assert!((p.alpha_estimate - 1.0).abs() < 1e-6);
        assert_eq!(p.sigma_min_multiplicity, 1);
        assert!(!p.readings_disagree());
    }

    #[test]
    fn degenerate_at_eigenvalue() {
        let b = MatrixFunction::linear(&ComplexMatrix::diag(&[r(1.0), r(2.0)])).unwrap();
        assert!(matches!(
            sigma_min_profile(&b, r(1.0), r(1.0), &ProfileOptions::default()),
            Err(NepError::DegenerateSigma(_))
        ));
    }

    #[test]
    fn tiny_step_drops_noisy_orders() {
        let b = MatrixFunction::linear(&ComplexMatrix::diag(&[r(1.0), r(2.0)])).unwrap();
        let p = sigma_min_profile(&b, r(1.0 - 1e-8), r(1.0), &ProfileOptions::default()).unwrap();
        assert!(p.resolved[1]);
        assert!(!p.resolved[4]);
        assert_eq!(p.detected_m_mu, 1);
    }
}
