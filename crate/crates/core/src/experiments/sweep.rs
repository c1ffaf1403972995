//! Deviation sweeps and convergence-rate fits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::instances::{jordan_signature_matrix, jordan_two_problem, jordan_two_subspace};
use super::pipeline::{run_instance, InstanceSummary, PipelineOptions, Verdict};
use super::subspace::build_subspace_eps;
use crate::bounds::{jordan_block_order, sigma_min_profile, ProfileOptions, TheoremId};
use crate::error::{NepError, Result};
use crate::linalg::C64;
use crate::model::{MatrixFunction, ReferencePair};
use crate::projection::{deviation, Subspace};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRecord {
    /// Requested deviation, or tilt for tilted subspaces.
    pub epsilon: f64,
    pub measured_epsilon: f64,
    pub trial: usize,
    pub seed: u64,
    pub mu: C64,
    pub distance: f64,
    pub sin_ritz: f64,
    pub sin_refined: f64,
    pub ritz_residual: f64,
    pub sigma_hat_1: f64,
    pub verdicts: BTreeMap<TheoremId, Verdict>,
    /// Order detected by the rate bound's derivative profile, when it ran.
    pub detected_m_mu: Option<usize>,
    pub bounds: InstanceSummary,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
    /// Least-squares slope of `log |mu - lambda*|` against `log eps`.
    pub distance_slope: Option<f64>,
    /// Same for `sin(x*, x_hat)`.
    pub refined_slope: Option<f64>,
    /// `1 / m` for the most frequently detected `m`.
    pub predicted_slope: Option<f64>,
    /// `(record index, theorem_id)` for every failing bound.
    pub failures: Vec<(usize, TheoremId)>,
    /// `(record index, message)` for evaluator errors.
    pub errors: Vec<(usize, String)>,
}

impl SweepResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }
}

/// Slope of the least-squares line through `(ln x, ln y)`, over pairs with
/// both values above `1e-300`. Needs two distinct abscissae.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 1e-300 && *y > 1e-300 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

fn mix(seed: u64, a: usize, b: usize) -> u64 {
    seed.wrapping_mul(6_364_136_223_846_793_005)
        .wrapping_add((a as u64) << 32 | b as u64)
        .rotate_left(17)
}

fn sweep_with(
    t: &MatrixFunction,
    reference: &ReferencePair,
    levels: &[f64],
    trials: usize,
    seed: u64,
    options: &PipelineOptions,
    build: impl Fn(f64, u64) -> Result<Subspace>,
) -> Result<SweepResult> {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut errors = Vec::new();
    for (i, &eps) in levels.iter().enumerate() {
        for trial in 0..trials {
            let s_seed = mix(seed, i, trial);
            let s = build(eps, s_seed)?;
            let measured = deviation(&s, &reference.x_star)?;
            let run = run_instance(&format!("eps{eps:e}-trial{trial}"), t, &s, reference, options)?;
            let summary = run.summary();
            let detected = summary
                .reports
                .iter()
                .find(|r| r.theorem_id == TheoremId::RitzValueRate)
                .and_then(|r| r.intermediates.get("m_mu"))
                .map(|m| *m as usize);
            let idx = records.len();
            failures.extend(summary.failures().map(|r| (idx, r.theorem_id)));
            errors.extend(summary.errors.iter().map(|(id, m)| (idx, format!("{id}: {m}"))));
            records.push(SweepRecord {
                epsilon: eps,
                measured_epsilon: measured,
                trial,
                seed: s_seed,
                mu: summary.mu,
                distance: summary.distance,
                sin_ritz: summary.sin_ritz,
                sin_refined: summary.sin_refined,
                ritz_residual: summary.ritz_residual,
                sigma_hat_1: summary.sigma_hat_1,
                verdicts: summary.verdicts(),
                detected_m_mu: detected,
                bounds: summary,
            });
        }
    }
    let distance_slope = log_log_slope(&records.iter().map(|r| (r.measured_epsilon, r.distance)).collect::<Vec<_>>());
    let refined_slope = log_log_slope(&records.iter().map(|r| (r.measured_epsilon, r.sin_refined)).collect::<Vec<_>>());
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for m in records.iter().filter_map(|r| r.detected_m_mu) {
        *counts.entry(m).or_default() += 1;
    }
    let predicted_slope = counts
        .iter()
        .max_by_key(|(m, c)| (**c, std::cmp::Reverse(**m)))
        .map(|(m, _)| 1.0 / *m as f64);
    Ok(SweepResult {
        records,
        distance_slope,
        refined_slope,
        predicted_slope,
        failures,
        errors,
    })
}

/// Sweep over deviations with `build_subspace_eps`. The list must span at
/// least four decades.
pub fn run_sweep(
    t: &MatrixFunction,
    reference: &ReferencePair,
    epsilons: &[f64],
    trials: usize,
    subspace_dim: Option<usize>,
    seed: u64,
    options: &PipelineOptions,
) -> Result<SweepResult> {
    check_levels(epsilons, 1e4)?;
    let n = t.dim();
    let m = subspace_dim.unwrap_or(3.min(n.saturating_sub(1)).max(1));
    sweep_with(t, reference, epsilons, trials, seed, options, |eps, s| {
        build_subspace_eps(&reference.x_star, m, eps, s)
    })
}

/// Sweep over tilts of the projected Jordan block problem.
pub fn run_jordan_sweep(tilts: &[f64], trials: usize, seed: u64, options: &PipelineOptions) -> Result<SweepResult> {
    check_levels(tilts, 1e2)?;
    let (t, r, w0) = jordan_two_problem()?;
    sweep_with(&t, &r, tilts, trials, seed, options, |tilt, s| jordan_two_subspace(&w0, tilt, s))
}

fn check_levels(levels: &[f64], span: f64) -> Result<()> {
    if let Some(e) = levels.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(NepError::InvalidInput(format!("level {e} outside (0, 1)")));
    }
    let lo = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = levels.iter().copied().fold(0.0, f64::max);
    if levels.is_empty() || hi / lo < span * (1.0 - 1e-9) {
        return Err(NepError::InvalidInput(format!(
            "levels must span at least {span:e} (got {lo:e} to {hi:e})"
        )));
    }
    Ok(())
}

/// Derivative order detected on `S diag(J_k(mu), D) S^{-1} - l I` against the
/// staircase Jordan order, with `lambda*` at distance `offset` from `mu`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignatureCase {
    pub block: usize,
    pub detected_m_mu: usize,
    pub jordan_order: usize,
    pub derivatives: Vec<f64>,
}

pub fn jordan_signature_case(block: usize, offset: f64, seed: u64, tau_deriv: f64) -> Result<SignatureCase> {
    let mu = C64::new(0.25, -0.1);
    let m = jordan_signature_matrix(block, mu, seed)?;
    let b = MatrixFunction::linear(&m)?;
    let lambda_star = mu - C64::from_polar(offset, 0.7);
    let options = ProfileOptions {
        tau_deriv,
        ..ProfileOptions::default()
    };
    let p = sigma_min_profile(&b, lambda_star, mu, &options)?;
    Ok(SignatureCase {
        block,
        detected_m_mu: p.detected_m_mu,
        jordan_order: jordan_block_order(&m, mu)?,
        derivatives: p.derivatives,
    })
}
