use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::SelectionMode;
use crate::bounds::{evaluate_all, Analysis, BoundReport, BoundSettings, TheoremId};
use crate::error::{NepError, Result};
use crate::extraction::sin_angle;
use crate::linalg::C64;
use crate::model::{MatrixFunction, ReferencePair};
use crate::projection::{project, Subspace};
use crate::solver::{select_ritz_value, solve_projected_with, SolveOptions, SpectrumResult};

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub selection: SelectionMode,
    pub region_radius: f64,
    pub bounds: BoundSettings,
    pub solve: SolveOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            selection: SelectionMode::Oracle,
            region_radius: 0.5,
            bounds: BoundSettings::default(),
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inapplicable,
    Error,
}

/// Result of one evaluator: a report, or the reason there is none.
#[derive(Clone, Debug)]
pub struct BoundOutcome {
    pub theorem_id: TheoremId,
    pub result: std::result::Result<BoundReport, NepError>,
}

impl BoundOutcome {
    pub fn verdict(&self) -> Verdict {
        match &self.result {
            Ok(r) if r.holds => Verdict::Holds,
            Ok(_) => Verdict::Fails,
            Err(e) if e.is_inapplicable() => Verdict::Inapplicable,
            Err(_) => Verdict::Error,
        }
    }
}

/// Serializable digest of one pipeline run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub id: String,
    pub mu: C64,
    pub lambda_star: C64,
    pub epsilon: f64,
    pub distance: f64,
    pub sin_ritz: f64,
    pub sin_refined: f64,
    pub ritz_residual: f64,
    pub sigma_hat_1: f64,
    pub geometric_multiplicity: usize,
    pub reports: Vec<BoundReport>,
    /// `(theorem_id, reason)` for bounds whose hypotheses fail.
    pub inapplicable: Vec<(TheoremId, String)>,
    /// `(theorem_id, message)` for evaluators that failed outright.
    pub errors: Vec<(TheoremId, String)>,
}

impl InstanceSummary {
    pub fn failures(&self) -> impl Iterator<Item = &BoundReport> {
        self.reports.iter().filter(|r| !r.holds)
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.reports.iter().all(|r| r.holds)
    }

    pub fn verdicts(&self) -> BTreeMap<TheoremId, Verdict> {
        let mut m = BTreeMap::new();
        for r in &self.reports {
            m.insert(r.theorem_id, if r.holds { Verdict::Holds } else { Verdict::Fails });
        }
        for (id, _) in &self.inapplicable {
            m.insert(*id, Verdict::Inapplicable);
        }
        for (id, _) in &self.errors {
            m.insert(*id, Verdict::Error);
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct InstanceRun {
    pub id: String,
    pub spectrum: SpectrumResult,
    pub analysis: Analysis,
    pub outcomes: Vec<BoundOutcome>,
}

impl InstanceRun {
    pub fn mu(&self) -> C64 {
        self.analysis.mu
    }

    pub fn outcome(&self, id: TheoremId) -> Option<&BoundOutcome> {
        self.outcomes.iter().find(|o| o.theorem_id == id)
    }

    pub fn summary(&self) -> InstanceSummary {
        let a = &self.analysis;
        let mut reports = Vec::new();
        let mut inapplicable = Vec::new();
        let mut errors = Vec::new();
        for o in &self.outcomes {
            match &o.result {
                Ok(r) => reports.push(r.clone()),
                Err(e) if e.is_inapplicable() => inapplicable.push((o.theorem_id, e.to_string())),
                Err(e) => errors.push((o.theorem_id, e.to_string())),
            }
        }
        InstanceSummary {
            id: self.id.clone(),
            mu: a.mu,
            lambda_star: a.lambda_star(),
            epsilon: a.epsilon,
            distance: a.distance,
            sin_ritz: sin_angle(&a.reference.x_star, &a.ritz.x_tilde),
            sin_refined: sin_angle(&a.reference.x_star, &a.refined.x_hat),
            ritz_residual: a.ritz.residual_norm,
            sigma_hat_1: a.refined.sigma_hat_1,
            geometric_multiplicity: a.ritz.geometric_multiplicity,
            reports,
            inapplicable,
            errors,
        }
    }
}

/// Project, solve, select `mu`, extract both vectors and evaluate every bound.
pub fn run_instance(
    id: &str,
    t: &MatrixFunction,
    subspace: &Subspace,
    reference: &ReferencePair,
    options: &PipelineOptions,
) -> Result<InstanceRun> {
    let b = project(t, subspace)?;
    let selection = options.selection.resolve(reference.lambda_star);
    let spectrum = solve_projected_with(&b, selection.anchor(), options.region_radius, &options.solve)?;
    let mu = select_ritz_value(&spectrum, selection)?;
    let analysis = Analysis::new(t, subspace, reference, mu, &options.bounds)?;
    let outcomes = evaluate_all(&analysis, &options.bounds)
        .into_iter()
        .map(|(theorem_id, result)| BoundOutcome { theorem_id, result })
        .collect();
    Ok(InstanceRun {
        id: id.to_string(),
        spectrum,
        analysis,
        outcomes,
    })
}
