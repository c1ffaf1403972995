//! Every evaluator over a list of instances.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::instances::SuiteInstance;
use super::pipeline::{run_instance, InstanceSummary, PipelineOptions};
use super::subspace::build_subspace_eps;
use crate::bounds::TheoremId;
use crate::error::{NepError, Result};
use crate::model::load_problem;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub instances: Vec<InstanceSummary>,
    /// `(instance_id, theorem_id)` for every violated bound.
    pub failures: Vec<(String, TheoremId)>,
    /// `(instance_id, message)` for instances or evaluators that could not run.
    pub errors: Vec<(String, String)>,
}

impl VerifyOutcome {
    /// Every applicable bound held and nothing errored.
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }

    pub fn report_count(&self) -> usize {
        self.instances.iter().map(|i| i.reports.len()).sum()
    }

    pub fn inapplicable_count(&self) -> usize {
        self.instances.iter().map(|i| i.inapplicable.len()).sum()
    }
}

pub fn verify_all(instances: &[SuiteInstance], options: &PipelineOptions) -> VerifyOutcome {
    let mut out = VerifyOutcome {
        instances: Vec::new(),
        failures: Vec::new(),
        errors: Vec::new(),
    };
    for inst in instances {
        match run_instance(&inst.id, &inst.t, &inst.subspace, &inst.reference, options) {
            Ok(run) => {
                let s = run.summary();
                out.failures.extend(s.failures().map(|r| (inst.id.clone(), r.theorem_id)));
                out.errors
                    .extend(s.errors.iter().map(|(id, m)| (inst.id.clone(), format!("{id}: {m}"))));
                out.instances.push(s);
            }
            Err(e) => out.errors.push((inst.id.clone(), e.to_string())),
        }
    }
    out.instances.sort_by(|a, b| a.id.cmp(&b.id));
    out.failures.sort();
    out.errors.sort();
    out
}

/// One problem file with the deviations to test it at.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    /// Relative paths resolve against the suite file's directory.
    pub problem: PathBuf,
    pub epsilon: Vec<f64>,
    pub subspace_dim: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    pub instances: Vec<SuiteEntry>,
}

/// Instances described by a suite file. Every problem needs a reference pair.
pub fn load_suite_file(path: &Path) -> Result<Vec<SuiteInstance>> {
    let text = std::fs::read_to_string(path).map_err(|e| NepError::Format(format!("{}: {e}", path.display())))?;
    let suite: SuiteFile = serde_json::from_str(&text).map_err(|e| NepError::Format(e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for (k, entry) in suite.instances.iter().enumerate() {
        let p = if entry.problem.is_absolute() {
            entry.problem.clone()
        } else {
            base.join(&entry.problem)
        };
        let problem = load_problem(&p)?;
        let reference = problem
            .reference
            .ok_or_else(|| NepError::Format(format!("{} has no reference pair", p.display())))?;
        for (j, &eps) in entry.epsilon.iter().enumerate() {
            out.push(SuiteInstance {
                id: format!("file{k}-e{j}"),
                t: problem.function.clone(),
                reference: reference.clone(),
                subspace: build_subspace_eps(&reference.x_star, entry.subspace_dim, eps, entry.seed.wrapping_add(j as u64))?,
            });
        }
    }
    Ok(out)
}
