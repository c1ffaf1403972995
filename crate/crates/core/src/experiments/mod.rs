//! Experiment drivers: subspace construction, the demonstrations, deviation
//! sweeps, the verification suite and report emission.

mod config;
mod examples;
mod instances;
mod output;
mod pipeline;
mod subspace;
mod sweep;
mod verify;

pub use config::{parse_complex, ExperimentConfig, SelectionMode};
pub use examples::{median, run_example1, run_example2, Check, Example1Report, Example2Record, Example2Report};
pub use instances::{
    builtin_suite, jordan_signature_matrix, jordan_two_problem, jordan_two_subspace, random_nep,
    random_polynomial_nep, random_rational_nep, ProblemKind, SuiteInstance, SUITE_EPSILONS,
};
pub use output::{write_reports_jsonl, write_summary_csv, write_sweep_csv};
pub use pipeline::{run_instance, BoundOutcome, InstanceRun, InstanceSummary, PipelineOptions, Verdict};
pub use subspace::{build_subspace_eps, build_subspace_exact, perturb_subspace, tilted_subspace};
pub use sweep::{
    jordan_signature_case, log_log_slope, run_jordan_sweep, run_sweep, SignatureCase, SweepRecord, SweepResult,
};
pub use verify::{load_suite_file, verify_all, SuiteEntry, SuiteFile, VerifyOutcome};
