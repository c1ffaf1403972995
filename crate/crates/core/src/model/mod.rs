//! Analytic matrix-valued functions `T(lambda) = sum_i f_i(lambda) A_i`.

pub mod fixtures;
mod format;
mod function;
mod scalar;

pub use format::{load_problem, parse_problem, problem_to_json, save_problem, FnSpec, Problem, ProblemSpec, TermSpec};
pub use function::{taylor_remainder_const, MatrixFunction, ReferencePair, Term, REMAINDER_SAFETY};
pub use scalar::{ScalarFn, MAX_DERIVATIVE_ORDER, MAX_POLY_DEGREE};
