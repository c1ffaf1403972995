//! JSON problem files.
//!
//! ```json
//! {"n": 2,
//!  "terms": [{"fn": {"type": "polynomial", "coefficients": [[0,0],[1,0]]},
//!             "matrix": [[1,0],[0,0],[0,0],[1,0]]}],
//!  "reference": {"lambda_star": [0,0], "x_star": [[1,0],[0,0]]}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are flat row-major lists.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::function::{MatrixFunction, ReferencePair, Term};
use super::scalar::ScalarFn;
use crate::error::{NepError, Result};
use crate::linalg::{ComplexMatrix, Poly, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FnSpec {
    Polynomial { coefficients: Vec<C64> },
    Rational { numerator: Vec<C64>, denominator: Vec<C64> },
    Exponential { scale: C64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(rename = "fn")]
    pub function: FnSpec,
    pub matrix: Vec<C64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSpec {
    pub lambda_star: C64,
    pub x_star: Vec<C64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub n: usize,
    pub terms: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSpec>,
}

/// A parsed problem: the function and, when present, its validated reference pair.
#[derive(Clone, Debug)]
pub struct Problem {
    pub function: MatrixFunction,
    pub reference: Option<ReferencePair>,
}

impl FnSpec {
    fn build(&self) -> Result<ScalarFn> {
        match self {
            Self::Polynomial { coefficients } => ScalarFn::polynomial(Poly::new(coefficients.clone())),
            Self::Rational {
                numerator,
                denominator,
            } => ScalarFn::rational(Poly::new(numerator.clone()), Poly::new(denominator.clone())),
            Self::Exponential { scale } => Ok(ScalarFn::exponential(*scale)),
        }
    }

    fn from_fn(f: &ScalarFn) -> Self {
        match f {
            ScalarFn::Polynomial(p) => Self::Polynomial {
                coefficients: p.coeffs().to_vec(),
            },
            ScalarFn::Rational {
                numerator,
                denominator,
            } => Self::Rational {
                numerator: numerator.coeffs().to_vec(),
                denominator: denominator.coeffs().to_vec(),
            },
            ScalarFn::Exponential { scale } => Self::Exponential { scale: *scale },
        }
    }
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem> {
        let n = self.n;
        if n == 0 {
            return Err(NepError::Format("\"n\" must be positive".into()));
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if t.matrix.len() != n * n {
                    return Err(NepError::Format(format!(
                        "term {i}: matrix has {} entries, expected {}",
                        t.matrix.len(),
                        n * n
                    )));
                }
                Ok(Term::new(t.function.build()?, ComplexMatrix::new(n, n, t.matrix.clone())?))
            })
            .collect::<Result<Vec<_>>>()?;
        let function = MatrixFunction::new(terms)?;
        let reference = self
            .reference
            .as_ref()
            .map(|r| ReferencePair::new(&function, r.lambda_star, r.x_star.clone()))
            .transpose()?;
        Ok(Problem { function, reference })
    }

    pub fn from_problem(t: &MatrixFunction, reference: Option<&ReferencePair>) -> Self {
        Self {
            n: t.dim(),
            terms: t
                .terms()
                .iter()
                .map(|term| TermSpec {
                    function: FnSpec::from_fn(&term.function),
                    matrix: term.matrix.data().to_vec(),
                })
                .collect(),
            reference: reference.map(|r| ReferenceSpec {
                lambda_star: r.lambda_star,
                x_star: r.x_star.clone(),
            }),
        }
    }
}

pub fn parse_problem(json: &str) -> Result<Problem> {
    let spec: ProblemSpec = serde_json::from_str(json).map_err(|e| NepError::Format(e.to_string()))?;
    spec.build()
}

pub fn problem_to_json(t: &MatrixFunction, reference: Option<&ReferencePair>) -> String {
    serde_json::to_string_pretty(&ProblemSpec::from_problem(t, reference)).expect("problem spec serializes")
}

pub fn load_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| NepError::Format(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

pub fn save_problem(path: &Path, t: &MatrixFunction, reference: Option<&ReferencePair>) -> Result<()> {
    std::fs::write(path, problem_to_json(t, reference)).map_err(|e| NepError::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;

    #[test]
    fn round_trip_preserves_evaluation() {
        let (t, r) = fixtures::example_rep();
        let json = problem_to_json(&t, Some(&r));
        let back = parse_problem(&json).unwrap();
        for lam in [C64::new(0.3, 0.1), C64::new(-2.0, 0.5)] {
            assert_eq!(back.function.eval(lam, 0).unwrap(), t.eval(lam, 0).unwrap());
        }
        assert_eq!(back.reference.unwrap(), r);
    }

    #[test]
    fn parses_hand_written_file() {
        let json = r#"{"n": 1,
            "terms": [{"fn": {"type": "polynomial", "coefficients": [[-2,0],[0,0],[1,0]]}, "matrix": [[1,0]]}],
            "reference": {"lambda_star": [1.4142135623730951, 0], "x_star": [[1,0]]}}"#;
        let p = parse_problem(json).unwrap();
        assert_eq!(p.function.dim(), 1);
        assert!(p.reference.is_some());
    }

    #[test]
    fn rejects_malformed() {
        let bad_len = r#"{"n": 2, "terms": [{"fn": {"type": "exponential", "scale": [1,0]}, "matrix": [[1,0]]}]}"#;
        assert!(matches!(parse_problem(bad_len), Err(NepError::Format(_))));
        let bad_type = r#"{"n": 1, "terms": [{"fn": {"type": "bessel"}, "matrix": [[1,0]]}]}"#;
        assert!(matches!(parse_problem(bad_type), Err(NepError::Format(_))));
        let bad_ref = r#"{"n": 1, "terms": [{"fn": {"type": "polynomial", "coefficients": [[1,0]]}, "matrix": [[1,0]]}],
            "reference": {"lambda_star": [0,0], "x_star": [[1,0]]}}"#;
        assert!(matches!(parse_problem(bad_ref), Err(NepError::NotAnEigenvalue { .. })));
    }
}
