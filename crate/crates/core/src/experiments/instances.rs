//! Seeded test problems with a known eigenpair.

use serde::{Deserialize, Serialize};

use super::subspace::{build_subspace_eps, perturb_subspace, tilted_subspace};
use crate::error::Result;
use crate::linalg::{solve_matrix, unit_vector, ComplexMatrix, Poly, C64, ONE, ZERO};
use crate::model::{fixtures, MatrixFunction, ReferencePair, ScalarFn, Term};
use crate::projection::Subspace;
use crate::random::{complex_gaussian, gaussian_matrix, seeded, uniform, unit_vector as random_unit, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Polynomial,
    Rational,
}

/// `A0 <- A0 - T(lambda*) x* x*^H` makes `(lambda*, x*)` an exact eigenpair,
/// provided the first term is the constant one.
fn pin_eigenpair(terms: &mut [Term], lambda: C64, x: &[C64]) -> Result<()> {
    let t = MatrixFunction::new(terms.to_vec())?;
    let tx = t.eval(lambda, 0)?.mul_vec(x);
    let n = x.len();
    let fix = ComplexMatrix::from_fn(n, n, |i, j| tx[i] * x[j].conj());
    terms[0].matrix = terms[0].matrix.sub(&fix);
    Ok(())
}

fn random_pair(rng: &mut Rng, n: usize) -> (C64, Vec<C64>) {
    let lambda = complex_gaussian(rng, 0.5);
    (lambda, random_unit(rng, n))
}

/// `T(l) = A0 + l A1 + l^2 A2` with Gaussian entries scaled by `1/sqrt(n)`.
pub fn random_polynomial_nep(n: usize, seed: u64) -> Result<(MatrixFunction, ReferencePair)> {
    let mut rng = seeded(seed);
    let s = 1.0 / (n as f64).sqrt();
    let mut terms: Vec<Term> = (0..3)
        .map(|k| Term::new(ScalarFn::monomial(k), gaussian_matrix(&mut rng, n, n, s)))
        .collect();
    let (lambda, x) = random_pair(&mut rng, n);
    pin_eigenpair(&mut terms, lambda, &x)?;
    let t = MatrixFunction::new(terms)?;
    let r = ReferencePair::new(&t, lambda, x)?;
    Ok((t, r))
}

/// `T(l) = A0 + l A1 + l/(l - p) A2` with the pole at distance 1.5 to 2.5 from `lambda*`.
pub fn random_rational_nep(n: usize, seed: u64) -> Result<(MatrixFunction, ReferencePair)> {
    let mut rng = seeded(seed);
    let s = 1.0 / (n as f64).sqrt();
    let a0 = gaussian_matrix(&mut rng, n, n, s);
    let a1 = gaussian_matrix(&mut rng, n, n, s);
    let a2 = gaussian_matrix(&mut rng, n, n, s);
    let (lambda, x) = random_pair(&mut rng, n);
    let angle = uniform(&mut rng, 0.0, 2.0 * std::f64::consts::PI);
    let pole = lambda + C64::from_polar(uniform(&mut rng, 1.5, 2.5), angle);
    let f = ScalarFn::rational(Poly::from_real(&[0.0, 1.0]), Poly::new(vec![-pole, ONE]))?;
    let mut terms = vec![
        Term::new(ScalarFn::monomial(0), a0),
        Term::new(ScalarFn::monomial(1), a1),
        Term::new(f, a2),
    ];
    pin_eigenpair(&mut terms, lambda, &x)?;
    let t = MatrixFunction::new(terms)?;
    let r = ReferencePair::new(&t, lambda, x)?;
    Ok((t, r))
}

pub fn random_nep(kind: ProblemKind, n: usize, seed: u64) -> Result<(MatrixFunction, ReferencePair)> {
    match kind {
        ProblemKind::Polynomial => random_polynomial_nep(n, seed),
        ProblemKind::Rational => random_rational_nep(n, seed),
    }
}

/// `A - l I` with `A e1 = 0` simple, while `[e1, e2]^H A [e1, e2]` is a
/// 2x2 Jordan block at zero. Tilting `[e1, e2]` towards `e3` by `t` moves the
/// projected eigenvalue by about `sqrt(t)`.
pub fn jordan_two_problem() -> Result<(MatrixFunction, ReferencePair, ComplexMatrix)> {
    let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]);
    let t = MatrixFunction::linear(&a)?;
    let r = ReferencePair::new(&t, ZERO, unit_vector(3, 0))?;
    let w0 = ComplexMatrix::from_columns(&[unit_vector(3, 0), unit_vector(3, 1)])?;
    Ok((t, r, w0))
}

/// `S diag(J_k(mu), d1, d2) S^{-1}` with a well-conditioned seeded `S`.
pub fn jordan_signature_matrix(block: usize, mu: C64, seed: u64) -> Result<ComplexMatrix> {
    let n = block + 2;
    let mut core = ComplexMatrix::zeros(n, n);
    for i in 0..block {
        core[(i, i)] = mu;
        if i + 1 < block {
            core[(i, i + 1)] = ONE;
        }
    }
    core[(block, block)] = mu + C64::new(1.5, 0.5);
    core[(block + 1, block + 1)] = mu + C64::new(-1.0, 1.0);
    let mut rng = seeded(seed);
    let s = gaussian_matrix(&mut rng, n, n, 0.3 / (n as f64).sqrt()).shift_diagonal(ONE);
    let s_inv = solve_matrix(&s, &ComplexMatrix::identity(n))?;
    Ok(s.matmul(&core).matmul(&s_inv))
}

/// One entry of a verification suite.
#[derive(Clone, Debug)]
pub struct SuiteInstance {
    pub id: String,
    pub t: MatrixFunction,
    pub reference: ReferencePair,
    pub subspace: Subspace,
}

/// Deviations used by the built-in suite.
pub const SUITE_EPSILONS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

/// Ten random problems (polynomial and rational, `n` in 4..=12, `m` in 2..=6)
/// at four deviations each, plus the demonstration problem with its exact and
/// two perturbed subspaces.
pub fn builtin_suite(seed: u64) -> Result<Vec<SuiteInstance>> {
    let mut out = Vec::new();
    let (t, r) = fixtures::example_rep();
    let exact = Subspace::new(fixtures::example_basis())?;
    for (k, sigma) in [0.0, 1e-4, 1e-6].into_iter().enumerate() {
        out.push(SuiteInstance {
            id: format!("demo-{k}"),
            t: t.clone(),
            reference: r.clone(),
            subspace: perturb_subspace(&exact, sigma, seed.wrapping_add(k as u64))?,
        });
    }
    let mut rng = seeded(seed);
    for p in 0..10u64 {
        let kind = if p % 2 == 0 { ProblemKind::Polynomial } else { ProblemKind::Rational };
        let n = 4 + (p as usize * 7) % 9;
        let m = (2 + p as usize % 5).min(n - 1);
        let problem_seed = seed.wrapping_mul(1_000_003).wrapping_add(p);
        let (t, r) = random_nep(kind, n, problem_seed)?;
        for (k, eps) in SUITE_EPSILONS.into_iter().enumerate() {
            let sub_seed = rand::Rng::random::<u64>(&mut rng);
            out.push(SuiteInstance {
                id: format!("{}-{p}-n{n}-m{m}-e{k}", kind_tag(kind)),
                t: t.clone(),
                reference: r.clone(),
                subspace: build_subspace_eps(&r.x_star, m, eps, sub_seed)?,
            });
        }
    }
    Ok(out)
}

fn kind_tag(kind: ProblemKind) -> &'static str {
    match kind {
        ProblemKind::Polynomial => "poly",
        ProblemKind::Rational => "rat",
    }
}

/// Subspace for the Jordan rate problem at tilt `t`.
pub fn jordan_two_subspace(w0: &ComplexMatrix, tilt: f64, seed: u64) -> Result<Subspace> {
    tilted_subspace(w0, &unit_vector(3, 2), tilt, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::jordan_block_order;
    use crate::linalg::norm;

    #[test]
    fn random_problems_have_exact_pairs() {
        for seed in 0..6 {
            for kind in [ProblemKind::Polynomial, ProblemKind::Rational] {
                let (t, r) = random_nep(kind, 7, seed).unwrap();
                let res = norm(&t.eval(r.lambda_star, 0).unwrap().mul_vec(&r.x_star));
                assert!(res < 1e-13, "{kind:?} seed {seed}: {res}");
            }
        }
    }

    #[test]
    fn jordan_problem_structure() {
        let (t, r, w0) = jordan_two_problem().unwrap();
        assert_eq!(r.lambda_star, ZERO);
        let a = t.eval(ZERO, 0).unwrap();
        let projected = w0.adjoint().matmul(&a).matmul(&w0);
        assert_eq!(jordan_block_order(&projected, ZERO).unwrap(), 2);
        assert_eq!(jordan_block_order(&a, ZERO).unwrap(), 1);
    }

    #[test]
    fn signature_matrices_have_requested_blocks() {
        let mu = C64::new(0.2, 0.1);
        for k in 1..=3 {
            let m = jordan_signature_matrix(k, mu, 5).unwrap();
            assert_eq!(jordan_block_order(&m, mu).unwrap(), k);
        }
    }

    #[test]
    fn builtin_suite_shape() {
        let suite = builtin_suite(42).unwrap();
        assert!(suite.len() >= 30);
        for inst in &suite {
            assert!(inst.t.dim() <= 12);
            assert!(inst.subspace.dim() <= 6);
        }
        let mut ids: Vec<_> = suite.iter().map(|i| i.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), suite.len());
    }
}
