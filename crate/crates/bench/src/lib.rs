//! Seeded inputs shared by the benchmarks.

use nepritz::experiments::{build_subspace_eps, random_nep, ProblemKind};
use nepritz::linalg::ComplexMatrix;
use nepritz::model::{MatrixFunction, ReferencePair};
use nepritz::projection::Subspace;
use nepritz::random::{gaussian_matrix, seeded};

pub fn square(n: usize, seed: u64) -> ComplexMatrix {
    gaussian_matrix(&mut seeded(seed), n, n, 1.0)
}

/// Quadratic problem of size `n` with a subspace of dimension `m` at deviation `eps`.
pub fn instance(n: usize, m: usize, eps: f64, seed: u64) -> (MatrixFunction, ReferencePair, Subspace) {
    let (t, r) = random_nep(ProblemKind::Polynomial, n, seed).expect("seeded problem");
    let s = build_subspace_eps(&r.x_star, m, eps, seed).expect("seeded subspace");
    (t, r, s)
}
