//! Dense complex linear algebra used by every other module.
//!
//! Everything here is written for desk-scale problems (dimensions in the tens):
//! the algorithms favour accuracy and determinism over speed.

mod eig;
mod matrix;
mod ortho;
mod poly;
mod solve;
mod svd;

pub use eig::{eig_dense, eigenvalues, schur, spectral_order, EigenPair, EIG_DIMENSION_LIMIT};
pub use matrix::{
    dot, fix_phase, norm, normalized, phase_factor, scale_vec, sub_vec, unit_vector, ComplexMatrix, C64, ONE,
    ZERO,
};
pub use ortho::{complement_of_vector, orthonormal_complement, orthonormalize};
pub use poly::Poly;
pub use solve::{check_conditioning, solve_linear, solve_matrix, Lu, SINGULAR_RATIO};
pub use svd::{sigma_min, singular_values, svd, SvdResult};
