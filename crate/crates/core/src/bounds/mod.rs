//! Both sides of every error bound, with the constants behind them.

mod evaluate;
mod jordan;
mod profile;
mod report;

pub use evaluate::{
    evaluate_all, l_lower_estimate, perturbation_norm_bound, perturbed_eigenpair_check, refined_bounds,
    residual_angle_bound, residual_angle_refined, residual_angle_ritz, residual_ratio_sandwich,
    ritz_refined_angle_sandwich, ritz_value_rate_bound, ritz_vector_apriori_bound, schur_complement_l,
    sigma_min_projected_bound, uniqueness_check, Analysis, BoundSettings,
};
pub use jordan::{jordan_block_order, JORDAN_EIGENVALUE_TOL};
pub use profile::{sigma_min_profile, DerivativeProfile, ProfileOptions, DEGENERATE_SIGMA, MAX_PROFILE_ORDER};
pub use report::{BoundReport, Relation, TheoremId};
