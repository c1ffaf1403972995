use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// `||E(lambda*)|| <= eps / sqrt(1 - eps^2) ||T(lambda*)||`
    PerturbationNorm,
    /// `||(B(lambda*) + E) u_hat||` vanishes.
    PerturbedEigenpair,
    /// `sigma_min(B(lambda*)) <= eps / sqrt(1 - eps^2) ||T(lambda*)||`
    SigmaMinProjected,
    /// `|mu - lambda*| <= (eps / sqrt(1 - eps^2) m! / alpha ||T(lambda*)||)^(1/m)`
    RitzValueRate,
    /// Residual-based angle bound for the Ritz vector.
    ResidualAngleRitz,
    /// Residual-based angle bound for the refined vector.
    ResidualAngleRefined,
    /// A-priori Ritz vector bound through `sigma_min(C(lambda*))`.
    RitzVectorApriori,
    /// `sigma_hat_1 <= (||T(mu) x*|| + ||T(mu)|| eps) / sqrt(1 - eps^2)`
    RefinedResidualLocal,
    /// `sigma_hat_1 <= (||T(mu)|| eps + ||T'|| d + gamma d^2) / sqrt(1 - eps^2)`
    RefinedResidual,
    /// Refined angle through the true `sigma_min(L(mu))`.
    RefinedAngleLocal,
    /// Refined angle through the lower estimate of `sigma_min(L(mu))`.
    RefinedAngle,
    /// `sigma_min(T(mu))` separated from `sigma_2(T(mu))`.
    SmallestSingularSimple,
    /// Gap `sigma_hat_2 - sigma_hat_1 >= sigma_2(T(lambda*)) / 2 - gamma d^2`.
    RefinedUniqueness,
    RitzRefinedAngleLower,
    RitzRefinedAngleUpper,
    RitzRefinedAngleIdentity,
    ResidualRatioLower,
    ResidualRatioUpper,
}

impl TheoremId {
    pub const ALL: [TheoremId; 18] = [
        Self::PerturbationNorm,
        Self::PerturbedEigenpair,
        Self::SigmaMinProjected,
        Self::RitzValueRate,
        Self::ResidualAngleRitz,
        Self::ResidualAngleRefined,
        Self::RitzVectorApriori,
        Self::RefinedResidualLocal,
        Self::RefinedResidual,
        Self::RefinedAngleLocal,
        Self::RefinedAngle,
        Self::SmallestSingularSimple,
        Self::RefinedUniqueness,
        Self::RitzRefinedAngleLower,
        Self::RitzRefinedAngleUpper,
        Self::RitzRefinedAngleIdentity,
        Self::ResidualRatioLower,
        Self::ResidualRatioUpper,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PerturbationNorm => "perturbation_norm",
            Self::PerturbedEigenpair => "perturbed_eigenpair",
            Self::SigmaMinProjected => "sigma_min_projected",
            Self::RitzValueRate => "ritz_value_rate",
            Self::ResidualAngleRitz => "residual_angle_ritz",
            Self::ResidualAngleRefined => "residual_angle_refined",
            Self::RitzVectorApriori => "ritz_vector_apriori",
            Self::RefinedResidualLocal => "refined_residual_local",
            Self::RefinedResidual => "refined_residual",
            Self::RefinedAngleLocal => "refined_angle_local",
            Self::RefinedAngle => "refined_angle",
            Self::SmallestSingularSimple => "smallest_singular_simple",
            Self::RefinedUniqueness => "refined_uniqueness",
            Self::RitzRefinedAngleLower => "ritz_refined_angle_lower",
            Self::RitzRefinedAngleUpper => "ritz_refined_angle_upper",
            Self::RitzRefinedAngleIdentity => "ritz_refined_angle_identity",
            Self::ResidualRatioLower => "residual_ratio_lower",
            Self::ResidualRatioUpper => "residual_ratio_upper",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs <= rhs (1 + slack) + absolute_tolerance`
    AtMost,
    /// `|lhs - rhs| <= rhs slack + absolute_tolerance`
    Equal,
}

/// Both sides of one inequality with the constants that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem_id: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub slack_allowance: f64,
    pub absolute_tolerance: f64,
    pub relation: Relation,
    /// Booleans are stored as 0 or 1.
    pub intermediates: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(theorem_id: TheoremId, lhs: f64, rhs: f64, slack_allowance: f64, absolute_tolerance: f64) -> Self {
        Self::with_relation(theorem_id, Relation::AtMost, lhs, rhs, slack_allowance, absolute_tolerance)
    }

    pub fn equality(theorem_id: TheoremId, lhs: f64, rhs: f64, slack_allowance: f64, absolute_tolerance: f64) -> Self {
        Self::with_relation(theorem_id, Relation::Equal, lhs, rhs, slack_allowance, absolute_tolerance)
    }

    fn with_relation(
        theorem_id: TheoremId,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        slack_allowance: f64,
        absolute_tolerance: f64,
    ) -> Self {
        let mut r = Self {
            theorem_id,
            lhs,
            rhs,
            holds: false,
            slack_allowance,
            absolute_tolerance,
            relation,
            intermediates: BTreeMap::new(),
        };
        r.holds = r.margin() >= 0.0;
        r
    }

    /// Distance to failure; negative when the bound is violated, NaN counts as violated.
    pub fn margin(&self) -> f64 {
        let m = match self.relation {
            Relation::AtMost => self.rhs * (1.0 + self.slack_allowance) + self.absolute_tolerance - self.lhs,
            Relation::Equal => {
                self.rhs.abs() * self.slack_allowance + self.absolute_tolerance - (self.lhs - self.rhs).abs()
            }
        };
        if m.is_nan() {
            f64::NEG_INFINITY
        } else {
            m
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.intermediates.insert(key.to_string(), value);
        self
    }

    pub fn with_all(mut self, values: &BTreeMap<String, f64>) -> Self {
        for (k, v) in values {
            self.intermediates.insert(k.clone(), *v);
        }
        self
    }

    /// Re-evaluates the verdict from the stored numbers.
    pub fn recheck(&self) -> bool {
        self.margin() >= 0.0
    }
}
