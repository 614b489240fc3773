//! Sphere quadrature, continuous and discrete `L_p` norms, and the
//! Marcinkiewicz–Zygmund sandwich checks for partition-based and random
//! sampling.

mod check;
mod coupon;
mod norms;
mod polynomial;
mod quadrature;
mod random;
mod weights;

pub use check::{
    det_mz_check, det_precondition_lhs, det_required_patches, sandwich_ratios, MzReport, RatioRange, TrialSpec,
};
pub use coupon::{coupon_budget, coupon_failure_bound, coupon_simulate, draws_cover};
pub use norms::{
    abs_pow_integral, continuous_norm, discrete_norm, discrete_norm_of_values, sup_norm, Exponent, Measure,
};
pub use polynomial::{random_polynomial, SpherePolynomial};
pub use quadrature::{quadrature_rule, QuadratureRule};
pub use random::{
    budget_coupon, first_true_from_three, patch_count, random_mz_experiment, random_precondition_lhs,
    RandomMzConfig, RandomMzOutcome, DEFAULT_POINT_CAP,
};
pub use weights::{mesh_norm_weights, MeshWeights};
