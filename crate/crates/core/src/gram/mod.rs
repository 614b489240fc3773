//! Gram matrices of sampled reproducing kernels, their extremal
//! eigenvalues, and the sample budgets that control them.

mod budgets;
mod eigs;
mod experiment;
mod matrix;

pub use budgets::{budget_even_p, budget_tropp, tropp_threshold};
pub use eigs::{extremal_eigs, normal_extremal_eigs_q2, symmetric_eigenvalues, ExtremalEigs};
pub use experiment::{eig_experiment, eig_experiment_with_points, sample_extremal_eigs, EigStats};
pub use matrix::{addition_kernel, explicit_basis_matrix_q2, gram_matrix, weighted_normal_matrix_q2, GramMatrix};

pub(crate) use budgets::{check_open_unit, next_integer_above};
pub(crate) use matrix::dim_usize;
