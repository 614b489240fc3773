//! Special functions of the sphere: dimensions, surface areas, normalized
//! ultraspherical polynomials, Christoffel–Darboux and de la Vallée Poussin
//! kernels, and the numerical integrals behind the kernel inequalities.

mod bounds;
mod dims;
mod kernel;
mod ultraspherical;

pub use bounds::{
    check_kernel_bounds, deriv_bound, kernel_deriv_integral, kernel_l1, kernel_sup, l1_bound, sup_bound,
    KernelBoundReport, BOUND_SLACK,
};
pub use dims::{gamma_half, harmonic_dim, poly_space_dim, sphere_area, ultraspherical_norm_sq};
pub use kernel::{dlvp_deriv_eval, dlvp_eval, DlvpKernel};
pub use ultraspherical::{cd_kernel_eval, ultraspherical_eval, UltrasphericalEvaluator};
