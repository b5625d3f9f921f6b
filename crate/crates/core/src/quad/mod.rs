//! Integration against `dμ_{m,α}`: radial Gauss rules, exact sphere moments,
//! sampled sphere averages, the projection `P_β` and its verifiers.

pub mod axial;
pub mod gauss;
pub mod measure;
pub mod radial;
pub mod sphere;

pub use axial::{ln_axial_integral, ln_axial_integral_tol, ln_fp_norm_axial, AxialRegion, AXIAL_TOL};
pub use gauss::{gauss_legendre, golub_welsch, legendre_cached, GaussRule};
pub use measure::{
    fp_norm, fp_norm_with, growth_space_projection_check, integrate_mu, integrate_mu_scalar, project,
    projection_sphere_order, try_integrate_mu, verify_reproducing,
};
pub use radial::{radial_rule, QuadratureRule};
pub use sphere::{sphere_monomial_integral, SphereCubature};
