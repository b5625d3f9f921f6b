//! The spaces `F^p_{m,α}`: parameters, multi-indices, the reproducing kernel,
//! matrix-valued Taylor symbols and growth-space norms.

pub mod growth;
pub mod kernel;
pub mod lsq;
pub mod params;
pub mod symbol;

pub use growth::{
    integral_means, littleoh_profile, littleoh_profile_along, littlewood_paley_norm, pointwise_bound_ratio,
    standard_directions, sup_growth_norm, GrowthGrid, SupEstimate,
};
pub use kernel::{inner, kernel_eval, norm, Kernel};
pub use lsq::{kernel_least_squares, LeastSquares};
pub use params::{c_norm_const, density_const, monomial_norm_sq, MultiIndex, SpaceParams};
pub use symbol::{FamilySpec, SymbolFile, SymbolSpec, TaylorSymbol};
