//! Laplace's method and regression checks of the growth of Mittag-Leffler
//! integrals, kernel norms and test-function norms.

pub mod estimates;
pub mod fit;
pub mod laplace;

pub use estimates::{
    verify_kernel_norms, verify_kernel_sup_bound, verify_lemma4, verify_lemma4_complement, verify_lemma5,
    verify_testfn_norms, KernelNormReport, KernelSupBound, TestFnNormReport, BOUND_SLACK, EXPONENT_TOL, SECTOR_RADIUS,
};
pub use fit::{ExponentCheck, GrowthFit, RESIDUAL_LIMIT};
pub use laplace::{laplace_boundary, laplace_interior, laplace_quadrature, LaplaceEstimate, LaplaceProblem, FD_STEP};
