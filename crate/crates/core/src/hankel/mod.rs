//! Truncated small Hankel operators and the norm and compactness reports
//! built on them.

pub mod form;
pub mod matrix;
pub mod report;
pub mod testfn;

pub use form::{
    apply_hankel, diagonal_identity_check, entry_oracle_check, form_rule, hankel_form_exact, hankel_form_quadrature,
    rayleigh_lower_bound, DiagonalIdentityCheck, OracleCheck,
};
pub use matrix::{
    build_hankel, build_hankel_capped, hankel_entry, lift_t, lift_t_capped, HankelMatrix, DEFAULT_SIZE_CAP,
};
pub use report::{
    compactness_report, default_grid, theorem_a_report, CompactnessReport, CompactnessRow, TheoremAReport, Verdict,
};
pub use testfn::{solve_a_coeffs, test_function_x, test_function_y, TestFunctionPair, TestFunctionX, TestFunctionY};
