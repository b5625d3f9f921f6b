pub mod compactness;
pub mod fejer;
pub mod hankel_ratio;
pub mod kernel_norms;
pub mod laplace;
pub mod ml_validate;
pub mod project_check;
