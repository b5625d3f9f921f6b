//! Numerical laboratory for the generalized Fock spaces `F^p_{m,α}(C^d, C^n)`
//! with weight `e^{-α|z|^{2m}}`, their Mittag-Leffler reproducing kernels and
//! small Hankel operators with matrix-valued symbols.

// `!(x > 0.0)` and friends are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod fock;
pub mod hankel;
pub mod linalg;
pub mod mlf;
pub mod quad;
pub mod scaled;
pub mod special;

pub use error::{LabError, Result};
pub use scaled::ScaledComplex;

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
