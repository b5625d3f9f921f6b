//! Mittag-Leffler functions `E_{β,γ}`, the derivative family
//! `E^{(j)}_{1/m,1/m}`, the polynomials `p_k` and the tail functions `G_l`.

mod asymptotic;
mod family;
mod integral;
mod poly;
mod series;

pub use asymptotic::{
    asymptotic_check, asymptotic_relative_error, in_sector, ml_asymptotic_leading, AsymptoticCheck, Reference,
};
pub use family::{crossover_self_check, g_l_eval, ml_family_eval, Branch, GFunction, MlValue, CROSSOVER};
pub use poly::{p_family, p_poly, taylor_truncate, RealPolynomial};
pub use series::{ml_series, MLOrder, MlFamily, ScaledSeriesSum, SeriesSum, SERIES_LOG_LIMIT, TERM_CAP};
