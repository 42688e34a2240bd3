//! Normalized Hecke eigenvalues for level-1 cusp forms, the CM form attached
//! to `y^2 = x^3 - x`, and isobaric sums of characters.

pub mod cache;
mod form;
mod local;
mod provider;
mod raw;
mod series;
mod table;

pub use form::{is_fundamental_discriminant, DirichletChar, FormSpec, LEVEL1_WEIGHTS};
pub use local::{
    angle_of, angles, cm_trace, extend_prime_power, extend_prime_power_central, lambda_at_prime,
    lambda_prime_power, AngleSeries,
};
pub use provider::EigenProvider;
pub use raw::RawCoeffs;
pub use table::{build_table, build_table_with_budget, EigenTable, SERIES_BUDGET};
