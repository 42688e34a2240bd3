//! Integer polynomials: parsing, discriminants, root counts modulo primes and
//! factorization patterns.

mod modp;
mod parse;
mod poly;
mod rho;

pub use modp::{roots_mod_p, FpPoly};
pub use parse::parse_poly;
pub use poly::Poly;
pub use rho::{
    factor_pattern, irreducibility_hint, rho, rho_table, FactorizationPattern, RhoTable,
    BRUTE_FORCE_LIMIT,
};
