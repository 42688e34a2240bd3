//! Computational laboratory for sums of absolute Hecke eigenvalues along
//! polynomial values.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: segmented prime sieve, Kronecker symbols, modular square roots
//!   and two-square decompositions.
//! * [`eigenvalues`]: normalized eigenvalue tables for level-1 cusp forms, the
//!   CM form of `y^2 = x^3 - x`, isobaric sums of characters and ideal counts
//!   of quadratic fields.
//! * [`polyarith`]: integer polynomials, root counts and factorization patterns
//!   modulo primes.
//! * [`factorsieve`]: simultaneous factorization of `|P(n)|` for `n <= X`.
//! * [`sieves`]: sieve bound formulas and the lower-bound applicability test.
//! * [`analysis`]: prime sums, moments, the delta constant and log-log fits.
//! * [`galois`]: dihedral character averages, Frobenius pattern statistics and
//!   quadratic ideal counting.
//!
//! [`oracle`] holds slow brute-force reference implementations and
//! [`acceptance`] runs the end-to-end acceptance checks on top of them.

pub mod acceptance;
pub mod analysis;
pub mod arith;
pub mod eigenvalues;
mod error;
pub mod factorsieve;
pub mod galois;
pub mod oracle;
pub mod polyarith;
pub mod report;
pub mod sieves;

pub use analysis::{DeltaResult, FitMode, FitResult, SumKind, SumSeries};
pub use arith::{GaussianFactor, PrimeStream};
pub use eigenvalues::{DirichletChar, EigenProvider, EigenTable, FormSpec};
pub use error::{Error, Result};
pub use factorsieve::{MultiplicativeSum, ValueFactorization};
pub use galois::{ClassFrequencies, DihedralSpec};
pub use polyarith::{FactorizationPattern, Poly, RhoTable};
pub use sieves::BoundReport;
