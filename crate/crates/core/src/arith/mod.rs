//! Prime generation and modular arithmetic primitives.

mod modular;
mod primes;

pub use modular::{
    cornacchia, is_prime, isqrt, isqrt_u128, jacobi, kronecker, mul_mod, pow_mod, sqrt_mod,
    GaussianFactor,
};
pub use primes::{primes_up_to, segmented_primes, PrimeStream, SegmentedPrimes, SEGMENT_LEN};
