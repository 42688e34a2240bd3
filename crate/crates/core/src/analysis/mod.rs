//! Prime sums, moments, the delta constant and log-log slope fits.

mod delta;
mod fit;
mod moments;
mod sums;

pub use delta::{
    cosine_identity_check, delta_constant, delta_integrand, delta_integrand_literal,
    pointwise_inequality_check, DeltaResult,
};
pub use fit::{fit_loglog, FitMode, FitResult};
pub use moments::{empirical_moments, st_moment, MomentMeasure};
pub(crate) use sums::MISSING_LIST_CAP;
pub use sums::{
    checkpoints, prime_sum, prime_sum_at, weighted_prime_sum, weighted_prime_sum_at, NeumaierSum, SumKind, SumSeries, SumSeriesBuilder,
    DEFAULT_CHECKPOINT_RATIO, DEFAULT_CHECKPOINT_START,
};
