//! Command drivers. Each takes its deserialized config body, runs the core
//! computation, stages artifacts into the output directory, and returns the
//! scalar summary the sweep harness concatenates.

pub mod budget;
pub mod chain;
pub mod noisecal;
pub mod readout;

use cryochain_core::readout::ReadoutError;
use cryochain_core::rfnet::RfNetError;

use crate::AppError;

/// Scalar key/value pairs one run contributes to a sweep summary, in column
/// order.
pub type SummaryRow = Vec<(&'static str, String)>;

/// Chain evaluation failures: singularities and blowups exit 1, everything
/// else is bad input and exits 2.
pub fn chain_eval_error(e: RfNetError) -> AppError {
    match e {
        RfNetError::ZeroGain { .. }
        | RfNetError::SingularConversion { .. }
        | RfNetError::NonFinite { .. } => AppError::numerical(e),
        _ => AppError::invalid(e),
    }
}

/// Readout failures: degenerate statistics and model breakdowns exit 1,
/// malformed parameters exit 2.
pub fn readout_eval_error(e: ReadoutError) -> AppError {
    match e {
        ReadoutError::InfiniteSnr
        | ReadoutError::DegenerateBlobs
        | ReadoutError::ZeroSpread
        | ReadoutError::NegativeSnr { .. }
        | ReadoutError::SingleState { .. }
        | ReadoutError::NonFiniteShot { .. } => AppError::numerical(e),
        _ => AppError::invalid(e),
    }
}
