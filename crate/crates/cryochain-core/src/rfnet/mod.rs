//! Two-port network algebra and cascaded gain / noise-temperature budgets.
//!
//! Scattering data lives on a strictly increasing [`FrequencyGrid`]. A
//! [`TwoPortRecord`] pairs such a grid with one 2x2 S-matrix per point and a
//! reference impedance; records cascade through the wave transfer-matrix
//! representation. A [`SignalChain`] is an ordered list of gain/noise
//! elements whose input-referred noise temperature follows the Friis rule
//!
//! ```text
//! Te,total = Te,1 + Te,2 / G1 + Te,3 / (G1 G2) + ...
//! ```
//!
//! with all temperatures in kelvin and gains as linear power ratios.

mod chain;
mod grid;
mod twoport;

pub use chain::{
    cascade_noise, CableThermalModel, ChainElement, ChainReport, ElementContribution,
    ElementKind, GainSpec, SignalChain, DEFAULT_CABLE_SEGMENTS,
};
pub use grid::FrequencyGrid;
pub use twoport::{cascade_sparams, resample, Sparams, TwoPortRecord};

use alloc::string::String;
use core::fmt;
use num_traits::Float;

/// Standard reference temperature for noise-figure definitions, in kelvin.
pub const T0_K: f64 = 290.0;

/// Errors from grid construction, two-port algebra, or chain evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum RfNetError {
    /// A frequency grid needs at least one point.
    EmptyGrid,
    /// Grid points must be strictly increasing; `index` is the first offender.
    NonMonotonicGrid { index: usize },
    /// Grid points must be finite and positive.
    BadFrequency { index: usize, value_hz: f64 },
    /// A scalar input was NaN or infinite.
    NonFinite { what: &'static str },
    /// Noise figure below 0 dB has no noise-temperature equivalent.
    NegativeNoiseFigure { nf_db: f64 },
    /// Noise temperatures are bounded below by zero kelvin.
    NegativeNoiseTemperature { te_k: f64 },
    /// Attenuation and cable loss are magnitudes, in dB >= 0.
    NegativeLoss { loss_db: f64 },
    /// Physical temperatures are bounded below by zero kelvin.
    NegativeTemperature { t_k: f64 },
    /// Reference impedance must be positive and finite.
    BadImpedance { z_ohm: f64 },
    /// S-matrix entries must be finite at every grid point.
    NonFiniteSparam { index: usize },
    /// A record needs exactly one S-matrix per grid point.
    PointCountMismatch { grid: usize, data: usize },
    /// Two records can only be combined on the same reference impedance.
    ImpedanceMismatch { a_ohm: f64, b_ohm: f64 },
    /// Two records can only be combined point-for-point on identical grids.
    GridMismatch,
    /// S21 = 0 admits no transfer-matrix representation.
    SingularConversion { freq_hz: f64 },
    /// Requested points fall outside the record's frequency span.
    OutOfSpan { first_hz: f64, span_hz: (f64, f64) },
    /// |S21 S12| > 1: the record claims gain where passivity was required.
    NotPassive { freq_hz: f64, product: f64 },
    /// A signal chain needs at least one element.
    EmptyChain,
    /// An element with zero forward gain makes every later stage invisible.
    ZeroGain { label: String, freq_hz: f64 },
    /// A file-backed element does not cover the analysis grid.
    GridNotCovered { label: String, first_hz: f64, span_hz: (f64, f64) },
}

impl fmt::Display for RfNetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RfNetError::EmptyGrid => write!(f, "frequency grid is empty"),
            RfNetError::NonMonotonicGrid { index } => {
                write!(f, "grid not strictly increasing at index {index}")
            }
            RfNetError::BadFrequency { index, value_hz } => {
                write!(f, "grid point {index} is not a positive finite frequency: {value_hz} Hz")
            }
            RfNetError::NonFinite { what } => write!(f, "{what} must be finite"),
            RfNetError::NegativeNoiseFigure { nf_db } => {
                write!(f, "noise figure must be >= 0 dB, got {nf_db} dB")
            }
            RfNetError::NegativeNoiseTemperature { te_k } => {
                write!(f, "noise temperature must be >= 0 K, got {te_k} K")
            }
            RfNetError::NegativeLoss { loss_db } => {
                write!(f, "loss must be >= 0 dB, got {loss_db} dB")
            }
            RfNetError::NegativeTemperature { t_k } => {
                write!(f, "physical temperature must be >= 0 K, got {t_k} K")
            }
            RfNetError::BadImpedance { z_ohm } => {
                write!(f, "reference impedance must be positive and finite, got {z_ohm} ohm")
            }
            RfNetError::NonFiniteSparam { index } => {
                write!(f, "non-finite S-parameter at grid index {index}")
            }
            RfNetError::PointCountMismatch { grid, data } => {
                write!(f, "grid has {grid} points but data has {data}")
            }
            RfNetError::ImpedanceMismatch { a_ohm, b_ohm } => {
                write!(f, "reference impedance mismatch: {a_ohm} ohm vs {b_ohm} ohm")
            }
            RfNetError::GridMismatch => write!(f, "frequency grids differ"),
            RfNetError::SingularConversion { freq_hz } => {
                write!(f, "S21 = 0 at {freq_hz} Hz: no transfer-matrix form")
            }
            RfNetError::OutOfSpan { first_hz, span_hz } => write!(
                f,
                "requested {first_hz} Hz outside record span {} Hz to {} Hz",
                span_hz.0, span_hz.1
            ),
            RfNetError::NotPassive { freq_hz, product } => {
                write!(f, "|S21 S12| = {product} > 1 at {freq_hz} Hz in a passive record")
            }
            RfNetError::EmptyChain => write!(f, "signal chain has no elements"),
            RfNetError::ZeroGain { label, freq_hz } => {
                write!(f, "element '{label}' has zero gain at {freq_hz} Hz")
            }
            RfNetError::GridNotCovered { label, first_hz, span_hz } => write!(
                f,
                "element '{label}' does not cover {first_hz} Hz (record spans {} Hz to {} Hz)",
                span_hz.0, span_hz.1
            ),
        }
    }
}

impl core::error::Error for RfNetError {}

/// Power ratio for a level in dB: `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    Float::powf(10.0_f64, db / 10.0)
}

/// Level in dB for a linear power ratio: `10 log10(g)`.
pub fn linear_to_db(gain: f64) -> f64 {
    10.0 * Float::log10(gain)
}

/// Equivalent noise temperature of a stage with noise figure `nf_db`.
///
/// `Te = T0 (10^(NF/10) - 1)` with `T0 = 290 K`. A 0 dB stage is noiseless.
pub fn te_from_nf(nf_db: f64) -> Result<f64, RfNetError> {
    if !nf_db.is_finite() {
        return Err(RfNetError::NonFinite { what: "noise figure" });
    }
    if nf_db < 0.0 {
        return Err(RfNetError::NegativeNoiseFigure { nf_db });
    }
    Ok(T0_K * (db_to_linear(nf_db) - 1.0))
}

/// Noise figure in dB of a stage with equivalent noise temperature `te_k`.
///
/// Inverse of [`te_from_nf`]: `NF = 10 log10(1 + Te/T0)`.
pub fn nf_from_te(te_k: f64) -> Result<f64, RfNetError> {
    if !te_k.is_finite() {
        return Err(RfNetError::NonFinite { what: "noise temperature" });
    }
    if te_k < 0.0 {
        return Err(RfNetError::NegativeNoiseTemperature { te_k });
    }
    Ok(10.0 * Float::log10(1.0 + te_k / T0_K))
}

/// Input-referred noise temperature of a matched attenuator.
///
/// An attenuator with linear loss `L = 10^(loss_db/10)` held at physical
/// temperature `t_phys_k` contributes `Te = (L - 1) t_phys_k`. Lossless or
/// cold attenuators contribute nothing.
pub fn attenuator_te(loss_db: f64, t_phys_k: f64) -> Result<f64, RfNetError> {
    if !loss_db.is_finite() {
        return Err(RfNetError::NonFinite { what: "attenuator loss" });
    }
    if loss_db < 0.0 {
        return Err(RfNetError::NegativeLoss { loss_db });
    }
    if !t_phys_k.is_finite() {
        return Err(RfNetError::NonFinite { what: "physical temperature" });
    }
    if t_phys_k < 0.0 {
        return Err(RfNetError::NegativeTemperature { t_k: t_phys_k });
    }
    Ok((db_to_linear(loss_db) - 1.0) * t_phys_k)
}
