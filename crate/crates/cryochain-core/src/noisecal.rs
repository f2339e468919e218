//! Y-factor noise calibration and de-embedding.
//!
//! A hot/cold source with known temperatures drives the system; the ratio of
//! output noise powers `Y = P_hot / P_cold` inverts to the system noise
//! temperature at the source plane,
//!
//! ```text
//! Te = (T_hot - Y T_cold) / (Y - 1).
//! ```
//!
//! [`deembed_dut_te`] then strips the input chain in front of the device and
//! the backend behind it, leaving the device's own noise temperature.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::rfnet::{
    cascade_noise, db_to_linear, CableThermalModel, FrequencyGrid, RfNetError, SignalChain, T0_K,
};

/// Errors from calibration math.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseCalError {
    /// Source states must satisfy `t_hot > t_cold >= 0`.
    InvalidSource { t_hot_k: f64, t_cold_k: f64 },
    /// A scalar input was NaN or infinite.
    NonFinite { what: &'static str },
    /// Measured powers must be positive.
    NonPositivePower { p_w: f64 },
    /// Y <= 1 carries no excess noise to invert.
    NoExcessNoise { y: f64 },
    /// The inversion produced a negative noise temperature.
    NonphysicalMeasurement { te_k: f64 },
    /// Loss magnitudes are in dB >= 0.
    NegativeLoss { loss_db: f64 },
    /// Physical temperatures are bounded below by zero kelvin.
    NegativeTemperature { t_k: f64 },
    /// Distributed cable models need at least one segment.
    ZeroSegments,
    /// De-embedding drove the DUT temperature negative.
    OvercorrectedDeembed {
        te_dut_k: f64,
        te_sys_k: f64,
        te_input_k: f64,
        input_gain: f64,
        backend_term_k: f64,
    },
    /// Input-chain evaluation failed.
    Chain(RfNetError),
}

impl fmt::Display for NoiseCalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseCalError::InvalidSource { t_hot_k, t_cold_k } => {
                write!(f, "source states must satisfy T_hot > T_cold >= 0 K, got {t_hot_k} K / {t_cold_k} K")
            }
            NoiseCalError::NonFinite { what } => write!(f, "{what} must be finite"),
            NoiseCalError::NonPositivePower { p_w } => {
                write!(f, "measured power must be > 0 W, got {p_w} W")
            }
            NoiseCalError::NoExcessNoise { y } => {
                write!(f, "no excess noise: Y = {y} does not exceed 1")
            }
            NoiseCalError::NonphysicalMeasurement { te_k } => {
                write!(f, "nonphysical measurement: inverted Te = {te_k} K is negative")
            }
            NoiseCalError::NegativeLoss { loss_db } => {
                write!(f, "loss must be >= 0 dB, got {loss_db} dB")
            }
            NoiseCalError::NegativeTemperature { t_k } => {
                write!(f, "physical temperature must be >= 0 K, got {t_k} K")
            }
            NoiseCalError::ZeroSegments => write!(f, "distributed cable model needs >= 1 segment"),
            NoiseCalError::OvercorrectedDeembed {
                te_dut_k,
                te_sys_k,
                te_input_k,
                input_gain,
                backend_term_k,
            } => write!(
                f,
                "overcorrected de-embed: Te_dut = {te_dut_k} K < 0 \
                 (Te_sys = {te_sys_k} K, Te_input = {te_input_k} K, \
                 G_input = {input_gain}, backend term = {backend_term_k} K)"
            ),
            NoiseCalError::Chain(e) => write!(f, "input chain: {e}"),
        }
    }
}

impl core::error::Error for NoiseCalError {}

impl From<RfNetError> for NoiseCalError {
    fn from(e: RfNetError) -> Self {
        NoiseCalError::Chain(e)
    }
}

/// Hot/cold noise source described by its two state temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSource {
    t_hot_k: f64,
    t_cold_k: f64,
}

impl NoiseSource {
    pub fn from_temperatures(t_hot_k: f64, t_cold_k: f64) -> Result<Self, NoiseCalError> {
        if !t_hot_k.is_finite() || !t_cold_k.is_finite() {
            return Err(NoiseCalError::NonFinite { what: "source temperature" });
        }
        if t_cold_k < 0.0 || t_hot_k <= t_cold_k {
            return Err(NoiseCalError::InvalidSource { t_hot_k, t_cold_k });
        }
        Ok(Self { t_hot_k, t_cold_k })
    }

    /// Source whose ON state is specified as an excess noise ratio in dB.
    pub fn from_enr(enr_db: f64, t_cold_k: f64) -> Result<Self, NoiseCalError> {
        if !enr_db.is_finite() {
            return Err(NoiseCalError::NonFinite { what: "ENR" });
        }
        Self::from_temperatures(thot_from_enr(enr_db), t_cold_k)
    }

    pub fn t_hot_k(&self) -> f64 {
        self.t_hot_k
    }

    pub fn t_cold_k(&self) -> f64 {
        self.t_cold_k
    }
}

/// ON-state temperature of a source with the given excess noise ratio:
/// `T_hot = T0 (1 + 10^(ENR/10))`.
pub fn thot_from_enr(enr_db: f64) -> f64 {
    T0_K * (1.0 + db_to_linear(enr_db))
}

/// One Y-factor reading against a known source.
///
/// Raw power pairs are reduced to the ratio immediately; absolute power
/// calibration is out of scope.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseMeasurement {
    pub source: NoiseSource,
    pub y: f64,
    pub reference_plane: String,
}

impl NoiseMeasurement {
    pub fn from_y(source: NoiseSource, y: f64) -> Result<Self, NoiseCalError> {
        if !y.is_finite() || y <= 0.0 {
            return Err(NoiseCalError::NonFinite { what: "Y factor" });
        }
        Ok(Self { source, y, reference_plane: String::new() })
    }

    pub fn from_powers(source: NoiseSource, p_hot_w: f64, p_cold_w: f64) -> Result<Self, NoiseCalError> {
        for &p in &[p_hot_w, p_cold_w] {
            if !p.is_finite() {
                return Err(NoiseCalError::NonFinite { what: "measured power" });
            }
            if p <= 0.0 {
                return Err(NoiseCalError::NonPositivePower { p_w: p });
            }
        }
        Self::from_y(source, p_hot_w / p_cold_w)
    }

    pub fn with_reference_plane(mut self, plane: &str) -> Self {
        self.reference_plane = String::from(plane);
        self
    }
}

/// Invert a Y-factor reading to the system noise temperature at the source
/// plane: `Te = (T_hot - Y T_cold) / (Y - 1)`.
///
/// Rounding can push an exactly noise-free reading (`Y = T_hot/T_cold`) a
/// hair negative; results within 1e-9 relative of zero clamp to zero, and
/// anything more negative is reported as nonphysical.
pub fn y_factor_te(m: &NoiseMeasurement) -> Result<f64, NoiseCalError> {
    if m.y <= 1.0 {
        return Err(NoiseCalError::NoExcessNoise { y: m.y });
    }
    let te = (m.source.t_hot_k - m.y * m.source.t_cold_k) / (m.y - 1.0);
    if te < 0.0 {
        if te > -1e-9 * m.source.t_hot_k {
            return Ok(0.0);
        }
        return Err(NoiseCalError::NonphysicalMeasurement { te_k: te });
    }
    Ok(te)
}

/// Forward model of the same reading: `Y = (T_hot + Te) / (T_cold + Te)`.
pub fn y_from_te(source: &NoiseSource, te_k: f64) -> Result<f64, NoiseCalError> {
    if !te_k.is_finite() {
        return Err(NoiseCalError::NonFinite { what: "noise temperature" });
    }
    if te_k < 0.0 {
        return Err(NoiseCalError::NonphysicalMeasurement { te_k });
    }
    Ok((source.t_hot_k + te_k) / (source.t_cold_k + te_k))
}

// Total on validated inputs; shared with rfnet's cable chain element.
pub(crate) fn cable_te_unchecked(
    loss_db: f64,
    t_in_k: f64,
    t_out_k: f64,
    model: &CableThermalModel,
) -> f64 {
    match model {
        CableThermalModel::Midpoint { t_mid_k } => (db_to_linear(loss_db) - 1.0) * t_mid_k,
        CableThermalModel::Distributed { segments } => {
            let n = *segments;
            let seg_loss = db_to_linear(loss_db / n as f64);
            let mut te = 0.0;
            let mut referral = 1.0;
            for j in 0..n {
                // Segment temperature sampled at its midpoint along the run.
                let frac = (j as f64 + 0.5) / n as f64;
                let t_j = t_in_k + (t_out_k - t_in_k) * frac;
                te += (seg_loss - 1.0) * t_j * referral;
                referral *= seg_loss;
            }
            te
        }
    }
}

/// Input-referred noise temperature of a lossy cable spanning a thermal
/// gradient from `t_in_k` (signal entry) to `t_out_k` (signal exit).
///
/// The distributed model splits the run into equal-dB segments, each
/// thermalized at the linearly interpolated temperature of its midpoint,
/// and Friis-cascades them; segments deeper into the run weigh more because
/// the loss in front of them attenuates the reference signal.
pub fn cable_effective_te(
    loss_db: f64,
    t_in_k: f64,
    t_out_k: f64,
    model: &CableThermalModel,
) -> Result<f64, NoiseCalError> {
    if !loss_db.is_finite() {
        return Err(NoiseCalError::NonFinite { what: "cable loss" });
    }
    if loss_db < 0.0 {
        return Err(NoiseCalError::NegativeLoss { loss_db });
    }
    for &t in &[t_in_k, t_out_k] {
        if !t.is_finite() {
            return Err(NoiseCalError::NonFinite { what: "cable temperature" });
        }
        if t < 0.0 {
            return Err(NoiseCalError::NegativeTemperature { t_k: t });
        }
    }
    match model {
        CableThermalModel::Midpoint { t_mid_k } => {
            if !t_mid_k.is_finite() {
                return Err(NoiseCalError::NonFinite { what: "midpoint temperature" });
            }
            if *t_mid_k < 0.0 {
                return Err(NoiseCalError::NegativeTemperature { t_k: *t_mid_k });
            }
        }
        CableThermalModel::Distributed { segments } => {
            if *segments == 0 {
                return Err(NoiseCalError::ZeroSegments);
            }
        }
    }
    Ok(cable_te_unchecked(loss_db, t_in_k, t_out_k, model))
}

/// Everything between the calibrated source plane and the DUT input, plus
/// the backend that follows the DUT.
#[derive(Debug, Clone, PartialEq)]
pub struct DeembedContext {
    /// Source plane to DUT input, usually cables and cold attenuators.
    pub input_chain: SignalChain,
    /// Noise temperature of everything after the DUT, referred to the
    /// backend's own input.
    pub backend_te_k: f64,
    /// DUT forward gain at the evaluation frequency.
    pub dut_gain_db: f64,
}

/// Flags attached to a successful de-embed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeembedWarning {
    /// DUT gain below 10 dB: backend subtraction dominates the extraction.
    BackendDominated,
    /// The input chain shows net gain; a lossy path was expected.
    InputChainHasGain,
}

impl fmt::Display for DeembedWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeembedWarning::BackendDominated => write!(f, "backend-dominated extraction"),
            DeembedWarning::InputChainHasGain => write!(f, "input chain shows net gain"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeembedResult {
    /// DUT noise temperature at its own input plane.
    pub te_dut_k: f64,
    /// Backend contribution referred to the DUT input, `Te_backend / G_dut`.
    pub backend_term_k: f64,
    /// `d(Te_dut)/d(Te_backend) = -1/G_dut`.
    pub backend_sensitivity: f64,
    pub warnings: Vec<DeembedWarning>,
}

/// Solve the cascade equation for the DUT's noise temperature at one
/// frequency:
///
/// ```text
/// Te_sys = Te_in + Te_dut/G_in + Te_backend/(G_in G_dut)
/// Te_dut = G_in (Te_sys - Te_in) - Te_backend/G_dut
/// ```
///
/// `te_sys_k` is referred to the source plane; the input chain is evaluated
/// at `freq_hz` to obtain `Te_in` and `G_in`.
pub fn deembed_dut_te(
    te_sys_k: f64,
    ctx: &DeembedContext,
    freq_hz: f64,
) -> Result<DeembedResult, NoiseCalError> {
    if !te_sys_k.is_finite() {
        return Err(NoiseCalError::NonFinite { what: "system noise temperature" });
    }
    if te_sys_k < 0.0 {
        return Err(NoiseCalError::NonphysicalMeasurement { te_k: te_sys_k });
    }
    if !ctx.backend_te_k.is_finite() {
        return Err(NoiseCalError::NonFinite { what: "backend noise temperature" });
    }
    if ctx.backend_te_k < 0.0 {
        return Err(NoiseCalError::NegativeTemperature { t_k: ctx.backend_te_k });
    }
    if !ctx.dut_gain_db.is_finite() {
        return Err(NoiseCalError::NonFinite { what: "DUT gain" });
    }

    let grid = FrequencyGrid::new(alloc::vec![freq_hz])?;
    let input = cascade_noise(&ctx.input_chain, &grid)?;
    let input_gain_db = input.gain_db[0];
    let input_gain = db_to_linear(input_gain_db);
    let te_input_k = input.te_k[0];

    let dut_gain = db_to_linear(ctx.dut_gain_db);
    let backend_term_k = ctx.backend_te_k / dut_gain;
    let te_dut_k = input_gain * (te_sys_k - te_input_k) - backend_term_k;
    if te_dut_k < 0.0 {
        return Err(NoiseCalError::OvercorrectedDeembed {
            te_dut_k,
            te_sys_k,
            te_input_k,
            input_gain,
            backend_term_k,
        });
    }

    let mut warnings = Vec::new();
    if ctx.dut_gain_db < 10.0 {
        warnings.push(DeembedWarning::BackendDominated);
    }
    if input_gain_db > 1e-12 {
        warnings.push(DeembedWarning::InputChainHasGain);
    }
    Ok(DeembedResult {
        te_dut_k,
        backend_term_k,
        backend_sensitivity: -1.0 / dut_gain,
        warnings,
    })
}
