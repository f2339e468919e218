//! Dispersive single-shot readout: resonator response, IQ shot synthesis,
//! and state-assignment statistics.
//!
//! A readout resonator's transmission follows a one-pole model whose
//! resonance sits at `f_r + chi` with the qubit excited and `f_r - chi`
//! with it in the ground state. Probing at a fixed frequency turns the
//! qubit state into two complex amplitudes; integrated noise turns each
//! into a Gaussian blob in the IQ plane. The analytics here quantify how
//! separable those blobs are.

pub mod rng;
mod shots;

pub use shots::{
    simulate_shots, align_rotation, classify_and_confusion, q_histogram, snr_estimate, BlobModel,
    BlobStats, ConfusionReport, IQPoint, QHistogram, ShotSet,
};

use core::fmt;
use num_complex::Complex64;
use num_traits::Float;

/// Boltzmann constant, J/K.
pub const BOLTZMANN_J_PER_K: f64 = 1.380649e-23;

/// Errors from readout modeling and shot analytics.
#[derive(Debug, Clone, PartialEq)]
pub enum ReadoutError {
    NonFinite { what: &'static str },
    /// Resonator parameter out of range.
    InvalidResonator { what: &'static str, value: f64 },
    /// Run parameter out of range.
    InvalidConfig { what: &'static str, value: f64 },
    /// Noiseless classical model: SNR diverges at zero system temperature.
    InfiniteSnr,
    /// Fidelity is defined for nonnegative SNR only.
    NegativeSnr { snr: f64 },
    /// An operation needed shots from both states.
    SingleState { missing_state: u8 },
    /// Sample statistics need at least two shots per state.
    TooFewShots { state: u8, count: usize },
    /// All projections coincide; the plug-in SNR estimate diverges.
    ZeroSpread,
    /// Blob centers coincide; no discrimination axis exists.
    DegenerateBlobs,
    /// Shot coordinates must be finite.
    NonFiniteShot { index: usize },
    /// Histograms need at least one bin.
    ZeroBins,
    /// The operation needs at least one shot.
    EmptyShotSet,
}

impl fmt::Display for ReadoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadoutError::NonFinite { what } => write!(f, "{what} must be finite"),
            ReadoutError::InvalidResonator { what, value } => {
                write!(f, "invalid resonator model: {what} = {value}")
            }
            ReadoutError::InvalidConfig { what, value } => {
                write!(f, "invalid readout config: {what} = {value}")
            }
            ReadoutError::InfiniteSnr => {
                write!(f, "infinite SNR: zero system noise temperature breaks the classical model")
            }
            ReadoutError::NegativeSnr { snr } => {
                write!(f, "fidelity needs SNR >= 0, got {snr}")
            }
            ReadoutError::SingleState { missing_state } => {
                write!(f, "no shots with true state {missing_state}")
            }
            ReadoutError::TooFewShots { state, count } => {
                write!(f, "state {state} has {count} shots; need at least 2")
            }
            ReadoutError::ZeroSpread => write!(f, "zero spread: plug-in SNR estimate diverges"),
            ReadoutError::DegenerateBlobs => {
                write!(f, "degenerate blobs: state centers coincide")
            }
            ReadoutError::NonFiniteShot { index } => {
                write!(f, "shot {index} has non-finite coordinates")
            }
            ReadoutError::ZeroBins => write!(f, "histogram needs at least one bin"),
            ReadoutError::EmptyShotSet => write!(f, "shot set is empty"),
        }
    }
}

impl core::error::Error for ReadoutError {}

/// Prepared qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitState {
    Ground,
    Excited,
}

impl QubitState {
    pub fn index(self) -> u8 {
        match self {
            QubitState::Ground => 0,
            QubitState::Excited => 1,
        }
    }

    /// Sign of the dispersive shift: state i moves the resonance by
    /// `(2i - 1) chi`.
    pub fn shift_sign(self) -> f64 {
        match self {
            QubitState::Ground => -1.0,
            QubitState::Excited => 1.0,
        }
    }
}

/// Readout resonator with a qubit-state-dependent resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorModel {
    /// Bare resonator frequency, Hz.
    pub f_r_hz: f64,
    /// Full linewidth, Hz.
    pub kappa_hz: f64,
    /// Dispersive half-shift, Hz.
    pub chi_hz: f64,
}

impl ResonatorModel {
    pub fn validate(&self) -> Result<(), ReadoutError> {
        if !self.f_r_hz.is_finite() || self.f_r_hz <= 0.0 {
            return Err(ReadoutError::InvalidResonator { what: "f_r_hz", value: self.f_r_hz });
        }
        if !self.kappa_hz.is_finite() || self.kappa_hz <= 0.0 {
            return Err(ReadoutError::InvalidResonator { what: "kappa_hz", value: self.kappa_hz });
        }
        if !self.chi_hz.is_finite() {
            return Err(ReadoutError::InvalidResonator { what: "chi_hz", value: self.chi_hz });
        }
        Ok(())
    }
}

/// One readout run: probe tone, integration window, and noise scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutConfig {
    /// Probe tone frequency, Hz.
    pub probe_freq_hz: f64,
    /// Probe power at the reference plane, W.
    pub p_in_w: f64,
    /// Boxcar integration time, s.
    pub tau_s: f64,
    /// System noise temperature referred to the same plane, K.
    pub t_sys_k: f64,
    /// Probability that an excited-state shot relaxes before integration.
    pub decay_prob: f64,
}

impl ReadoutConfig {
    pub fn validate(&self) -> Result<(), ReadoutError> {
        if !self.probe_freq_hz.is_finite() || self.probe_freq_hz <= 0.0 {
            return Err(ReadoutError::InvalidConfig {
                what: "probe_freq_hz",
                value: self.probe_freq_hz,
            });
        }
        if !self.p_in_w.is_finite() || self.p_in_w < 0.0 {
            return Err(ReadoutError::InvalidConfig { what: "p_in_w", value: self.p_in_w });
        }
        if !self.tau_s.is_finite() || self.tau_s <= 0.0 {
            return Err(ReadoutError::InvalidConfig { what: "tau_s", value: self.tau_s });
        }
        if !self.t_sys_k.is_finite() || self.t_sys_k < 0.0 {
            return Err(ReadoutError::InvalidConfig { what: "t_sys_k", value: self.t_sys_k });
        }
        if !self.decay_prob.is_finite() || !(0.0..=1.0).contains(&self.decay_prob) {
            return Err(ReadoutError::InvalidConfig {
                what: "decay_prob",
                value: self.decay_prob,
            });
        }
        Ok(())
    }
}

/// One-pole transmission at probe frequency `f_hz` with the qubit in
/// `state`:
///
/// ```text
/// S21(f) = (kappa/2) / (kappa/2 + i (f_state - f)),   f_state = f_r +- chi
/// ```
///
/// On the shifted resonance this is exactly 1; far away it falls to zero.
pub fn s21_dispersive(f_hz: f64, state: QubitState, r: &ResonatorModel) -> Complex64 {
    let f_state = r.f_r_hz + state.shift_sign() * r.chi_hz;
    let half_kappa = r.kappa_hz / 2.0;
    Complex64::new(half_kappa, 0.0) / Complex64::new(half_kappa, f_state - f_hz)
}

/// Per-quadrature noise standard deviation in amplitude units (sqrt W).
///
/// Boxcar integration over `tau` has effective noise bandwidth
/// `B = 1/(2 tau)`; the thermal power `k_B T_sys B` splits evenly between
/// quadratures, giving `sigma^2 = k_B T_sys / (4 tau)`. This classical
/// radiometry closure excludes vacuum noise.
pub fn noise_sigma(cfg: &ReadoutConfig) -> Result<f64, ReadoutError> {
    cfg.validate()?;
    Ok(Float::sqrt(BOLTZMANN_J_PER_K * cfg.t_sys_k / (4.0 * cfg.tau_s)))
}

/// Predicted blob-separation SNR for a probe/resonator combination:
/// `|c1 - c0| / sqrt(2 sigma^2)` with `c_state = S21 * sqrt(p_in)`.
pub fn snr_from_chain(cfg: &ReadoutConfig, r: &ResonatorModel) -> Result<f64, ReadoutError> {
    cfg.validate()?;
    r.validate()?;
    if cfg.t_sys_k == 0.0 {
        return Err(ReadoutError::InfiniteSnr);
    }
    let amp = Float::sqrt(cfg.p_in_w);
    let c0 = s21_dispersive(cfg.probe_freq_hz, QubitState::Ground, r) * amp;
    let c1 = s21_dispersive(cfg.probe_freq_hz, QubitState::Excited, r) * amp;
    let sigma = noise_sigma(cfg)?;
    Ok((c1 - c0).norm() / (sigma * Float::sqrt(2.0)))
}

/// Assignment fidelity of an ideal midpoint threshold between two equal-
/// sigma Gaussian blobs: `F = 1 - erfc(SNR/2)/2`.
pub fn fidelity_from_snr(snr: f64) -> Result<f64, ReadoutError> {
    if !snr.is_finite() {
        return Err(ReadoutError::NonFinite { what: "SNR" });
    }
    if snr < 0.0 {
        return Err(ReadoutError::NegativeSnr { snr });
    }
    Ok(1.0 - 0.5 * libm::erfc(snr / 2.0))
}

/// Complementary probability: chance an ideal threshold misassigns a shot.
pub fn misassignment_from_snr(snr: f64) -> Result<f64, ReadoutError> {
    Ok(1.0 - fidelity_from_snr(snr)?)
}
