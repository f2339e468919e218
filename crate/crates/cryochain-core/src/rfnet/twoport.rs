//! Two-port scattering records: validation, cascading, resampling.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use super::{FrequencyGrid, RfNetError};

/// One 2x2 scattering matrix sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sparams {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
}

impl Sparams {
    pub fn new(s11: Complex64, s12: Complex64, s21: Complex64, s22: Complex64) -> Self {
        Self { s11, s12, s21, s22 }
    }

    /// Ideal transparent connection: unit transmission, no reflection.
    pub fn thru() -> Self {
        Self {
            s11: Complex64::new(0.0, 0.0),
            s12: Complex64::new(1.0, 0.0),
            s21: Complex64::new(1.0, 0.0),
            s22: Complex64::new(0.0, 0.0),
        }
    }

    /// Ideal matched attenuator: `|S21| = 10^(-loss_db/20)`, no reflection.
    pub fn matched_attenuator(loss_db: f64) -> Self {
        let mag = Float::powf(10.0_f64, -loss_db / 20.0);
        let s = Complex64::new(mag, 0.0);
        Self { s11: Complex64::new(0.0, 0.0), s12: s, s21: s, s22: Complex64::new(0.0, 0.0) }
    }

    pub fn det(&self) -> Complex64 {
        self.s11 * self.s22 - self.s12 * self.s21
    }

    fn is_finite(&self) -> bool {
        [self.s11, self.s12, self.s21, self.s22]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Matched-load forward power gain `|S21|^2`.
    pub fn forward_gain(&self) -> f64 {
        self.s21.norm_sqr()
    }
}

/// Wave transfer matrix of one sample; valid only when S21 != 0.
#[derive(Debug, Clone, Copy)]
struct Transfer {
    t11: Complex64,
    t12: Complex64,
    t21: Complex64,
    t22: Complex64,
}

impl Transfer {
    fn from_sparams(s: &Sparams) -> Option<Self> {
        if s.s21 == Complex64::new(0.0, 0.0) {
            return None;
        }
        let inv = Complex64::new(1.0, 0.0) / s.s21;
        Some(Self { t11: -s.det() * inv, t12: s.s11 * inv, t21: -s.s22 * inv, t22: inv })
    }

    fn mul(&self, rhs: &Transfer) -> Transfer {
        Transfer {
            t11: self.t11 * rhs.t11 + self.t12 * rhs.t21,
            t12: self.t11 * rhs.t12 + self.t12 * rhs.t22,
            t21: self.t21 * rhs.t11 + self.t22 * rhs.t21,
            t22: self.t21 * rhs.t12 + self.t22 * rhs.t22,
        }
    }

    fn to_sparams(self) -> Option<Sparams> {
        if self.t22 == Complex64::new(0.0, 0.0) {
            return None;
        }
        let det = self.t11 * self.t22 - self.t12 * self.t21;
        Some(Sparams {
            s11: self.t12 / self.t22,
            s12: det / self.t22,
            s21: Complex64::new(1.0, 0.0) / self.t22,
            s22: -self.t21 / self.t22,
        })
    }
}

/// Frequency-sampled two-port scattering data at a fixed reference impedance.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortRecord {
    grid: FrequencyGrid,
    sparams: Vec<Sparams>,
    z_ref_ohm: f64,
}

impl TwoPortRecord {
    pub fn new(
        grid: FrequencyGrid,
        sparams: Vec<Sparams>,
        z_ref_ohm: f64,
    ) -> Result<Self, RfNetError> {
        if !z_ref_ohm.is_finite() || z_ref_ohm <= 0.0 {
            return Err(RfNetError::BadImpedance { z_ohm: z_ref_ohm });
        }
        if grid.len() != sparams.len() {
            return Err(RfNetError::PointCountMismatch { grid: grid.len(), data: sparams.len() });
        }
        if let Some(i) = sparams.iter().position(|s| !s.is_finite()) {
            return Err(RfNetError::NonFiniteSparam { index: i });
        }
        Ok(Self { grid, sparams, z_ref_ohm })
    }

    /// Same sample replicated across the whole grid.
    pub fn from_constant(
        grid: FrequencyGrid,
        sample: Sparams,
        z_ref_ohm: f64,
    ) -> Result<Self, RfNetError> {
        let n = grid.len();
        Self::new(grid, alloc::vec![sample; n], z_ref_ohm)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn sparams(&self) -> &[Sparams] {
        &self.sparams
    }

    pub fn z_ref_ohm(&self) -> f64 {
        self.z_ref_ohm
    }

    /// Enforce `|S21 S12| <= 1` at every point.
    pub fn check_passive(&self) -> Result<(), RfNetError> {
        for (i, s) in self.sparams.iter().enumerate() {
            let product = (s.s21 * s.s12).norm();
            if product > 1.0 {
                return Err(RfNetError::NotPassive {
                    freq_hz: self.grid.points()[i],
                    product,
                });
            }
        }
        Ok(())
    }
}

/// Cascade two records sharing a grid and reference impedance: the output of
/// `first` feeds the input of `second`.
pub fn cascade_sparams(
    first: &TwoPortRecord,
    second: &TwoPortRecord,
) -> Result<TwoPortRecord, RfNetError> {
    if first.z_ref_ohm != second.z_ref_ohm {
        return Err(RfNetError::ImpedanceMismatch {
            a_ohm: first.z_ref_ohm,
            b_ohm: second.z_ref_ohm,
        });
    }
    if first.grid != second.grid {
        return Err(RfNetError::GridMismatch);
    }
    let mut out = Vec::with_capacity(first.sparams.len());
    for (i, (a, b)) in first.sparams.iter().zip(&second.sparams).enumerate() {
        let freq_hz = first.grid.points()[i];
        let ta = Transfer::from_sparams(a).ok_or(RfNetError::SingularConversion { freq_hz })?;
        let tb = Transfer::from_sparams(b).ok_or(RfNetError::SingularConversion { freq_hz })?;
        let s = ta
            .mul(&tb)
            .to_sparams()
            .ok_or(RfNetError::SingularConversion { freq_hz })?;
        out.push(s);
    }
    TwoPortRecord::new(first.grid.clone(), out, first.z_ref_ohm)
}

fn unwrap_phases(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0;
    for (i, &p) in raw.iter().enumerate() {
        if i > 0 {
            let mut step = p - raw[i - 1];
            while step > PI {
                offset -= TAU;
                step -= TAU;
            }
            while step < -PI {
                offset += TAU;
                step += TAU;
            }
        }
        out.push(p + offset);
    }
    out
}

/// Resample a record onto `target`, interpolating each S-parameter linearly
/// in magnitude and unwrapped phase. Every target point must lie within the
/// record's span; points that coincide with source points are copied exactly.
pub fn resample(record: &TwoPortRecord, target: &FrequencyGrid) -> Result<TwoPortRecord, RfNetError> {
    let src = record.grid.points();
    let span = (record.grid.min_hz(), record.grid.max_hz());
    if let Some(&bad) = target.points().iter().find(|&&f| f < span.0 || f > span.1) {
        return Err(RfNetError::OutOfSpan { first_hz: bad, span_hz: span });
    }

    let entries = |s: &Sparams| [s.s11, s.s12, s.s21, s.s22];
    let mut mags = [const { Vec::new() }; 4];
    let mut phases = [const { Vec::new() }; 4];
    for k in 0..4 {
        let raw: Vec<f64> = record.sparams.iter().map(|s| entries(s)[k].arg()).collect();
        mags[k] = record.sparams.iter().map(|s| entries(s)[k].norm()).collect();
        phases[k] = unwrap_phases(&raw);
    }

    let mut out = Vec::with_capacity(target.len());
    for &f in target.points() {
        match src.binary_search_by(|p| p.partial_cmp(&f).expect("finite grid")) {
            Ok(i) => out.push(record.sparams[i]),
            Err(upper) => {
                // Span check guarantees 0 < upper < src.len() here.
                let i = upper - 1;
                let t = (f - src[i]) / (src[i + 1] - src[i]);
                let mut vals = [Complex64::new(0.0, 0.0); 4];
                for (k, v) in vals.iter_mut().enumerate() {
                    let m = mags[k][i] + t * (mags[k][i + 1] - mags[k][i]);
                    let ph = phases[k][i] + t * (phases[k][i + 1] - phases[k][i]);
                    *v = Complex64::from_polar(m, ph);
                }
                out.push(Sparams { s11: vals[0], s12: vals[1], s21: vals[2], s22: vals[3] });
            }
        }
    }
    TwoPortRecord::new(target.clone(), out, record.z_ref_ohm)
}
