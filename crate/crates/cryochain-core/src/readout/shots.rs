//! IQ shot synthesis and blob analytics.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::rng::{normal_pair, u64_to_open_unit, Philox4x64};
use super::{
    noise_sigma, s21_dispersive, QubitState, ReadoutConfig, ReadoutError, ResonatorModel,
};

// Key word 1 of the shot stream; keeps shot draws disjoint from any future
// stream that reuses the same seed.
const SHOT_STREAM_TAG: u64 = 0x7265_6164_6f75_7431;

/// One integrated readout outcome in the IQ plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IQPoint {
    pub i: f64,
    pub q: f64,
    /// Prepared state; decay can move the point without relabeling it.
    pub true_state: QubitState,
}

impl IQPoint {
    fn as_complex(&self) -> Complex64 {
        Complex64::new(self.i, self.q)
    }
}

/// A batch of labeled shots.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotSet {
    shots: Vec<IQPoint>,
}

impl ShotSet {
    pub fn from_points(shots: Vec<IQPoint>) -> Result<Self, ReadoutError> {
        if let Some(index) = shots.iter().position(|p| !p.i.is_finite() || !p.q.is_finite()) {
            return Err(ReadoutError::NonFiniteShot { index });
        }
        Ok(Self { shots })
    }

    pub fn shots(&self) -> &[IQPoint] {
        &self.shots
    }

    pub fn len(&self) -> usize {
        self.shots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shots.is_empty()
    }

    pub fn count(&self, state: QubitState) -> usize {
        self.shots.iter().filter(|p| p.true_state == state).count()
    }

    fn mean(&self, state: QubitState) -> Option<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut n = 0usize;
        for p in &self.shots {
            if p.true_state == state {
                sum += p.as_complex();
                n += 1;
            }
        }
        (n > 0).then(|| sum / n as f64)
    }

    /// Sample centers of the two blobs; errors if a state is absent.
    pub fn centers(&self) -> Result<(Complex64, Complex64), ReadoutError> {
        let c0 = self
            .mean(QubitState::Ground)
            .ok_or(ReadoutError::SingleState { missing_state: 0 })?;
        let c1 = self
            .mean(QubitState::Excited)
            .ok_or(ReadoutError::SingleState { missing_state: 1 })?;
        Ok((c0, c1))
    }

    /// Centers plus per-state spread along the discrimination axis
    /// (the line through the two centers), sample statistics with ddof 1.
    pub fn blob_stats(&self) -> Result<BlobStats, ReadoutError> {
        for state in [QubitState::Ground, QubitState::Excited] {
            let n = self.count(state);
            if n < 2 {
                return Err(ReadoutError::TooFewShots { state: state.index(), count: n });
            }
        }
        let (c0, c1) = self.centers()?;
        let d = c1 - c0;
        let sep = d.norm();
        if sep == 0.0 {
            return Err(ReadoutError::DegenerateBlobs);
        }
        let axis = d / sep;
        let spread = |state: QubitState, center: Complex64| {
            let mut sum_sq = 0.0;
            let mut n = 0usize;
            for p in &self.shots {
                if p.true_state == state {
                    let rel = p.as_complex() - center;
                    let proj = rel.re * axis.re + rel.im * axis.im;
                    sum_sq += proj * proj;
                    n += 1;
                }
            }
            Float::sqrt(sum_sq / (n - 1) as f64)
        };
        Ok(BlobStats {
            c0,
            c1,
            n0: self.count(QubitState::Ground),
            n1: self.count(QubitState::Excited),
            sigma0: spread(QubitState::Ground, c0),
            sigma1: spread(QubitState::Excited, c1),
        })
    }
}

/// Sample blob statistics in the IQ plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobStats {
    pub c0: Complex64,
    pub c1: Complex64,
    pub n0: usize,
    pub n1: usize,
    /// Spread of ground-state shots along the discrimination axis.
    pub sigma0: f64,
    /// Spread of excited-state shots along the discrimination axis.
    pub sigma1: f64,
}

/// Two circular Gaussian blobs plus an optional decay channel.
///
/// Shot k of a run is a pure function of (seed, k), so ranges of the index
/// space can be generated on any worker in any order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobModel {
    c0: Complex64,
    c1: Complex64,
    sigma: f64,
    decay_prob: f64,
}

impl BlobModel {
    /// Blob centers and noise scale derived from a probe/resonator pair:
    /// `c_state = S21(probe, state) sqrt(p_in)`, per-quadrature sigma from
    /// the radiometry closure in [`noise_sigma`].
    pub fn from_chain(cfg: &ReadoutConfig, r: &ResonatorModel) -> Result<Self, ReadoutError> {
        cfg.validate()?;
        r.validate()?;
        if cfg.t_sys_k == 0.0 {
            // The noiseless limit is reachable through `synthetic`.
            return Err(ReadoutError::InfiniteSnr);
        }
        let amp = Float::sqrt(cfg.p_in_w);
        Ok(Self {
            c0: s21_dispersive(cfg.probe_freq_hz, QubitState::Ground, r) * amp,
            c1: s21_dispersive(cfg.probe_freq_hz, QubitState::Excited, r) * amp,
            sigma: noise_sigma(cfg)?,
            decay_prob: cfg.decay_prob,
        })
    }

    /// Blobs with directly specified centers and spread; `sigma = 0` is the
    /// noiseless limit where every shot lands exactly on its center.
    pub fn synthetic(
        c0: Complex64,
        c1: Complex64,
        sigma: f64,
        decay_prob: f64,
    ) -> Result<Self, ReadoutError> {
        for c in [c0, c1] {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(ReadoutError::NonFinite { what: "blob center" });
            }
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(ReadoutError::InvalidConfig { what: "sigma", value: sigma });
        }
        if !decay_prob.is_finite() || !(0.0..=1.0).contains(&decay_prob) {
            return Err(ReadoutError::InvalidConfig { what: "decay_prob", value: decay_prob });
        }
        Ok(Self { c0, c1, sigma, decay_prob })
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn decay_prob(&self) -> f64 {
        self.decay_prob
    }

    /// Population SNR of the model: `|c1 - c0| / sqrt(2 sigma^2)`.
    pub fn snr(&self) -> Result<f64, ReadoutError> {
        if self.sigma == 0.0 {
            return Err(ReadoutError::InfiniteSnr);
        }
        Ok((self.c1 - self.c0).norm() / (self.sigma * Float::sqrt(2.0)))
    }

    /// Generate shots `start..end` of a `2 * n_per_state` run. Indices below
    /// `n_per_state` are ground-state preparations, the rest excited.
    /// Concatenating any partition of `0..2n` reproduces [`Self::simulate`].
    pub fn generate_range(
        &self,
        start: usize,
        end: usize,
        n_per_state: usize,
        seed: u64,
    ) -> Result<Vec<IQPoint>, ReadoutError> {
        if n_per_state == 0 {
            return Err(ReadoutError::InvalidConfig { what: "n_per_state", value: 0.0 });
        }
        let total = n_per_state
            .checked_mul(2)
            .ok_or(ReadoutError::InvalidConfig { what: "n_per_state", value: n_per_state as f64 })?;
        if start > end || end > total {
            return Err(ReadoutError::InvalidConfig { what: "shot range end", value: end as f64 });
        }
        let gen = Philox4x64::new([seed, SHOT_STREAM_TAG]);
        let mut out = Vec::with_capacity(end - start);
        for k in start..end {
            let true_state =
                if k < n_per_state { QubitState::Ground } else { QubitState::Excited };
            let words = gen.block([k as u64, 0, 0, 0]);
            let (ni, nq) = normal_pair(words[0], words[1]);
            let decayed = true_state == QubitState::Excited
                && u64_to_open_unit(words[2]) < self.decay_prob;
            let center = if decayed || true_state == QubitState::Ground { self.c0 } else { self.c1 };
            out.push(IQPoint {
                i: center.re + self.sigma * ni,
                q: center.im + self.sigma * nq,
                true_state,
            });
        }
        Ok(out)
    }

    /// Full run of `n_per_state` shots per prepared state.
    pub fn simulate(&self, n_per_state: usize, seed: u64) -> Result<ShotSet, ReadoutError> {
        let points = self.generate_range(0, 2 * n_per_state, n_per_state, seed)?;
        ShotSet::from_points(points)
    }
}

/// Simulate a labeled run directly from a probe/resonator description.
pub fn simulate_shots(
    cfg: &ReadoutConfig,
    r: &ResonatorModel,
    n_per_state: usize,
    seed: u64,
) -> Result<ShotSet, ReadoutError> {
    BlobModel::from_chain(cfg, r)?.simulate(n_per_state, seed)
}

/// Rigid rotation that puts the blob separation along the +Q axis.
///
/// Returns the applied angle and the rotated set; distances are preserved,
/// so every separation-based statistic is unchanged.
pub fn align_rotation(shots: &ShotSet) -> Result<(f64, ShotSet), ReadoutError> {
    let (c0, c1) = shots.centers()?;
    let d = c1 - c0;
    if d.norm() == 0.0 {
        return Err(ReadoutError::DegenerateBlobs);
    }
    let angle = core::f64::consts::FRAC_PI_2 - d.arg();
    let rot = Complex64::from_polar(1.0, angle);
    let rotated: Vec<IQPoint> = shots
        .shots()
        .iter()
        .map(|p| {
            let z = p.as_complex() * rot;
            IQPoint { i: z.re, q: z.im, true_state: p.true_state }
        })
        .collect();
    Ok((angle, ShotSet::from_points(rotated)?))
}

/// Plug-in blob-separation SNR: `|c1 - c0| / sqrt(sigma0^2 + sigma1^2)`
/// with sample means and sample standard deviations along the
/// discrimination axis. Coincident centers give 0 by convention.
pub fn snr_estimate(shots: &ShotSet) -> Result<f64, ReadoutError> {
    for state in [QubitState::Ground, QubitState::Excited] {
        let n = shots.count(state);
        if n < 2 {
            return Err(ReadoutError::TooFewShots { state: state.index(), count: n });
        }
    }
    let (c0, c1) = shots.centers()?;
    let sep = (c1 - c0).norm();
    if sep == 0.0 {
        return Ok(0.0);
    }
    let stats = shots.blob_stats()?;
    let denom_sq = stats.sigma0 * stats.sigma0 + stats.sigma1 * stats.sigma1;
    if denom_sq == 0.0 {
        return Err(ReadoutError::ZeroSpread);
    }
    Ok(sep / Float::sqrt(denom_sq))
}

/// Assignment results from a midpoint threshold on the aligned Q axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionReport {
    /// Fraction of ground-state shots assigned ground.
    pub f0: f64,
    /// Fraction of excited-state shots assigned excited.
    pub f1: f64,
    pub f_avg: f64,
    /// Decision boundary in rotated coordinates.
    pub threshold_q: f64,
    /// Rotation applied before thresholding, radians.
    pub angle_rad: f64,
    /// Assigned state per shot, in input order.
    pub assigned: Vec<QubitState>,
    /// The rotated shots the threshold was applied to.
    pub rotated: ShotSet,
}

/// Align, threshold at the midpoint of the two centers on the Q axis, and
/// count correct assignments per prepared state.
pub fn classify_and_confusion(shots: &ShotSet) -> Result<ConfusionReport, ReadoutError> {
    let (angle_rad, rotated) = align_rotation(shots)?;
    let (c0r, c1r) = rotated.centers()?;
    // Alignment puts c1 above c0 on the Q axis.
    let threshold_q = 0.5 * (c0r.im + c1r.im);
    let mut correct = [0usize; 2];
    let mut totals = [0usize; 2];
    let mut assigned = Vec::with_capacity(rotated.len());
    for p in rotated.shots() {
        let guess = if p.q > threshold_q { QubitState::Excited } else { QubitState::Ground };
        let s = p.true_state.index() as usize;
        totals[s] += 1;
        if guess == p.true_state {
            correct[s] += 1;
        }
        assigned.push(guess);
    }
    let f0 = correct[0] as f64 / totals[0] as f64;
    let f1 = correct[1] as f64 / totals[1] as f64;
    Ok(ConfusionReport {
        f0,
        f1,
        f_avg: 0.5 * (f0 + f1),
        threshold_q,
        angle_rad,
        assigned,
        rotated,
    })
}

/// Q-axis histogram of a (typically rotated) shot set.
#[derive(Debug, Clone, PartialEq)]
pub struct QHistogram {
    pub bin_centers_q: Vec<f64>,
    pub count_state0: Vec<u64>,
    pub count_state1: Vec<u64>,
}

/// Bin shots by Q coordinate over the observed range, counting each
/// prepared state separately. The top edge is inclusive.
pub fn q_histogram(shots: &ShotSet, n_bins: usize) -> Result<QHistogram, ReadoutError> {
    if n_bins == 0 {
        return Err(ReadoutError::ZeroBins);
    }
    if shots.is_empty() {
        return Err(ReadoutError::EmptyShotSet);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in shots.shots() {
        lo = lo.min(p.q);
        hi = hi.max(p.q);
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / n_bins as f64;
    let mut count_state0 = alloc::vec![0u64; n_bins];
    let mut count_state1 = alloc::vec![0u64; n_bins];
    for p in shots.shots() {
        let raw = ((p.q - lo) / width) as usize;
        let bin = raw.min(n_bins - 1);
        match p.true_state {
            QubitState::Ground => count_state0[bin] += 1,
            QubitState::Excited => count_state1[bin] += 1,
        }
    }
    let bin_centers_q = (0..n_bins).map(|b| lo + (b as f64 + 0.5) * width).collect();
    Ok(QHistogram { bin_centers_q, count_state0, count_state1 })
}
