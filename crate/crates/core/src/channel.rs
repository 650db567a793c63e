//! Random channel models.
//!
//! Flat fading uses an `rx × tx` i.i.d. Rayleigh matrix. Frequency-selective
//! channels are `L` taps `H_l = R_l^{1/2}·H_w,l` with independent i.i.d.
//! `H_w,l` per tap and receive-side correlation `R_l`. The `R_l` are
//! normalized so that `trace(Σ R_l) = rx` for every profile.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix};
use crate::rng::RngStream;

/// Transmit (`M`) and receive (`N`) antenna counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaConfig {
    pub tx: usize,
    pub rx: usize,
}

impl AntennaConfig {
    pub fn new(tx: usize, rx: usize) -> Result<Self> {
        if tx == 0 || rx == 0 {
            return Err(Error::InvalidConfig("antenna counts must be at least 1"));
        }
        Ok(Self { tx, rx })
    }

    /// `M = N = n`.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelationKind {
    Uncorrelated,
    /// `E_ij = coefficient^|i−j|`, coefficient in `[0, 1)`.
    Exponential { coefficient: f64 },
}

/// Tap power profile plus the spatial correlation shared by all taps.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    kind: CorrelationKind,
    tap_powers: Vec<f64>,
}

const POWER_SUM_TOL: f64 = 1e-9;

impl CorrelationProfile {
    pub fn new(kind: CorrelationKind, tap_powers: Vec<f64>) -> Result<Self> {
        if let CorrelationKind::Exponential { coefficient } = kind {
            if !(0.0..1.0).contains(&coefficient) {
                return Err(Error::InvalidProfile("correlation coefficient must lie in [0, 1)"));
            }
        }
        if tap_powers.is_empty() {
            return Err(Error::InvalidProfile("at least one tap is required"));
        }
        if tap_powers.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidProfile("tap powers must be finite and non-negative"));
        }
        let total: f64 = tap_powers.iter().sum();
        if (total - 1.0).abs() > POWER_SUM_TOL {
            return Err(Error::InvalidProfile("tap powers must sum to 1"));
        }
        Ok(Self { kind, tap_powers })
    }

    /// Single uncorrelated tap: the flat i.i.d. Rayleigh channel.
    pub fn flat() -> Self {
        Self { kind: CorrelationKind::Uncorrelated, tap_powers: alloc::vec![1.0] }
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    pub fn tap_powers(&self) -> &[f64] {
        &self.tap_powers
    }

    pub fn taps(&self) -> usize {
        self.tap_powers.len()
    }
}

/// `1/L` on each of `L` taps.
pub fn uniform_tap_powers(taps: usize) -> Vec<f64> {
    (0..taps).map(|_| 1.0 / taps as f64).collect()
}

/// `p_l ∝ exp(−rate·l)`, normalized to unit sum.
pub fn exp_decay_tap_powers(taps: usize, rate: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..taps).map(|l| libm::exp(-rate * l as f64)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// Per-tap receive correlation matrices `R_l` (each `rx × rx`), with
/// `trace(R_l) = p_l·rx`.
pub fn build_correlation(
    profile: &CorrelationProfile,
    cfg: AntennaConfig,
) -> Result<Vec<ComplexMatrix>> {
    let n = cfg.rx;
    let base = match profile.kind {
        CorrelationKind::Uncorrelated => ComplexMatrix::identity(n),
        CorrelationKind::Exponential { coefficient } => {
            let mut e = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let lag = i.abs_diff(j) as i32;
                    e[(i, j)] = Complex64::new(libm::pow(coefficient, lag as f64), 0.0);
                }
            }
            e
        }
    };
    // trace(E) is n for both kinds; kept explicit so other kinds stay normalized
    let norm = n as f64 / base.trace().re;
    Ok(profile.tap_powers.iter().map(|&p| base.scaled(p * norm)).collect())
}

/// The sum correlation matrix `R = Σ_l R_l`.
pub fn sum_correlation(profile: &CorrelationProfile, cfg: AntennaConfig) -> Result<ComplexMatrix> {
    let parts = build_correlation(profile, cfg)?;
    let mut total = ComplexMatrix::zeros(cfg.rx, cfg.rx);
    for r in &parts {
        total = total.add(r)?;
    }
    Ok(total)
}

/// `rx × tx` matrix of i.i.d. unit-variance circular complex Gaussians,
/// drawn row-major from `stream`.
pub fn sample_iid_cgaussian(cfg: AntennaConfig, stream: &mut RngStream) -> ComplexMatrix {
    let data = (0..cfg.rx * cfg.tx).map(|_| stream.next_cgaussian()).collect();
    ComplexMatrix::new(cfg.rx, cfg.tx, data).expect("antenna counts are positive")
}

/// Channel impulse response: `L` matrices of identical shape.
#[derive(Debug, Clone, PartialEq)]
pub struct TapSet {
    taps: Vec<ComplexMatrix>,
    profile: CorrelationProfile,
}

impl TapSet {
    pub fn new(taps: Vec<ComplexMatrix>, profile: CorrelationProfile) -> Result<Self> {
        let first = taps.first().ok_or(Error::InvalidProfile("at least one tap is required"))?;
        let (rows, cols) = (first.rows(), first.cols());
        if let Some(bad) = taps.iter().find(|t| t.rows() != rows || t.cols() != cols) {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: bad.rows() * bad.cols(),
            });
        }
        if taps.len() != profile.taps() {
            return Err(Error::DimensionMismatch { expected: profile.taps(), found: taps.len() });
        }
        Ok(Self { taps, profile })
    }

    pub fn taps(&self) -> &[ComplexMatrix] {
        &self.taps
    }

    pub fn profile(&self) -> &CorrelationProfile {
        &self.profile
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn rx(&self) -> usize {
        self.taps[0].rows()
    }

    pub fn tx(&self) -> usize {
        self.taps[0].cols()
    }
}

/// Precomputed coloring factors for repeated tap-channel draws.
#[derive(Debug, Clone)]
pub struct TapChannelModel {
    cfg: AntennaConfig,
    profile: CorrelationProfile,
    // None for zero-power taps
    factors: Vec<Option<ComplexMatrix>>,
}

impl TapChannelModel {
    pub fn new(profile: &CorrelationProfile, cfg: AntennaConfig) -> Result<Self> {
        let factors = build_correlation(profile, cfg)?
            .iter()
            .zip(profile.tap_powers())
            .map(|(r, &p)| if p == 0.0 { Ok(None) } else { psd_sqrt(r).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cfg, profile: profile.clone(), factors })
    }

    pub fn antennas(&self) -> AntennaConfig {
        self.cfg
    }

    pub fn profile(&self) -> &CorrelationProfile {
        &self.profile
    }

    /// Draws all taps from one stream, tap 0 first. Every tap consumes its
    /// `rx·tx` Gaussians, zero-power taps included, so tap `l` always sees the
    /// same draws for a given stream.
    pub fn sample(&self, stream: &mut RngStream) -> TapSet {
        let taps = self
            .factors
            .iter()
            .map(|factor| {
                let white = sample_iid_cgaussian(self.cfg, stream);
                match factor {
                    Some(b) => b * &white,
                    None => ComplexMatrix::zeros(self.cfg.rx, self.cfg.tx),
                }
            })
            .collect();
        TapSet { taps, profile: self.profile.clone() }
    }
}

/// One draw of the receive-correlated tap channel.
pub fn sample_tap_channel(
    profile: &CorrelationProfile,
    cfg: AntennaConfig,
    stream: &mut RngStream,
) -> Result<TapSet> {
    Ok(TapChannelModel::new(profile, cfg)?.sample(stream))
}

/// `n` OFDM tones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToneGrid {
    tones: usize,
}

impl ToneGrid {
    pub fn new(tones: usize) -> Result<Self> {
        if tones == 0 {
            return Err(Error::InvalidConfig("tone count must be at least 1"));
        }
        Ok(Self { tones })
    }

    pub fn tones(&self) -> usize {
        self.tones
    }
}

/// `e^{−j2π·k/n}`, exact at multiples of a quarter turn.
fn twiddle(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
    }
    let (sin, cos) = libm::sincos(-2.0 * PI * k as f64 / n as f64);
    Complex64::new(cos, sin)
}

/// Frequency response at tone `tone`: `H_D = Σ_l H_l·e^{−j2π·l·D/n}`.
pub fn freq_response(taps: &TapSet, grid: ToneGrid, tone: usize) -> Result<ComplexMatrix> {
    if tone >= grid.tones {
        return Err(Error::DimensionMismatch { expected: grid.tones, found: tone });
    }
    let n = grid.tones;
    let mut out = ComplexMatrix::zeros(taps.rx(), taps.tx());
    for (l, h) in taps.taps.iter().enumerate() {
        let w = twiddle((l % n) * tone, n);
        for (o, z) in out.as_mut_slice().iter_mut().zip(h.as_slice()) {
            *o += z * w;
        }
    }
    Ok(out)
}
