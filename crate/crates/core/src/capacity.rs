//! Capacity and mutual-information evaluations, all in b/s/Hz.
//!
//! Every function states its SNR convention (see [`crate::snr`]).

use alloc::vec::Vec;

use crate::channel::{freq_response, sum_correlation, AntennaConfig, CorrelationProfile, TapSet, ToneGrid};
use crate::error::{Error, Result};
use crate::linalg::{gram, herm_eigvals, logdet2_id_plus, min_side_gram, ComplexMatrix, EigenSpectrum, DEFAULT_ZERO_TOL};
use crate::snr::SnrSpec;

/// `log2 det(I + scale·H·H^H)`, evaluated on the smaller Gram side.
fn logdet_channel(h: &ComplexMatrix, scale: f64) -> Result<f64> {
    logdet2_id_plus(&min_side_gram(h), scale)
}

/// Instantaneous flat-fading capacity `Σᵢ log2(1 + (ρ/M)·λᵢ(H·H^H))`.
///
/// `H` is `rx × tx` and `tx` must equal its column count. Uses the flat
/// convention: the SNR is split evenly over the `tx` antennas.
pub fn instant_capacity_flat(h: &ComplexMatrix, snr: SnrSpec, tx: usize) -> Result<f64> {
    if h.cols() != tx {
        return Err(Error::DimensionMismatch { expected: tx, found: h.cols() });
    }
    logdet_channel(h, snr.per_antenna(tx))
}

/// Power allocation over eigenmodes, in descending-eigenvalue order.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    mode_powers: Vec<f64>,
    water_level: f64,
    total_power: f64,
}

impl PowerAllocation {
    pub fn mode_powers(&self) -> &[f64] {
        &self.mode_powers
    }

    /// The water level `μ`.
    pub fn water_level(&self) -> f64 {
        self.water_level
    }

    pub fn total_power(&self) -> f64 {
        self.total_power
    }

    pub fn active_modes(&self) -> usize {
        self.mode_powers.iter().filter(|&&p| p > 0.0).count()
    }

    /// `Σᵢ log2(1 + pᵢ·λᵢ/σₙ²)` for the spectrum the allocation was computed on.
    pub fn capacity(&self, eigs: &EigenSpectrum, sigma_n2: f64) -> f64 {
        self.mode_powers
            .iter()
            .zip(eigs.values())
            .map(|(p, l)| libm::log2(1.0 + p * l / sigma_n2))
            .sum()
    }
}

/// Exact water-filling over a sorted spectrum.
///
/// Finds the largest active set `k` for which
/// `μ = (P + σₙ²·Σ_{i≤k} 1/λᵢ) / k` exceeds `σₙ²/λ_k`, then assigns
/// `pᵢ = μ − σₙ²/λᵢ` to the active modes and zero to the rest. Equal
/// eigenvalues always receive equal power.
pub fn waterfill(eigs: &EigenSpectrum, total_power: f64, sigma_n2: f64) -> Result<PowerAllocation> {
    if !(total_power > 0.0) || !total_power.is_finite() {
        return Err(Error::InvalidScale(total_power));
    }
    if !(sigma_n2 > 0.0) || !sigma_n2.is_finite() {
        return Err(Error::InvalidScale(sigma_n2));
    }
    let positive = eigs.positive();
    if positive.is_empty() {
        return Err(Error::NoPositiveModes);
    }
    let level_for = |k: usize| {
        let inv_sum: f64 = positive[..k].iter().map(|l| sigma_n2 / l).sum();
        (total_power + inv_sum) / k as f64
    };
    let mut active = positive.len();
    let mut level = level_for(active);
    while active > 1 && level <= sigma_n2 / positive[active - 1] {
        active -= 1;
        level = level_for(active);
    }
    let mode_powers = eigs
        .values()
        .iter()
        .enumerate()
        .map(|(i, l)| if i < active { level - sigma_n2 / l } else { 0.0 })
        .collect();
    Ok(PowerAllocation { mode_powers, water_level: level, total_power })
}

/// Capacity with the channel known at the transmitter (water-filling over the
/// eigenmodes of `H·H^H`) for total power `P` and noise variance `σₙ²`.
///
/// The uniform-power counterpart at the same power is
/// [`instant_capacity_flat`] with `ρ = P/σₙ²`. A zero channel has zero
/// capacity.
pub fn capacity_csit(h: &ComplexMatrix, total_power: f64, sigma_n2: f64) -> Result<f64> {
    if h.is_zero() {
        return Ok(0.0);
    }
    let eigs = herm_eigvals(&gram(h), DEFAULT_ZERO_TOL)?;
    let alloc = waterfill(&eigs, total_power, sigma_n2)?;
    Ok(alloc.capacity(&eigs, sigma_n2))
}

/// Transmit covariance for one tone.
#[derive(Debug, Clone, Copy)]
pub enum ToneCovariance<'a> {
    /// `Σ_D = P/(M·n)·I_M`: power spread evenly over antennas and tones.
    Uniform { total_power: f64, tones: usize },
    /// Eigen-aligned allocation on the modes of `H_D·H_D^H`.
    Eigenmodes(&'a PowerAllocation),
}

/// Mutual information of one tone, `log2 det(I + H_D·Σ_D·H_D^H/σₙ²)`, not yet
/// divided by the tone count.
pub fn per_tone_mi(h_d: &ComplexMatrix, cov: ToneCovariance<'_>, sigma_n2: f64) -> Result<f64> {
    if !(sigma_n2 > 0.0) {
        return Err(Error::InvalidScale(sigma_n2));
    }
    match cov {
        ToneCovariance::Uniform { total_power, tones } => {
            if tones == 0 {
                return Err(Error::InvalidConfig("tone count must be at least 1"));
            }
            let scale = total_power / (h_d.cols() as f64 * tones as f64 * sigma_n2);
            logdet_channel(h_d, scale)
        }
        ToneCovariance::Eigenmodes(alloc) => {
            let powers = alloc.mode_powers();
            if powers.len() > h_d.rows() {
                return Err(Error::DimensionMismatch { expected: h_d.rows(), found: powers.len() });
            }
            let used: f64 = powers.iter().sum();
            let budget = alloc.total_power();
            if powers.iter().any(|&p| p < 0.0) || used > budget + 1e-9 * budget.max(1.0) {
                return Err(Error::PowerBudgetExceeded { used, budget });
            }
            let eigs = herm_eigvals(&gram(h_d), DEFAULT_ZERO_TOL)?;
            Ok(alloc.capacity(&eigs, sigma_n2))
        }
    }
}

/// Per-tone mutual information `log2 det(I + ρ·H_D·H_D^H)` for every tone,
/// with `ρ = snr.rho()` read as the OFDM per-stream SNR `P/(M·n·σₙ²)`.
pub fn per_tone_mi_uniform(taps: &TapSet, grid: ToneGrid, snr: SnrSpec) -> Result<Vec<f64>> {
    (0..grid.tones())
        .map(|d| logdet_channel(&freq_response(taps, grid, d)?, snr.rho()))
        .collect()
}

/// OFDM mutual information under uniform allocation: the mean of
/// [`per_tone_mi_uniform`] over the `n` tones.
///
/// With a single tap this equals [`instant_capacity_flat`] on that tap when
/// the flat SNR is `M·ρ`.
pub fn ofdm_mi_uniform(taps: &TapSet, grid: ToneGrid, snr: SnrSpec) -> Result<f64> {
    let per_tone = per_tone_mi_uniform(taps, grid, snr)?;
    Ok(per_tone.iter().sum::<f64>() / grid.tones() as f64)
}

/// Eigenvalues `Λ` of the sum correlation matrix, for repeated evaluation of
/// the correlated-model mutual information.
#[derive(Debug, Clone)]
pub struct CorrelationModel {
    lambda: EigenSpectrum,
    lambda_sqrt: Vec<f64>,
}

impl CorrelationModel {
    pub fn new(profile: &CorrelationProfile, rx: usize) -> Result<Self> {
        // tx does not enter R; 1 is a placeholder
        let r = sum_correlation(profile, AntennaConfig::new(1, rx)?)?;
        let lambda = herm_eigvals(&r, DEFAULT_ZERO_TOL)?;
        Ok(Self::from_spectrum(lambda))
    }

    pub fn from_spectrum(lambda: EigenSpectrum) -> Self {
        let lambda_sqrt = lambda.values().iter().map(|&l| libm::sqrt(l)).collect();
        Self { lambda, lambda_sqrt }
    }

    pub fn eigenvalues(&self) -> &EigenSpectrum {
        &self.lambda
    }

    /// `log2 det(I_N + ρ·Λ·H_w·H_w^H)` with `ρ` the per-stream SNR, applied as is.
    pub fn mi(&self, h_w: &ComplexMatrix, rho: f64) -> Result<f64> {
        if h_w.rows() != self.lambda.len() {
            return Err(Error::DimensionMismatch { expected: self.lambda.len(), found: h_w.rows() });
        }
        // det(I + ρΛG) = det(I + ρ·Λ^{1/2} G Λ^{1/2})
        let mut colored = h_w.clone();
        let cols = colored.cols();
        for (i, row) in colored.as_mut_slice().chunks_mut(cols).enumerate() {
            let s = self.lambda_sqrt[i];
            row.iter_mut().for_each(|z| *z *= s);
        }
        logdet_channel(&colored, rho)
    }
}

/// `log2 det(I_N + ρ·Λ·H_w·H_w^H)`, `Λ = diag(λᵢ(R))`, `ρ = snr.rho()`.
pub fn corr_model_mi(profile: &CorrelationProfile, h_w: &ComplexMatrix, snr: SnrSpec) -> Result<f64> {
    CorrelationModel::new(profile, h_w.rows())?.mi(h_w, snr.rho())
}

/// Large-array limit `Σᵢ log2(1 + ρ̄·λᵢ(R))`, equal to `log2 det(I_N + ρ̄Λ)`.
///
/// The high-SNR form is the same expression; at high `ρ̄` each nonzero
/// eigenvalue of `R` contributes one `log2 ρ̄` term.
pub fn asymptotic_large_m(profile: &CorrelationProfile, rx: usize, rho_bar: f64) -> Result<f64> {
    if !(rho_bar > 0.0) || !rho_bar.is_finite() {
        return Err(Error::InvalidScale(rho_bar));
    }
    let model = CorrelationModel::new(profile, rx)?;
    Ok(model.eigenvalues().values().iter().map(|l| libm::log2(1.0 + rho_bar * l)).sum())
}

/// Low-SNR limit `log2(1 + ρ̄·trace(R))`; depends on `R` only through its trace.
pub fn low_snr_capacity(profile: &CorrelationProfile, rx: usize, rho_bar: f64) -> Result<f64> {
    if !(rho_bar > 0.0) || !rho_bar.is_finite() {
        return Err(Error::InvalidScale(rho_bar));
    }
    let r = sum_correlation(profile, AntennaConfig::new(1, rx)?)?;
    Ok(libm::log2(1.0 + rho_bar * r.trace().re))
}
