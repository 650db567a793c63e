//! SNR bookkeeping.
//!
//! Three conventions appear in the capacity formulas and they are kept apart
//! here rather than silently mixed:
//!
//! * flat fading: the linear SNR `ρ` is split over `M` transmit antennas, so
//!   each eigenmode sees `ρ/M`;
//! * OFDM, uniform allocation: the per-stream SNR is `ρ = P/(M·n·σₙ²)` and
//!   enters the per-tone log-det unscaled;
//! * large-array asymptotics: the rescaled SNR `ρ̄ = M·ρ`.
//!
//! [`SnrSpec`] only stores the linear value and the noise variance; each
//! operation in [`crate::capacity`] states which of the above it applies.

/// Linear SNR plus the noise variance it is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSpec {
    snr_db: f64,
    rho: f64,
    sigma_n2: f64,
}

impl SnrSpec {
    /// # Panics
    /// If `snr_db` is not finite.
    pub fn from_db(snr_db: f64) -> Self {
        assert!(snr_db.is_finite(), "SNR must be finite");
        Self { snr_db, rho: libm::pow(10.0, snr_db / 10.0), sigma_n2: 1.0 }
    }

    /// # Panics
    /// If `rho` is not strictly positive and finite.
    pub fn from_linear(rho: f64) -> Self {
        assert!(rho > 0.0 && rho.is_finite(), "linear SNR must be positive");
        Self { snr_db: 10.0 * libm::log10(rho), rho, sigma_n2: 1.0 }
    }

    /// Per-stream OFDM SNR `ρ = P/(M·n·σₙ²)`.
    pub fn from_total_power(total_power: f64, tx: usize, tones: usize, sigma_n2: f64) -> Self {
        assert!(sigma_n2 > 0.0, "noise variance must be positive");
        let rho = total_power / (tx as f64 * tones as f64 * sigma_n2);
        Self { sigma_n2, ..Self::from_linear(rho) }
    }

    /// # Panics
    /// If `sigma_n2` is not strictly positive.
    pub fn with_noise(self, sigma_n2: f64) -> Self {
        assert!(sigma_n2 > 0.0 && sigma_n2.is_finite(), "noise variance must be positive");
        Self { sigma_n2, ..self }
    }

    pub fn snr_db(&self) -> f64 {
        self.snr_db
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sigma_n2(&self) -> f64 {
        self.sigma_n2
    }

    /// `ρ/M`, the per-eigenmode scale of the flat-fading formula.
    pub fn per_antenna(&self, tx: usize) -> f64 {
        self.rho / tx as f64
    }

    /// `ρ̄ = M·ρ`.
    pub fn rho_bar(&self, tx: usize) -> f64 {
        self.rho * tx as f64
    }

    /// `P = ρ·M·n·σₙ²`, the total power implied when `ρ` is read as the OFDM per-stream SNR.
    pub fn total_power(&self, tx: usize, tones: usize) -> f64 {
        self.rho * tx as f64 * tones as f64 * self.sigma_n2
    }
}
