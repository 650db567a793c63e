//! SNR sweeps.
//!
//! Every row reuses the same `(seed, trial)` streams, so curves across SNR
//! are computed on common channel draws. The SNR value of a row is the total
//! receive SNR `ρ`: flat channels split it as `ρ/M` per antenna, OFDM models
//! use the per-stream `ρ/M` on every tone, and the asymptotic rows read it as
//! `ρ̄`.

use alloc::vec;
use alloc::vec::Vec;

use crate::capacity::{
    asymptotic_large_m, capacity_csit, instant_capacity_flat, low_snr_capacity, ofdm_mi_uniform,
};
use crate::channel::{sample_iid_cgaussian, AntennaConfig, CorrelationProfile, TapChannelModel, ToneGrid};
use crate::error::{Error, Result};
use crate::estimate::{collect_samples, outage_capacity, CapacityEstimate, EmpiricalDistribution, TrialRunner};
use crate::rng::RngStream;
use crate::snr::SnrSpec;

/// Inclusive `start:stop:step` grid in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    start_db: f64,
    stop_db: f64,
    step_db: f64,
}

impl SnrGrid {
    pub fn new(start_db: f64, stop_db: f64, step_db: f64) -> Result<Self> {
        if !(start_db.is_finite() && stop_db.is_finite() && step_db.is_finite()) {
            return Err(Error::InvalidConfig("SNR grid values must be finite"));
        }
        if !(step_db > 0.0) {
            return Err(Error::InvalidConfig("SNR step must be positive"));
        }
        if start_db > stop_db {
            return Err(Error::InvalidConfig("SNR start must not exceed stop"));
        }
        Ok(Self { start_db, stop_db, step_db })
    }

    pub fn single(snr_db: f64) -> Result<Self> {
        Self::new(snr_db, snr_db, 1.0)
    }

    /// `start + i·step` for every `i` with the point at most `stop`
    /// (a relative slack of 1e-9 steps absorbs round-off at the end point).
    pub fn points(&self) -> Vec<f64> {
        let span = (self.stop_db - self.start_db) / self.step_db;
        let count = libm::floor(span + 1e-9) as usize + 1;
        (0..count).map(|i| self.start_db + i as f64 * self.step_db).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    /// i.i.d. Rayleigh flat fading.
    Flat,
    /// Receive-correlated tap-delay channel seen through an OFDM tone grid.
    Taps { profile: CorrelationProfile, tones: ToneGrid },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    Ergodic,
    Outage { percent: f64 },
    /// Uniform power versus water-filling with transmitter CSI (flat only).
    WaterfillCompare,
    /// Deterministic large-array and low-SNR limits.
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub antennas: AntennaConfig,
    pub snr: SnrGrid,
    pub trials: u64,
    pub seed: u64,
    pub channel: ChannelSpec,
    pub estimator: EstimatorKind,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 && self.estimator != EstimatorKind::Asymptotic {
            return Err(Error::InvalidConfig("trials must be at least 1"));
        }
        match self.estimator {
            EstimatorKind::Outage { percent } if !(percent > 0.0 && percent < 100.0) => {
                Err(Error::InvalidPercent(percent))
            }
            EstimatorKind::WaterfillCompare if self.channel != ChannelSpec::Flat => {
                Err(Error::InvalidConfig("water-filling comparison needs the flat channel"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub mean: f64,
    pub std_error: f64,
    /// Zero for deterministic rows.
    pub trials: u64,
    /// Values for [`SweepTable::extra_columns`], same order.
    pub extra: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub extra_columns: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

/// Names of the per-estimator columns following `snr_db, mean, std_error, trials`.
pub fn extra_columns(estimator: EstimatorKind) -> Vec<&'static str> {
    match estimator {
        EstimatorKind::Ergodic => vec![],
        EstimatorKind::Outage { .. } => vec!["outage_percent", "outage_bps_hz"],
        EstimatorKind::WaterfillCompare => {
            vec!["csit_mean_bps_hz", "csit_std_error", "gap_mean_bps_hz", "gap_std_error"]
        }
        EstimatorKind::Asymptotic => vec!["low_snr_bps_hz"],
    }
}

enum Sampler {
    Flat(AntennaConfig),
    Taps { model: TapChannelModel, tones: ToneGrid },
}

impl Sampler {
    fn new(cfg: &SweepConfig) -> Result<Self> {
        Ok(match &cfg.channel {
            ChannelSpec::Flat => Self::Flat(cfg.antennas),
            ChannelSpec::Taps { profile, tones } => {
                Self::Taps { model: TapChannelModel::new(profile, cfg.antennas)?, tones: *tones }
            }
        })
    }

    /// Capacity of one draw at total SNR `snr`.
    fn capacity(&self, stream: &mut RngStream, snr: SnrSpec) -> Result<f64> {
        match self {
            Self::Flat(cfg) => instant_capacity_flat(&sample_iid_cgaussian(*cfg, stream), snr, cfg.tx),
            Self::Taps { model, tones } => {
                let taps = model.sample(stream);
                let per_stream = SnrSpec::from_linear(snr.per_antenna(model.antennas().tx));
                ofdm_mi_uniform(&taps, *tones, per_stream)
            }
        }
    }
}

/// Runs the sweep, one row per SNR grid point.
pub fn snr_sweep<R: TrialRunner>(cfg: &SweepConfig, runner: &R) -> Result<SweepTable> {
    cfg.validate()?;
    let extra_columns = extra_columns(cfg.estimator);
    let rows = match cfg.estimator {
        EstimatorKind::Asymptotic => asymptotic_rows(cfg)?,
        EstimatorKind::WaterfillCompare => waterfill_rows(cfg, runner)?,
        EstimatorKind::Ergodic | EstimatorKind::Outage { .. } => {
            let sampler = Sampler::new(cfg)?;
            cfg.snr
                .points()
                .into_iter()
                .map(|snr_db| {
                    let snr = SnrSpec::from_db(snr_db);
                    let samples = collect_samples(
                        runner,
                        cfg.trials,
                        cfg.seed,
                        |stream| sampler.capacity(stream, snr),
                        |c| c.clone(),
                    )?;
                    let est = CapacityEstimate::from_samples(&samples)?;
                    let extra = match cfg.estimator {
                        EstimatorKind::Outage { percent } => {
                            let dist = EmpiricalDistribution::new(samples)?;
                            vec![percent, outage_capacity(&dist, percent)?]
                        }
                        _ => vec![],
                    };
                    Ok(row(snr_db, est, extra))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(SweepTable { extra_columns, rows })
}

fn row(snr_db: f64, est: CapacityEstimate, extra: Vec<f64>) -> SweepRow {
    SweepRow { snr_db, mean: est.mean, std_error: est.std_error, trials: est.trials, extra }
}

fn waterfill_rows<R: TrialRunner>(cfg: &SweepConfig, runner: &R) -> Result<Vec<SweepRow>> {
    let ant = cfg.antennas;
    cfg.snr
        .points()
        .into_iter()
        .map(|snr_db| {
            let snr = SnrSpec::from_db(snr_db);
            // P = ρ·σₙ² with σₙ² = 1
            let power = snr.rho() * snr.sigma_n2();
            let pairs = runner
                .run(cfg.trials, |k| {
                    let h = sample_iid_cgaussian(ant, &mut RngStream::new(cfg.seed, k));
                    let uniform = instant_capacity_flat(&h, snr, ant.tx)?;
                    let csit = capacity_csit(&h, power, snr.sigma_n2())?;
                    Ok((uniform, csit))
                })
                .into_iter()
                .collect::<Result<Vec<(f64, f64)>>>()?;
            let uniform: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let csit: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let gap: Vec<f64> = pairs.iter().map(|p| p.1 - p.0).collect();
            let u = CapacityEstimate::from_samples(&uniform)?;
            let c = CapacityEstimate::from_samples(&csit)?;
            let g = CapacityEstimate::from_samples(&gap)?;
            Ok(row(snr_db, u, vec![c.mean, c.std_error, g.mean, g.std_error]))
        })
        .collect()
}

fn asymptotic_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let profile = match &cfg.channel {
        ChannelSpec::Flat => CorrelationProfile::flat(),
        ChannelSpec::Taps { profile, .. } => profile.clone(),
    };
    let rx = cfg.antennas.rx;
    cfg.snr
        .points()
        .into_iter()
        .map(|snr_db| {
            let rho_bar = SnrSpec::from_db(snr_db).rho();
            Ok(SweepRow {
                snr_db,
                mean: asymptotic_large_m(&profile, rx, rho_bar)?,
                std_error: 0.0,
                trials: 0,
                extra: vec![low_snr_capacity(&profile, rx, rho_bar)?],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{uniform_tap_powers, CorrelationKind};
    use crate::estimate::{ergodic_estimate, Sequential};

    fn flat_cfg(n: usize, grid: SnrGrid, estimator: EstimatorKind) -> SweepConfig {
        SweepConfig {
            antennas: AntennaConfig::square(n).unwrap(),
            snr: grid,
            trials: 200,
            seed: 42,
            channel: ChannelSpec::Flat,
            estimator,
        }
    }

    #[test]
    fn grid_points() {
        assert_eq!(SnrGrid::new(0.0, 20.0, 2.0).unwrap().points().len(), 11);
        assert_eq!(SnrGrid::new(0.0, 1.0, 0.1).unwrap().points().len(), 11);
        assert_eq!(SnrGrid::new(0.0, 5.0, 2.0).unwrap().points(), vec![0.0, 2.0, 4.0]);
        assert_eq!(SnrGrid::single(7.0).unwrap().points(), vec![7.0]);
        assert!(SnrGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(SnrGrid::new(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn single_point_equals_direct_estimate() {
        let cfg = flat_cfg(2, SnrGrid::single(10.0).unwrap(), EstimatorKind::Ergodic);
        let table = snr_sweep(&cfg, &Sequential).unwrap();
        let direct = ergodic_estimate(
            &Sequential,
            200,
            42,
            |s| sample_iid_cgaussian(cfg.antennas, s),
            |h| instant_capacity_flat(h, SnrSpec::from_db(10.0), 2),
        )
        .unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].mean, direct.mean);
        assert_eq!(table.rows[0].std_error, direct.std_error);
        assert_eq!(table.rows[0].trials, 200);
    }

    #[test]
    fn config_validation() {
        let grid = SnrGrid::single(0.0).unwrap();
        let mut cfg = flat_cfg(2, grid, EstimatorKind::Outage { percent: 0.0 });
        assert!(snr_sweep(&cfg, &Sequential).is_err());
        cfg.estimator = EstimatorKind::Ergodic;
        cfg.trials = 0;
        assert!(snr_sweep(&cfg, &Sequential).is_err());
        cfg.trials = 10;
        cfg.estimator = EstimatorKind::WaterfillCompare;
        cfg.channel = ChannelSpec::Taps {
            profile: CorrelationProfile::flat(),
            tones: ToneGrid::new(4).unwrap(),
        };
        assert!(snr_sweep(&cfg, &Sequential).is_err());
    }

    #[test]
    fn ofdm_flat_tap_rows_match_flat_rows() {
        let grid = SnrGrid::new(0.0, 10.0, 5.0).unwrap();
        let flat = flat_cfg(2, grid, EstimatorKind::Ergodic);
        let ofdm = SweepConfig {
            channel: ChannelSpec::Taps {
                profile: CorrelationProfile::flat(),
                tones: ToneGrid::new(4).unwrap(),
            },
            ..flat.clone()
        };
        let a = snr_sweep(&flat, &Sequential).unwrap();
        let b = snr_sweep(&ofdm, &Sequential).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert!((x.mean - y.mean).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_rows_are_deterministic() {
        let profile = CorrelationProfile::new(
            CorrelationKind::Exponential { coefficient: 0.5 },
            uniform_tap_powers(4),
        )
        .unwrap();
        let cfg = SweepConfig {
            antennas: AntennaConfig::new(1, 2).unwrap(),
            snr: SnrGrid::single(30.0).unwrap(),
            trials: 0,
            seed: 0,
            channel: ChannelSpec::Taps { profile: profile.clone(), tones: ToneGrid::new(1).unwrap() },
            estimator: EstimatorKind::Asymptotic,
        };
        let t = snr_sweep(&cfg, &Sequential).unwrap();
        assert_eq!(t.rows[0].trials, 0);
        assert_eq!(t.rows[0].mean, asymptotic_large_m(&profile, 2, 1000.0).unwrap());
        assert_eq!(t, snr_sweep(&cfg, &Sequential).unwrap());
    }

    #[test]
    fn waterfill_rows_have_nonnegative_gap() {
        let cfg = flat_cfg(3, SnrGrid::new(0.0, 20.0, 10.0).unwrap(), EstimatorKind::WaterfillCompare);
        let t = snr_sweep(&cfg, &Sequential).unwrap();
        assert_eq!(t.extra_columns.len(), 4);
        for r in &t.rows {
            assert!(r.extra[2] > 0.0);
            assert!((r.extra[0] - r.mean - r.extra[2]).abs() < 1e-12);
        }
    }
}
