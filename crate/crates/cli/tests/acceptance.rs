//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};

use mimo_capacity::parallel::RayonRunner;
use mimo_capacity_core::capacity::{
    asymptotic_large_m, capacity_csit, corr_model_mi, instant_capacity_flat, ofdm_mi_uniform,
    per_tone_mi_uniform,
};
use mimo_capacity_core::channel::{
    exp_decay_tap_powers, sample_iid_cgaussian, sample_tap_channel, AntennaConfig,
    CorrelationKind, CorrelationProfile, ToneGrid,
};
use mimo_capacity_core::estimate::{ergodic_estimate, CapacityEstimate};
use mimo_capacity_core::linalg::{gram, herm_eigvals, logdet2_id_plus, DEFAULT_ZERO_TOL};
use mimo_capacity_core::rng::RngStream;
use mimo_capacity_core::snr::SnrSpec;
use mimo_capacity_core::sweep::{
    snr_sweep, ChannelSpec, EstimatorKind, SnrGrid, SweepConfig, SweepTable,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn runner() -> RayonRunner {
    RayonRunner::new(None).expect("thread pool")
}

fn flat_sweep(n: usize, grid: SnrGrid, trials: u64, seed: u64, estimator: EstimatorKind) -> SweepTable {
    let cfg = SweepConfig {
        antennas: AntennaConfig::square(n).unwrap(),
        snr: grid,
        trials,
        seed,
        channel: ChannelSpec::Flat,
        estimator,
    };
    snr_sweep(&cfg, &runner()).unwrap()
}

fn exponential(coefficient: f64, taps: usize) -> CorrelationProfile {
    CorrelationProfile::new(CorrelationKind::Exponential { coefficient }, exp_decay_tap_powers(taps, 0.5))
        .unwrap()
}

/// `e·E₁(1)/ln 2` from the power series of the exponential integral.
fn siso_reference() -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let (mut term, mut series) = (1.0f64, 0.0f64);
    for k in 1..40 {
        term *= -1.0 / k as f64;
        series += term / k as f64;
    }
    let e1 = -EULER_GAMMA - series;
    std::f64::consts::E * e1 / std::f64::consts::LN_2
}

fn high_snr_slope() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for m in [1usize, 2, 4] {
        let t = flat_sweep(m, SnrGrid::new(30.0, 36.0, 6.0).unwrap(), 10_000, 11, EstimatorKind::Ergodic);
        let slope = (t.rows[1].mean - t.rows[0].mean) / 2.0;
        ok &= (slope - m as f64).abs() <= 0.12 * m as f64;
        parts.push(format!("M={m}: {slope:.4} b/Hz per 3 dB"));
    }
    check(ok, parts.join(", "))
}

fn ergodic_ordering() -> Outcome {
    let grid = SnrGrid::new(0.0, 20.0, 2.0).unwrap();
    let curves: Vec<SweepTable> =
        [1usize, 2, 4].iter().map(|&m| flat_sweep(m, grid, 10_000, 5, EstimatorKind::Ergodic)).collect();
    let separated = |a: &CapacityEstimate, b: &CapacityEstimate| {
        b.mean - a.mean >= 2.0 * (a.std_error.powi(2) + b.std_error.powi(2)).sqrt()
    };
    let est = |t: &SweepTable, i: usize| CapacityEstimate {
        mean: t.rows[i].mean,
        std_error: t.rows[i].std_error,
        trials: t.rows[i].trials,
    };
    let mut min_margin = f64::INFINITY;
    let mut ok = true;
    for c in &curves {
        for i in 1..c.rows.len() {
            ok &= c.rows[i].mean > c.rows[i - 1].mean;
        }
    }
    for i in 0..curves[0].rows.len() {
        for pair in curves.windows(2) {
            let (a, b) = (est(&pair[0], i), est(&pair[1], i));
            ok &= separated(&a, &b);
            let margin = (b.mean - a.mean) / (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
            min_margin = min_margin.min(margin);
        }
    }
    check(ok, format!("11 points x 3 curves, smallest separation {min_margin:.1} combined SE"))
}

fn waterfill_dominance() -> Outcome {
    let cfg = AntennaConfig::square(4).unwrap();
    let points = SnrGrid::new(0.0, 30.0, 3.0).unwrap().points();
    let mut worst = f64::INFINITY;
    let mut gap_sum = vec![0.0; points.len()];
    for k in 0..1000 {
        let h = sample_iid_cgaussian(cfg, &mut RngStream::new(2024, k));
        for (i, &db) in points.iter().enumerate() {
            let snr = SnrSpec::from_db(db);
            let gap = capacity_csit(&h, snr.rho(), 1.0).unwrap() - instant_capacity_flat(&h, snr, 4).unwrap();
            worst = worst.min(gap);
            gap_sum[i] += gap;
        }
    }
    let (g0, g30) = (gap_sum[0] / 1000.0, gap_sum[points.len() - 1] / 1000.0);
    check(
        worst >= -1e-9 && g0 > g30,
        format!("min gap {worst:.3e}, mean gap {g0:.4} at 0 dB vs {g30:.4} at 30 dB"),
    )
}

fn siso_mean() -> Outcome {
    let reference = siso_reference();
    let t = flat_sweep(1, SnrGrid::single(0.0).unwrap(), 100_000, 1, EstimatorKind::Ergodic);
    let r = &t.rows[0];
    let z = (r.mean - reference).abs() / r.std_error;
    check(z <= 3.0, format!("{:.6} ± {:.6} vs {reference:.6} ({z:.2} SE)", r.mean, r.std_error))
}

fn low_snr_profile_insensitivity() -> Outcome {
    let (n, rho_bar) = (4usize, 1e-3);
    let one = asymptotic_large_m(&exponential(0.7, 1), n, rho_bar).unwrap();
    let four = asymptotic_large_m(&exponential(0.7, 4), n, rho_bar).unwrap();
    let trace_form = (1.0 + rho_bar * n as f64).log2();
    let rel = (one - four).abs() / one;
    let (e1, e4) = ((one - trace_form).abs() / trace_form, (four - trace_form).abs() / trace_form);
    check(
        rel < 0.01 && e1 < 0.005 && e4 < 0.005,
        format!("L=1 {one:.6e}, L=4 {four:.6e}, log2(1+ρ̄N) {trace_form:.6e}, off by {:.3}%/{:.3}%", e1 * 100.0, e4 * 100.0),
    )
}

fn large_array_convergence() -> Outcome {
    let (m, n, rho_bar) = (64usize, 2usize, 10.0);
    let profile = exponential(0.6, 3);
    let cfg = AntennaConfig::new(m, n).unwrap();
    let snr = SnrSpec::from_linear(rho_bar / m as f64);
    let est = ergodic_estimate(
        &runner(),
        1000,
        99,
        |s| sample_iid_cgaussian(cfg, s),
        |h| corr_model_mi(&profile, h, snr),
    )
    .unwrap();
    let limit = asymptotic_large_m(&profile, n, rho_bar).unwrap();
    let rel = (est.mean - limit).abs() / limit;
    check(rel < 0.02, format!("Monte Carlo {:.4} vs limit {limit:.4} ({:.2}%)", est.mean, rel * 100.0))
}

fn single_tap_ofdm() -> Outcome {
    let profile = exponential(0.5, 1);
    let cfg = AntennaConfig::new(3, 2).unwrap();
    let grid = ToneGrid::new(64).unwrap();
    let rho = 0.8;
    let (mut spread, mut diff) = (0.0f64, 0.0f64);
    for k in 0..20 {
        let taps = sample_tap_channel(&profile, cfg, &mut RngStream::new(8, k)).unwrap();
        let tones = per_tone_mi_uniform(&taps, grid, SnrSpec::from_linear(rho)).unwrap();
        let (lo, hi) = tones.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        spread = spread.max(hi - lo);
        let ofdm = ofdm_mi_uniform(&taps, grid, SnrSpec::from_linear(rho)).unwrap();
        let flat = instant_capacity_flat(&taps.taps()[0], SnrSpec::from_linear(3.0 * rho), 3).unwrap();
        diff = diff.max((ofdm - flat).abs());
    }
    check(spread <= 1e-12 && diff <= 1e-12, format!("tone spread {spread:.2e}, OFDM vs flat {diff:.2e}"))
}

fn outage_ordering() -> Outcome {
    let values: Vec<f64> = [1usize, 2, 4]
        .iter()
        .map(|&m| {
            let t = flat_sweep(m, SnrGrid::single(10.0).unwrap(), 100_000, 3, EstimatorKind::Outage { percent: 10.0 });
            t.rows[0].extra[1]
        })
        .collect();
    check(
        values[0] < values[1] && values[1] < values[2],
        format!("C_10% = {:.4}, {:.4}, {:.4}", values[0], values[1], values[2]),
    )
}

fn logdet_vs_eigen_sum() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let side = 1 + (k % 8) as usize;
        let inner = 1 + ((k / 8) % 8) as usize;
        let mut s = RngStream::new(77, k);
        let scale = 100.0 * s.next_open_uniform();
        let a = gram(&sample_iid_cgaussian(AntennaConfig::new(inner, side).unwrap(), &mut s));
        let eigs = herm_eigvals(&a, DEFAULT_ZERO_TOL).unwrap();
        let expect: f64 = eigs.values().iter().map(|l| (1.0 + scale * l).log2()).sum();
        worst = worst.max((logdet2_id_plus(&a, scale).unwrap() - expect).abs());
    }
    check(worst <= 1e-9, format!("max |difference| {worst:.2e}"))
}

fn worker_invariance() -> Outcome {
    let run = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_mimo-capacity"))
            .args(["ofdm", "--tx", "2", "--rx", "2", "--taps", "3", "--corr", "0.5", "--tones", "16"])
            .args(["--snr-db", "0:20:5", "--trials", "2000", "--seed", "13", "--percent", "10", "--workers", workers])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        Ok(out.stdout)
    };
    let outputs = ["1", "2", "4", "8"].iter().map(|w| run(w)).collect::<Result<Vec<_>, _>>()?;
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    check(same, format!("workers 1/2/4/8, {} bytes each", outputs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("high-SNR slope tracks min(M,N)", high_snr_slope),
        ("ergodic curves increase and order by array size", ergodic_ordering),
        ("water-filling dominates uniform allocation", waterfill_dominance),
        ("SISO Rayleigh mean matches quadrature", siso_mean),
        ("low-SNR limit insensitive to tap profile", low_snr_profile_insensitivity),
        ("large-array Monte Carlo approaches the limit", large_array_convergence),
        ("single-tap OFDM reduces to flat fading", single_tap_ofdm),
        ("outage capacity grows with array size", outage_ordering),
        ("log-det agrees with eigenvalue sum", logdet_vs_eigen_sum),
        ("CSV identical across worker counts", worker_invariance),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{:>2}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
