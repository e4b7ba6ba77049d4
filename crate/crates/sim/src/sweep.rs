//! Deterministic Monte Carlo sweeps.
//!
//! Every trial owns an RNG derived from `(seed, snr index, trial index)`, so
//! a record does not depend on how trials are spread over workers. All
//! simulated detectors at one SNR see the same channel draw, bits and noise
//! stream for a given trial index (the grouped ones see more slots).
//! Trials run in fixed-size batches; outcomes are tallied in trial order and
//! a point stops at the first trial that reaches `max_errors` spatial errors.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smcs_core::analysis::{scser_analytic, scser_gaussian_approx, AnalyticParams, Recovery};
use smcs_core::channel::{ChannelModel, CorrelationSpec};
use smcs_core::constellation::{SignalConstellation, SpatialConstellation};
use smcs_core::detect::{
    lmmse_detect, ml_detect, ncs_omp_detect, sp_detect, ssp_detect, DetectionResult, GmmvInstance, MlBudget,
};
use smcs_core::interleave::{encode_group, group_word_len, make_schedule, PermutationSchedule, TransmissionGroup};
use smcs_core::seed;
use thiserror::Error;

use crate::config::{ConfigError, DetectorKind, ExperimentConfig};

/// Trials evaluated between early-stop checks.
pub const BATCH: u64 = 256;

/// One `(detector, SNR)` measurement. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub detector: String,
    pub snr_db: f64,
    pub trials: u64,
    pub spatial_errors: u64,
    pub scser: f64,
    pub bit_errors: u64,
    pub total_bits: u64,
    pub ber: f64,
    pub seed: u64,
    pub wall_seconds: f64,
}

impl SweepRecord {
    /// Monte Carlo standard error of `scser`.
    pub fn scser_std_error(&self) -> f64 {
        binomial_std_error(self.scser, self.trials)
    }

    /// Standard error of `ber`, treating groups as the independent unit.
    pub fn ber_std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let per_group = self.total_bits as f64 / self.trials as f64;
        let p = self.ber;
        (p * (1.0 - p) * per_group / self.total_bits as f64).sqrt()
    }

    /// The detector name without any `[...]` tag.
    pub fn base_detector(&self) -> &str {
        self.detector.split('[').next().unwrap_or(&self.detector)
    }
}

pub fn binomial_std_error(p: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

/// A point the harness declined to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refusal {
    pub detector: String,
    pub snr_db: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config_hash: String,
    pub records: Vec<SweepRecord>,
    pub refusals: Vec<Refusal>,
}

impl SweepResult {
    pub fn record(&self, detector: &str, snr_db: f64) -> Option<&SweepRecord> {
        self.records.iter().find(|r| r.detector == detector && r.snr_db == snr_db)
    }

    /// Records of one detector in SNR order.
    pub fn series(&self, detector: &str) -> Vec<&SweepRecord> {
        self.records.iter().filter(|r| r.detector == detector).collect()
    }

    /// Sorts records by detector label, then SNR.
    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| a.detector.cmp(&b.detector).then(a.snr_db.total_cmp(&b.snr_db)));
        self.refusals.sort_by(|a, b| a.detector.cmp(&b.detector).then(a.snr_db.total_cmp(&b.snr_db)));
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Static link description shared by every trial.
pub struct Link {
    pub spatial: SpatialConstellation,
    pub signal: SignalConstellation,
    pub model: ChannelModel,
}

impl Link {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, ConfigError> {
        let err = |e: smcs_core::Error| ConfigError::Invalid(e.to_string());
        Ok(Self {
            spatial: cfg.spatial().map_err(err)?,
            signal: cfg.signal().map_err(err)?,
            model: ChannelModel::new(cfg.n_r, cfg.n_t, CorrelationSpec::new(cfg.r_t, cfg.r_r).map_err(err)?)
                .map_err(err)?,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Outcome {
    pub spatial_error: bool,
    pub bit_errors: u64,
    pub bits: u64,
}

/// Builds the transmission of trial `trial` at SNR index `snr_index` as seen
/// by `kind`.
pub fn trial_group(
    cfg: &ExperimentConfig,
    link: &Link,
    kind: DetectorKind,
    snr_index: usize,
    trial: u64,
) -> smcs_core::Result<TransmissionGroup> {
    let g = kind.group_size(cfg.group_size);
    let mut rng = seed::rng_for(&[cfg.seed, snr_index as u64, trial]);
    let h = link.model.draw(&mut rng);
    let bits: Vec<bool> = (0..group_word_len(&link.spatial, &link.signal, g)).map(|_| rng.random()).collect();
    let (schedule, independent) = match kind {
        DetectorKind::Ssp | DetectorKind::Ml => (make_schedule(cfg.n_t, g, cfg.seed, trial)?, false),
        DetectorKind::SspIidChannels => (PermutationSchedule::identity(cfg.n_t, g)?, true),
        _ => (PermutationSchedule::identity(cfg.n_t, g)?, false),
    };
    let mut channels = vec![h];
    if independent {
        let mut extra = seed::rng_for(&[cfg.seed, snr_index as u64, trial, 1]);
        channels.extend((1..g).map(|_| link.model.draw(&mut extra)));
    } else {
        channels.resize(g, channels[0].clone());
    }
    let encoded = encode_group(&bits, &link.spatial, &link.signal, &schedule)?;
    let noise = cfg.noise_variance(cfg.snr_db[snr_index]);
    TransmissionGroup::transmit(encoded, schedule, channels, noise, &mut rng)
}

pub fn detect(
    cfg: &ExperimentConfig,
    kind: DetectorKind,
    inst: &GmmvInstance<'_>,
    noise_variance: f64,
) -> smcs_core::Result<DetectionResult> {
    match kind {
        DetectorKind::Ssp | DetectorKind::SspNoninterleaved | DetectorKind::SspIidChannels => ssp_detect(inst),
        DetectorKind::Sp => sp_detect(inst),
        DetectorKind::NcsOmp => ncs_omp_detect(inst),
        DetectorKind::Lmmse => lmmse_detect(inst, noise_variance),
        DetectorKind::Ml => ml_detect(inst, MlBudget(cfg.ml_budget)),
        _ => unreachable!("analytic detectors are not simulated"),
    }
}

pub fn run_trial(
    cfg: &ExperimentConfig,
    link: &Link,
    kind: DetectorKind,
    snr_index: usize,
    trial: u64,
) -> smcs_core::Result<Outcome> {
    let group = trial_group(cfg, link, kind, snr_index, trial)?;
    let inst = GmmvInstance::from_group(&group, &link.spatial, &link.signal)?;
    let res = detect(cfg, kind, &inst, cfg.noise_variance(cfg.snr_db[snr_index]))?;
    let truth = group.bits(&link.spatial, &link.signal);
    Ok(Outcome {
        spatial_error: res.pattern != group.pattern(),
        bit_errors: truth.iter().zip(&res.bits).filter(|(a, b)| a != b).count() as u64,
        bits: truth.len() as u64,
    })
}

fn simulate_point(
    cfg: &ExperimentConfig,
    link: &Link,
    kind: DetectorKind,
    snr_index: usize,
) -> smcs_core::Result<SweepRecord> {
    let start = Instant::now();
    let (mut trials, mut spatial_errors, mut bit_errors, mut total_bits) = (0u64, 0u64, 0u64, 0u64);
    'batches: while trials < cfg.trials {
        let end = (trials + BATCH).min(cfg.trials);
        let outcomes: Vec<smcs_core::Result<Outcome>> =
            (trials..end).into_par_iter().map(|t| run_trial(cfg, link, kind, snr_index, t)).collect();
        for o in outcomes {
            let o = o?;
            trials += 1;
            spatial_errors += o.spatial_error as u64;
            bit_errors += o.bit_errors;
            total_bits += o.bits;
            if cfg.max_errors > 0 && spatial_errors >= cfg.max_errors {
                break 'batches;
            }
        }
    }
    Ok(SweepRecord {
        detector: kind.name().into(),
        snr_db: cfg.snr_db[snr_index],
        trials,
        spatial_errors,
        scser: spatial_errors as f64 / trials as f64,
        bit_errors,
        total_bits,
        ber: bit_errors as f64 / total_bits as f64,
        seed: cfg.seed,
        wall_seconds: if cfg.timing { start.elapsed().as_secs_f64() } else { 0.0 },
    })
}

fn analytic_point(cfg: &ExperimentConfig, kind: DetectorKind, snr_db: f64) -> smcs_core::Result<SweepRecord> {
    let start = Instant::now();
    let params = AnalyticParams::from_snr(cfg.n_t, cfg.n_r, cfg.n_a, cfg.m, cfg.group_size, snr_db);
    let scser = match kind {
        DetectorKind::AnalyticGmmv => scser_analytic(Recovery::Gmmv, &params)?.scser,
        DetectorKind::AnalyticMmv => scser_analytic(Recovery::Mmv, &params)?.scser,
        _ => scser_gaussian_approx(Recovery::Gmmv, &params)?,
    };
    Ok(SweepRecord {
        detector: kind.name().into(),
        snr_db,
        trials: 0,
        spatial_errors: 0,
        scser,
        bit_errors: 0,
        total_bits: 0,
        ber: 0.0,
        seed: cfg.seed,
        wall_seconds: if cfg.timing { start.elapsed().as_secs_f64() } else { 0.0 },
    })
}

/// Runs every `(detector, SNR)` point of `cfg`.
///
/// Points a detector refuses (ML over budget, unsupported analysis scope,
/// too few receive antennas) become [`Refusal`]s instead of aborting.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, SweepError> {
    cfg.validate()?;
    let link = Link::new(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    let mut result = SweepResult { config_hash: cfg.hash(), records: Vec::new(), refusals: Vec::new() };
    pool.install(|| {
        for &kind in &cfg.detectors {
            for (i, &snr_db) in cfg.snr_db.iter().enumerate() {
                let point = if kind.is_analytic() {
                    analytic_point(cfg, kind, snr_db)
                } else {
                    simulate_point(cfg, &link, kind, i)
                };
                match point {
                    Ok(r) => result.records.push(r),
                    Err(e) => {
                        result.refusals.push(Refusal { detector: kind.name().into(), snr_db, reason: e.to_string() })
                    }
                }
            }
        }
    });
    result.sort();
    Ok(result)
}
