//! Desk-scale presets for the figure replicas.

use smcs_core::constellation::Scheme;

use crate::config::{fnv1a, DetectorKind, ExperimentConfig};
use crate::plot::FigureId;
use crate::sweep::{run_sweep, SweepError, SweepResult};

/// One series of a figure: a label and the single-detector config behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub label: String,
    pub config: ExperimentConfig,
}

fn base(n_t: usize, n_r: usize, n_a: usize, m: usize, g: usize, r: f64, snr: &[f64]) -> ExperimentConfig {
    ExperimentConfig {
        n_t,
        n_r,
        n_a,
        m,
        scheme: Scheme::Psk,
        group_size: g,
        r_t: r,
        r_r: r,
        snr_db: snr.to_vec(),
        trials: 2000,
        ..ExperimentConfig::default()
    }
}

fn series(label: &str, mut config: ExperimentConfig, kind: DetectorKind) -> FigureSeries {
    config.detectors = vec![kind];
    FigureSeries { label: label.into(), config }
}

fn range(start: f64, step: f64, stop: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// The series of `fig` with default trial counts and SNR grid.
pub fn preset(fig: FigureId) -> Vec<FigureSeries> {
    use DetectorKind::*;
    match fig {
        FigureId::Fig3 | FigureId::Fig4 => {
            let r = if fig == FigureId::Fig3 { 0.0 } else { 0.4 };
            let cfg = base(64, 16, 1, 8, 4, r, &range(-10.0, 2.5, 10.0));
            let kinds: &[DetectorKind] = if fig == FigureId::Fig3 {
                &[Sp, SspNoninterleaved, Ssp, SspIidChannels, AnalyticGmmv]
            } else {
                &[Lmmse, NcsOmp, SspNoninterleaved, Ssp, SspIidChannels]
            };
            kinds.iter().map(|&k| series(k.name(), cfg.clone(), k)).collect()
        }
        FigureId::Fig5 => {
            let snr = range(0.0, 4.0, 24.0);
            vec![
                series("ncs_omp[7bpcu]", base(64, 16, 1, 2, 1, 0.4, &snr), NcsOmp),
                series("ncs_omp[11bpcu]", base(65, 16, 2, 1, 1, 0.4, &snr), NcsOmp),
                series("ssp[9.5bpcu]", base(65, 16, 2, 4, 2, 0.4, &snr), Ssp),
                series("ssp[11.5bpcu]", base(65, 16, 2, 8, 2, 0.4, &snr), Ssp),
            ]
        }
        FigureId::Fig6 => {
            let snr = range(0.0, 5.0, 30.0);
            let mut out = vec![series("ncs_omp", base(65, 3, 2, 8, 1, 0.4, &snr), NcsOmp)];
            for g in [1, 2, 4] {
                out.push(series(&format!("ssp[G={g}]"), base(65, 3, 2, 8, g, 0.4, &snr), Ssp));
            }
            out
        }
        FigureId::Fig7 => {
            let snr = range(0.0, 2.0, 16.0);
            let mut out: Vec<FigureSeries> = (1..=3)
                .map(|g| series(&format!("ssp[G={g}]"), base(65, 16, 2, 8, g, 0.4, &snr), Ssp))
                .collect();
            out.push(series("ml[G=3]", base(65, 16, 2, 8, 3, 0.4, &snr), Ml));
            out
        }
    }
}

/// Runs every series of `fig` after applying `adjust` to each config and
/// relabels the records with the series labels.
pub fn run_figure(fig: FigureId, adjust: impl Fn(&mut ExperimentConfig)) -> Result<SweepResult, SweepError> {
    let mut out = SweepResult { config_hash: String::new(), records: Vec::new(), refusals: Vec::new() };
    let mut hashes = String::new();
    for mut s in preset(fig) {
        adjust(&mut s.config);
        let res = run_sweep(&s.config)?;
        hashes.push_str(&res.config_hash);
        out.records.extend(res.records.into_iter().map(|mut r| {
            r.detector = s.label.clone();
            r
        }));
        out.refusals.extend(res.refusals.into_iter().map(|mut r| {
            r.detector = s.label.clone();
            r
        }));
    }
    out.config_hash = format!("{:016x}", fnv1a(hashes.as_bytes()));
    out.sort();
    Ok(out)
}
