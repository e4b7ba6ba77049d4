//! Detectors for grouped SM transmission.
//!
//! All detectors consume a [`GmmvInstance`]: `G` received vectors `y^(t)`
//! and their effective (deinterleaved) channels `H'^(t)`, with the common
//! support expressed in the logical antenna domain. `G = 1` is ordinary
//! single-slot SM detection; identical `H'^(t)` give the MMV problem and
//! distinct ones the generalized MMV problem.

use alloc::vec::Vec;

use crate::constellation::{SignalConstellation, SpatialConstellation};
use crate::interleave::{group_bits, TransmissionGroup};
use crate::linalg::{least_squares, norm_sqr, CMatrix};
use crate::{Error, Result, C64};

mod lmmse;
mod ml;
mod omp;
mod sp;
mod ssp;

pub use lmmse::lmmse_detect;
pub use ml::{ml_detect, MlBudget};
pub use omp::ncs_omp_detect;
pub use sp::sp_detect;
pub use ssp::ssp_detect;

/// Received data of one transmission group, ready for detection.
#[derive(Debug, Clone)]
pub struct GmmvInstance<'a> {
    pub received: Vec<Vec<C64>>,
    /// `H'^(t)`, one per slot.
    pub channels: Vec<CMatrix>,
    pub spatial: &'a SpatialConstellation,
    pub signal: &'a SignalConstellation,
}

impl<'a> GmmvInstance<'a> {
    pub fn new(
        received: Vec<Vec<C64>>,
        channels: Vec<CMatrix>,
        spatial: &'a SpatialConstellation,
        signal: &'a SignalConstellation,
    ) -> Result<Self> {
        if received.is_empty() || received.len() != channels.len() {
            return Err(Error::Dimension("need one channel per received vector and G >= 1"));
        }
        let n_r = received[0].len();
        for (y, h) in received.iter().zip(&channels) {
            if y.len() != n_r || h.rows() != n_r || h.cols() != spatial.n_t() {
                return Err(Error::Dimension("every H' must be N_r x N_t and every y of length N_r"));
            }
        }
        Ok(Self { received, channels, spatial, signal })
    }

    /// Instance seen by the receiver of `group`.
    pub fn from_group(
        group: &TransmissionGroup,
        spatial: &'a SpatialConstellation,
        signal: &'a SignalConstellation,
    ) -> Result<Self> {
        Self::new(group.received.clone(), group.effective_channels(), spatial, signal)
    }

    pub fn group_size(&self) -> usize {
        self.received.len()
    }

    pub fn n_r(&self) -> usize {
        self.received[0].len()
    }

    pub fn n_t(&self) -> usize {
        self.spatial.n_t()
    }

    pub fn n_a(&self) -> usize {
        self.spatial.n_a()
    }

    /// Single-slot view of slot `t`.
    pub fn slot(&self, t: usize) -> GmmvInstance<'a> {
        GmmvInstance {
            received: alloc::vec![self.received[t].clone()],
            channels: alloc::vec![self.channels[t].clone()],
            spatial: self.spatial,
            signal: self.signal,
        }
    }

    /// `Σ_t ‖y^(t) − H'^(t)_Ω s^(t)‖²` for a support and per-slot amplitudes.
    pub fn objective(&self, support: &[usize], amplitudes: &[Vec<C64>]) -> f64 {
        self.received
            .iter()
            .zip(&self.channels)
            .zip(amplitudes)
            .map(|((y, h), s)| {
                let fit = h.select_columns(support).mul_vec(s);
                y.iter().zip(&fit).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>()
            })
            .sum()
    }
}

/// Per-run diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// `Σ_t ‖r^(t)‖²` after each iteration (or the final objective for
    /// non-iterative detectors).
    pub residual_norms: Vec<f64>,
    /// Some least-squares subproblem was solved in the minimum-norm sense.
    pub rank_deficient: bool,
    /// Complex multiply-accumulates spent in all least-squares solves.
    pub ls_flops: u64,
    /// The part of `ls_flops` spent re-solving on the final `N_a`-column
    /// support (one solve per slot).
    pub final_ls_flops: u64,
}

/// Output of a detector.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// Index of the detected pattern in the spatial constellation.
    pub pattern: usize,
    /// Detected active antennas, ascending.
    pub support: Vec<usize>,
    /// Rough (unquantized) amplitudes per slot, in support order.
    pub estimates: Vec<Vec<C64>>,
    /// Quantized constellation indices per slot, in support order.
    pub symbols: Vec<Vec<usize>>,
    /// Detected group bit word.
    pub bits: Vec<bool>,
    pub diagnostics: Diagnostics,
}

impl DetectionResult {
    /// Assembles a result from a pattern and rough amplitudes, quantizing
    /// each amplitude to its nearest constellation point.
    pub(crate) fn finish(inst: &GmmvInstance<'_>, pattern: usize, estimates: Vec<Vec<C64>>, diagnostics: Diagnostics) -> Self {
        let symbols: Vec<Vec<usize>> =
            estimates.iter().map(|slot| slot.iter().map(|&z| inst.signal.nearest(z)).collect()).collect();
        let bits = group_bits(inst.spatial, inst.signal, pattern, &symbols);
        Self { pattern, support: inst.spatial.pattern(pattern).to_vec(), estimates, symbols, bits, diagnostics }
    }

    /// Full-length estimate `x̂^(t)`.
    pub fn x_hat(&self, slot: usize, n_t: usize) -> Vec<C64> {
        let mut x = alloc::vec![C64::new(0.0, 0.0); n_t];
        for (&i, &v) in self.support.iter().zip(&self.estimates[slot]) {
            x[i] = v;
        }
        x
    }

    /// Quantized amplitudes per slot.
    pub fn decided_amplitudes(&self, signal: &SignalConstellation) -> Vec<Vec<C64>> {
        self.symbols.iter().map(|s| s.iter().map(|&k| signal.point(k)).collect()).collect()
    }
}

/// Least squares of every slot on a common column set; returns the
/// per-slot coefficients and residuals.
pub(crate) struct SlotFit {
    pub coefficients: Vec<Vec<C64>>,
    pub residuals: Vec<Vec<C64>>,
    pub flops: u64,
    pub rank_deficient: bool,
}

pub(crate) fn fit_support(inst: &GmmvInstance<'_>, columns: &[usize]) -> SlotFit {
    let mut fit = SlotFit {
        coefficients: Vec::with_capacity(inst.group_size()),
        residuals: Vec::with_capacity(inst.group_size()),
        flops: 0,
        rank_deficient: false,
    };
    for (y, h) in inst.received.iter().zip(&inst.channels) {
        let sub = h.select_columns(columns);
        let ls = least_squares(&sub, y);
        let approx = sub.mul_vec(&ls.solution);
        fit.residuals.push(y.iter().zip(&approx).map(|(a, b)| a - b).collect());
        fit.flops += ls.flops;
        fit.rank_deficient |= ls.is_rank_deficient();
        fit.coefficients.push(ls.solution);
    }
    fit
}

pub(crate) fn total_energy(vectors: &[Vec<C64>]) -> f64 {
    vectors.iter().map(|v| norm_sqr(v)).sum()
}

/// Indices ordered by descending score, ties by ascending index; only the
/// first `k` are kept.
pub(crate) fn top_indices(score: &[f64], candidates: impl Iterator<Item = usize>, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = candidates.collect();
    idx.sort_by(|&a, &b| score[b].total_cmp(&score[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Most frequent pattern; ties go to the lowest pattern index.
pub(crate) fn majority_pattern(patterns: &[usize]) -> usize {
    let mut sorted = patterns.to_vec();
    sorted.sort_unstable();
    let mut best = sorted[0];
    let mut best_count = 0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&p| p == sorted[i]).count();
        if j > best_count {
            best = sorted[i];
            best_count = j;
        }
        i += j;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_indices_breaks_ties_low() {
        let s = [1.0, 3.0, 3.0, 0.5, 3.0];
        assert_eq!(top_indices(&s, 0..5, 2), [1, 2]);
        assert_eq!(top_indices(&s, [0, 3, 4].into_iter(), 2), [4, 0]);
    }

    #[test]
    fn majority_vote() {
        assert_eq!(majority_pattern(&[3, 1, 3, 1]), 1);
        assert_eq!(majority_pattern(&[5, 2, 5]), 5);
        assert_eq!(majority_pattern(&[7]), 7);
    }
}
