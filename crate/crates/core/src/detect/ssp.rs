use alloc::vec;
use alloc::vec::Vec;

use super::{fit_support, top_indices, total_energy, DetectionResult, Diagnostics, GmmvInstance};
use crate::linalg::dot_conj;
use crate::{Error, Result};

/// Structured subspace pursuit.
///
/// Runs exactly `N_a` iterations of:
///
/// 1. correlate every slot's residual with its channel, `a^(t) = H'^(t)* r^(t)`;
/// 2. pick the candidate indices with the largest `Σ_t |a_l^(t)|²`:
///    `min(2N_a, N_r)` of them in the first iteration, `min(N_a, N_r − N_a)`
///    afterwards, considering only antennas that occur in some legal pattern;
/// 3. merge them with the current support and solve least squares per slot;
/// 4. prune to the legal pattern maximizing `Σ_t ‖b_Ω^(t)‖²` (indices outside
///    the merged set count as zero);
/// 5. re-solve least squares on that pattern and update the residuals.
///
/// Ties are resolved toward the lowest index / lowest pattern.
pub fn ssp_detect(inst: &GmmvInstance<'_>) -> Result<DetectionResult> {
    let (n_r, n_t, n_a) = (inst.n_r(), inst.n_t(), inst.n_a());
    if n_r < n_a + 1 {
        return Err(Error::Parameter("structured subspace pursuit needs N_r >= N_a + 1"));
    }
    let spatial = inst.spatial;

    let mut support: Vec<usize> = Vec::new();
    let mut pattern = 0;
    let mut residuals = inst.received.clone();
    let mut estimates: Vec<Vec<_>> = vec![Vec::new(); inst.group_size()];
    let mut diag = Diagnostics::default();
    let mut score = vec![0.0; n_t];
    let mut weight = vec![0.0; n_t];

    for k in 1..=n_a {
        score.iter_mut().for_each(|s| *s = 0.0);
        for (r, h) in residuals.iter().zip(&inst.channels) {
            for (l, s) in score.iter_mut().enumerate() {
                *s += dot_conj(h.col(l), r).norm_sqr();
            }
        }

        let take = if k == 1 { (2 * n_a).min(n_r) } else { n_a.min(n_r - n_a) };
        let candidates = top_indices(&score, (0..n_t).filter(|&l| spatial.is_usable(l)), take);

        let mut merged = support.clone();
        merged.extend(candidates);
        merged.sort_unstable();
        merged.dedup();

        let wide = fit_support(inst, &merged);
        diag.ls_flops += wide.flops;
        diag.rank_deficient |= wide.rank_deficient;
        weight.iter_mut().for_each(|w| *w = 0.0);
        for b in &wide.coefficients {
            for (&i, z) in merged.iter().zip(b) {
                weight[i] += z.norm_sqr();
            }
        }

        pattern = spatial.best_pattern(&weight);
        support = spatial.pattern(pattern).to_vec();

        let narrow = fit_support(inst, &support);
        diag.ls_flops += narrow.flops;
        diag.final_ls_flops = narrow.flops;
        diag.rank_deficient |= narrow.rank_deficient;
        diag.residual_norms.push(total_energy(&narrow.residuals));
        residuals = narrow.residuals;
        estimates = narrow.coefficients;
    }

    Ok(DetectionResult::finish(inst, pattern, estimates, diag))
}
