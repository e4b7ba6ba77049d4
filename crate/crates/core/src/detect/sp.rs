use alloc::vec;
use alloc::vec::Vec;

use super::{fit_support, majority_pattern, top_indices, total_energy, DetectionResult, Diagnostics, GmmvInstance};
use crate::linalg::dot_conj;
use crate::{Error, Result};

/// Classical subspace pursuit, one slot at a time.
///
/// Unlike [`super::ssp_detect`] it knows nothing about the legal patterns:
/// candidates and pruning use plain top-`k` index selection. The final
/// support is mapped onto the legal pattern with the largest overlap. It uses
/// the same fixed `N_a` iterations. With `G > 1` each slot is solved alone
/// and the pattern is decided by majority vote.
pub fn sp_detect(inst: &GmmvInstance<'_>) -> Result<DetectionResult> {
    let (n_r, n_a) = (inst.n_r(), inst.n_a());
    if n_r < n_a + 1 {
        return Err(Error::Parameter("subspace pursuit needs N_r >= N_a + 1"));
    }
    let mut diag = Diagnostics::default();
    let mut votes = Vec::with_capacity(inst.group_size());
    for t in 0..inst.group_size() {
        let slot = inst.slot(t);
        let support = single_slot(&slot, &mut diag);
        votes.push(inst.spatial.nearest_pattern(&support));
    }
    let pattern = majority_pattern(&votes);
    let fit = fit_support(inst, inst.spatial.pattern(pattern));
    diag.ls_flops += fit.flops;
    diag.final_ls_flops = fit.flops;
    diag.rank_deficient |= fit.rank_deficient;
    diag.residual_norms.push(total_energy(&fit.residuals));
    Ok(DetectionResult::finish(inst, pattern, fit.coefficients, diag))
}

fn single_slot(inst: &GmmvInstance<'_>, diag: &mut Diagnostics) -> Vec<usize> {
    let (n_r, n_t, n_a) = (inst.n_r(), inst.n_t(), inst.n_a());
    let h = &inst.channels[0];
    let mut residual = inst.received[0].clone();
    let mut support: Vec<usize> = Vec::new();
    let mut score = vec![0.0; n_t];
    for k in 1..=n_a {
        for (l, s) in score.iter_mut().enumerate() {
            *s = dot_conj(h.col(l), &residual).norm_sqr();
        }
        let take = if k == 1 { (2 * n_a).min(n_r) } else { n_a.min(n_r - n_a) };
        let mut merged = support.clone();
        merged.extend(top_indices(&score, 0..n_t, take));
        merged.sort_unstable();
        merged.dedup();

        let wide = fit_support(inst, &merged);
        diag.ls_flops += wide.flops;
        diag.rank_deficient |= wide.rank_deficient;
        let mut weight = vec![0.0; n_t];
        for (&i, z) in merged.iter().zip(&wide.coefficients[0]) {
            weight[i] = z.norm_sqr();
        }
        support = top_indices(&weight, merged.iter().copied(), n_a);
        support.sort_unstable();

        let narrow = fit_support(inst, &support);
        diag.ls_flops += narrow.flops;
        diag.rank_deficient |= narrow.rank_deficient;
        residual = narrow.residuals.into_iter().next().unwrap_or_default();
    }
    support
}
