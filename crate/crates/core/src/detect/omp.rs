use alloc::vec::Vec;

use super::{fit_support, majority_pattern, total_energy, DetectionResult, Diagnostics, GmmvInstance};
use crate::linalg::{dot_conj, norm_sqr};
use crate::Result;

/// Normalized-channel orthogonal matching pursuit (the conventional CS
/// detector).
///
/// Channel columns are normalized to unit norm for atom selection; `N_a`
/// atoms are picked greedily with a least-squares refit after each pick. The
/// picked set is mapped to the legal pattern with the largest overlap (ties
/// to the lowest pattern) and the amplitudes are re-fitted on it. With
/// `G > 1` every slot is processed independently and the pattern is decided
/// by majority vote.
pub fn ncs_omp_detect(inst: &GmmvInstance<'_>) -> Result<DetectionResult> {
    let mut diag = Diagnostics::default();
    let mut votes = Vec::with_capacity(inst.group_size());
    for t in 0..inst.group_size() {
        let slot = inst.slot(t);
        let picked = greedy_atoms(&slot, &mut diag);
        votes.push(inst.spatial.nearest_pattern(&picked));
    }
    let pattern = majority_pattern(&votes);
    let fit = fit_support(inst, inst.spatial.pattern(pattern));
    diag.ls_flops += fit.flops;
    diag.final_ls_flops = fit.flops;
    diag.rank_deficient |= fit.rank_deficient;
    diag.residual_norms.push(total_energy(&fit.residuals));
    Ok(DetectionResult::finish(inst, pattern, fit.coefficients, diag))
}

fn greedy_atoms(inst: &GmmvInstance<'_>, diag: &mut Diagnostics) -> Vec<usize> {
    let h = &inst.channels[0];
    let inv_norm: Vec<f64> = (0..inst.n_t())
        .map(|l| {
            let n = norm_sqr(h.col(l));
            if n > 0.0 { 1.0 / libm::sqrt(n) } else { 0.0 }
        })
        .collect();
    let mut residual = inst.received[0].clone();
    let mut picked: Vec<usize> = Vec::with_capacity(inst.n_a());
    for _ in 0..inst.n_a() {
        let mut best = None;
        let mut best_score = f64::NEG_INFINITY;
        for l in (0..inst.n_t()).filter(|l| !picked.contains(l)) {
            let s = dot_conj(h.col(l), &residual).norm() * inv_norm[l];
            if s > best_score {
                best = Some(l);
                best_score = s;
            }
        }
        let Some(l) = best else { break };
        picked.push(l);
        let fit = fit_support(inst, &picked);
        diag.ls_flops += fit.flops;
        diag.rank_deficient |= fit.rank_deficient;
        residual = fit.residuals.into_iter().next().unwrap_or_default();
    }
    picked.sort_unstable();
    picked
}
