use alloc::vec;
use alloc::vec::Vec;

use super::{DetectionResult, Diagnostics, GmmvInstance};
use crate::linalg::{dot_conj, least_squares, CMatrix};
use crate::{Error, Result, C64};

/// Linear MMSE equalization followed by a pattern decision.
///
/// Each slot is equalized as `x̃ = H'* (H'H'* + σ_w² I)⁻¹ y`. The pattern is
/// the legal one with the most equalized energy `Σ_t Σ_{i∈Ω} |x̃_i|²`, and
/// the symbols are the equalized values on it. A singular regularized Gram
/// matrix (only possible for `σ_w² = 0`) is handled by a minimum-norm solve.
pub fn lmmse_detect(inst: &GmmvInstance<'_>, noise_variance: f64) -> Result<DetectionResult> {
    if !(noise_variance >= 0.0) {
        return Err(Error::Parameter("noise variance must be non-negative"));
    }
    let (n_r, n_t) = (inst.n_r(), inst.n_t());
    let mut diag = Diagnostics::default();
    let mut energy = vec![0.0; n_t];
    let mut equalized = Vec::with_capacity(inst.group_size());
    for (y, h) in inst.received.iter().zip(&inst.channels) {
        let mut gram = CMatrix::from_fn(n_r, n_r, |i, j| {
            (0..n_t).map(|l| h.get(i, l) * h.get(j, l).conj()).sum::<C64>()
        });
        for i in 0..n_r {
            gram.set(i, i, gram.get(i, i) + noise_variance);
        }
        let ls = least_squares(&gram, y);
        diag.ls_flops += ls.flops;
        diag.rank_deficient |= ls.is_rank_deficient();
        let x: Vec<C64> = (0..n_t).map(|l| dot_conj(h.col(l), &ls.solution)).collect();
        for (e, z) in energy.iter_mut().zip(&x) {
            *e += z.norm_sqr();
        }
        equalized.push(x);
    }
    let pattern = inst.spatial.best_pattern(&energy);
    let support = inst.spatial.pattern(pattern);
    let estimates = equalized.iter().map(|x| support.iter().map(|&i| x[i]).collect()).collect();
    Ok(DetectionResult::finish(inst, pattern, estimates, diag))
}
