use alloc::vec;
use alloc::vec::Vec;

use super::{DetectionResult, Diagnostics, GmmvInstance};
use crate::linalg::{dot_conj, norm_sqr};
use crate::{Error, Result, C64};

/// Upper bound on the per-slot hypothesis count `M^{N_a} |𝔸|` that
/// [`ml_detect`] is allowed to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MlBudget(pub u128);

impl Default for MlBudget {
    fn default() -> Self {
        Self(1 << 22)
    }
}

/// Exhaustive maximum-likelihood detection.
///
/// Minimizes `Σ_t ‖y^(t) − H'^(t) x^(t)‖²` over every legal pattern shared by
/// the group and every per-slot symbol vector in `𝔹^{N_a}`. Given the
/// pattern the slots decouple, so each slot's symbols are searched
/// separately. The residual is expanded as
/// `‖y‖² − 2 Re Σ_i s̄_i z_i + Σ_ij s̄_i g_ij s_j` with `z = H_Ω^* y` and
/// `g = H_Ω^* H_Ω`, which makes each hypothesis `O(N_a²)`.
///
/// Refuses (never truncates) when the hypothesis count exceeds `budget`.
pub fn ml_detect(inst: &GmmvInstance<'_>, budget: MlBudget) -> Result<DetectionResult> {
    let spatial = inst.spatial;
    let signal = inst.signal;
    let required = spatial.hypotheses(signal);
    if required > budget.0 {
        return Err(Error::BudgetExceeded { required, budget: budget.0 });
    }
    let n_a = inst.n_a();
    let m = signal.order();
    let g = inst.group_size();
    let points = signal.points();
    let combos = m.pow(n_a as u32);

    // Per slot: z_l = H'_l^* y and ‖y‖².
    let corr: Vec<Vec<C64>> = inst
        .received
        .iter()
        .zip(&inst.channels)
        .map(|(y, h)| (0..inst.n_t()).map(|l| dot_conj(h.col(l), y)).collect())
        .collect();
    let y_energy: Vec<f64> = inst.received.iter().map(|y| norm_sqr(y)).collect();

    let mut best_pattern = 0;
    let mut best_total = f64::INFINITY;
    let mut best_symbols: Vec<Vec<usize>> = vec![vec![0; n_a]; g];

    let mut gram = vec![C64::new(0.0, 0.0); n_a * n_a];
    let mut lin = vec![0.0; n_a * m];
    let mut digits = vec![0usize; n_a];
    let mut slot_symbols: Vec<Vec<usize>> = vec![vec![0; n_a]; g];

    for (p, pat) in spatial.patterns().enumerate() {
        let mut total = 0.0;
        for t in 0..g {
            let h = &inst.channels[t];
            for i in 0..n_a {
                for j in i..n_a {
                    let v = dot_conj(h.col(pat[i]), h.col(pat[j]));
                    gram[i * n_a + j] = v;
                    gram[j * n_a + i] = v.conj();
                }
            }
            // Terms that depend on a single antenna's symbol.
            for i in 0..n_a {
                let z = corr[t][pat[i]];
                let gii = gram[i * n_a + i].re;
                for (s, pt) in points.iter().enumerate() {
                    lin[i * m + s] = -2.0 * (pt.conj() * z).re + pt.norm_sqr() * gii;
                }
            }
            let mut slot_best = f64::INFINITY;
            digits.iter_mut().for_each(|d| *d = 0);
            for _ in 0..combos {
                let mut obj = 0.0;
                for i in 0..n_a {
                    obj += lin[i * m + digits[i]];
                    let si = points[digits[i]].conj();
                    for j in i + 1..n_a {
                        obj += 2.0 * (si * gram[i * n_a + j] * points[digits[j]]).re;
                    }
                }
                if obj < slot_best {
                    slot_best = obj;
                    slot_symbols[t].copy_from_slice(&digits);
                }
                // Odometer over 𝔹^{N_a}; the last antenna varies fastest.
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < m {
                        break;
                    }
                    *d = 0;
                }
            }
            total += y_energy[t] + slot_best;
        }
        if total < best_total {
            best_total = total;
            best_pattern = p;
            best_symbols.clone_from(&slot_symbols);
        }
    }

    let estimates = best_symbols.iter().map(|s| s.iter().map(|&k| points[k]).collect()).collect();
    let diag = Diagnostics { residual_norms: vec![best_total.max(0.0)], ..Diagnostics::default() };
    let res = DetectionResult::finish(inst, best_pattern, estimates, diag);
    debug_assert_eq!(res.symbols, best_symbols);
    Ok(res)
}
