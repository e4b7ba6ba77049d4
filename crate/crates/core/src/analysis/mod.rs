//! Analytical detection probability for a single active antenna.
//!
//! With one active antenna `m`, detection hinges on the correlation metric
//! `C_l = Σ_t |F_{m,l}^(t)|²`, where `F_{m,l} = H_l^* y`. Large-`N_r`
//! central-limit arguments make the real and imaginary parts of `F` zero-mean
//! Gaussians with variances given by [`MomentSet`], so `C_m` is a weighted
//! chi-square variable and every competitor `C_l` (`l ≠ m`) is a scaled
//! chi-square variable. The first iteration of the pursuit keeps the two
//! largest metrics, so detection fails when `C_m` drops below the second
//! largest of the `N_t − 1` competitors.

pub mod grid;
pub mod special;

use grid::{second_largest_of, GammaLaw, GridPdf};
pub use special::q_function;

use crate::{Error, Result};

/// Variances of the real/imaginary parts of the correlation `F_{m,l}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    /// `Re{F_{m,m}}`.
    pub sigma1_sq: f64,
    /// `Im{F_{m,m}}`.
    pub sigma2_sq: f64,
    /// `Re{F_{m,l}}` and `Im{F_{m,l}}`, `l ≠ m`.
    pub sigma3_sq: f64,
}

impl MomentSet {
    /// Moments for `N_r` receive antennas, signal power `σ_s²`, noise
    /// variance `σ_w²` and constellation order `M`.
    ///
    /// Real-valued constellations (`M ≤ 2`) put all signal energy into the
    /// real part of `F_{m,m}`.
    pub fn new(n_r: usize, signal_power: f64, noise_variance: f64, m: usize) -> Result<Self> {
        if n_r == 0 {
            return Err(Error::Parameter("N_r must be positive"));
        }
        if !(signal_power > 0.0) || !(noise_variance >= 0.0) {
            return Err(Error::Parameter("need σ_s² > 0 and σ_w² ≥ 0"));
        }
        let nr = n_r as f64;
        let delta = if m <= 2 { 1.0 } else { 0.0 };
        let quad = (nr * nr + nr) * signal_power;
        let noise = nr * noise_variance / 2.0;
        Ok(Self {
            sigma1_sq: quad / (2.0 - delta) + noise,
            sigma2_sq: (1.0 - delta) * quad / 2.0 + noise,
            sigma3_sq: nr * signal_power / 2.0 + noise,
        })
    }

    /// All means are zero.
    pub fn means(&self) -> [f64; 3] {
        [0.0; 3]
    }
}

/// Which recovery model the metric describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recovery {
    /// Per-slot channels differ (interleaved or independent).
    Gmmv,
    /// All slots see the same channel columns.
    Mmv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `C_m`, the active antenna.
    Signal,
    /// `C_l`, `l ≠ m`.
    Noise,
}

/// Laws of `C_m` and `C_l` for a group of `G` slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricDistribution {
    pub kind: Recovery,
    pub moments: MomentSet,
    pub group_size: usize,
    pub n_t: usize,
    pub n_a: usize,
}

impl MetricDistribution {
    pub fn new(kind: Recovery, moments: MomentSet, group_size: usize, n_t: usize, n_a: usize) -> Result<Self> {
        if group_size == 0 {
            return Err(Error::GroupSize);
        }
        if n_a != 1 {
            return Err(Error::AnalysisScope(n_a));
        }
        if n_t < n_a + 2 {
            return Err(Error::TooFewCompetitors(n_t.saturating_sub(n_a)));
        }
        Ok(Self { kind, moments, group_size, n_t, n_a })
    }

    /// The two gamma components of `C_m`: the `σ₁²` term first.
    ///
    /// GMMV: `σ₁²χ²_G + σ₂²χ²_G`. MMV: `Gσ₁²χ²_1 + Gσ₂²χ²_1`.
    pub fn signal_components(&self) -> [GammaLaw; 2] {
        let g = self.group_size as f64;
        let (w, dof) = match self.kind {
            Recovery::Gmmv => (1.0, g),
            Recovery::Mmv => (g, 1.0),
        };
        [
            GammaLaw::scaled_chi_square(w * self.moments.sigma1_sq, dof),
            GammaLaw::scaled_chi_square(w * self.moments.sigma2_sq, dof),
        ]
    }

    /// Law of `C_m` when its components share a scale; `None` otherwise.
    pub fn merged_signal(&self) -> Option<GammaLaw> {
        let [a, b] = self.signal_components();
        (a.scale == b.scale).then(|| GammaLaw::new(a.shape + b.shape, a.scale))
    }

    /// `C_l`: GMMV `σ₃²χ²_{2G}`, MMV `Gσ₃²χ²_2`.
    pub fn noise_law(&self) -> GammaLaw {
        let g = self.group_size as f64;
        match self.kind {
            Recovery::Gmmv => GammaLaw::scaled_chi_square(self.moments.sigma3_sq, 2.0 * g),
            Recovery::Mmv => GammaLaw::scaled_chi_square(g * self.moments.sigma3_sq, 2.0),
        }
    }

    /// Number of competing inactive antennas.
    pub fn competitors(&self) -> usize {
        self.n_t - self.n_a
    }

    /// Grid width covering every law involved up to a `tail` of mass.
    pub fn support(&self, tail: f64) -> f64 {
        let [a, b] = self.signal_components();
        let signal = a.upper_point(tail / 2.0) + b.upper_point(tail / 2.0);
        let noise = self.noise_law().upper_point(tail / self.competitors() as f64);
        signal.max(noise)
    }

    /// Gridded density of `C_m` or `C_l`.
    pub fn metric_pdf(&self, which: Metric, step: f64, cells: usize) -> GridPdf {
        match which {
            Metric::Noise => self.noise_law().discretize(step, cells),
            Metric::Signal => match self.merged_signal() {
                Some(law) => law.discretize(step, cells),
                None => {
                    let [a, b] = self.signal_components();
                    a.discretize(step, cells).convolve(&b.discretize(step, cells))
                }
            },
        }
    }
}

/// Gridded density of the second largest of the `N_t − N_a` competitor
/// metrics drawn from `noise`.
pub fn second_order_statistic_pdf(
    noise: &GammaLaw,
    n_t: usize,
    n_a: usize,
    step: f64,
    cells: usize,
) -> Result<GridPdf> {
    let n = n_t.saturating_sub(n_a);
    if n < 2 {
        return Err(Error::TooFewCompetitors(n));
    }
    Ok(second_largest_of(noise, n, step, cells))
}

/// Operating point of the single-active-antenna analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParams {
    pub n_t: usize,
    pub n_r: usize,
    pub n_a: usize,
    pub m: usize,
    pub group_size: usize,
    pub signal_power: f64,
    pub noise_variance: f64,
}

impl AnalyticParams {
    /// Unit-energy symbols, `σ_s² = N_a` and `σ_w² = σ_s² 10^{−snr/10}`.
    pub fn from_snr(n_t: usize, n_r: usize, n_a: usize, m: usize, group_size: usize, snr_db: f64) -> Self {
        let signal_power = n_a as f64;
        Self {
            n_t,
            n_r,
            n_a,
            m,
            group_size,
            signal_power,
            noise_variance: signal_power * libm::pow(10.0, -snr_db / 10.0),
        }
    }

    pub fn distribution(&self, kind: Recovery) -> Result<MetricDistribution> {
        if self.n_a != 1 {
            return Err(Error::AnalysisScope(self.n_a));
        }
        let moments = MomentSet::new(self.n_r, self.signal_power, self.noise_variance, self.m)?;
        MetricDistribution::new(kind, moments, self.group_size, self.n_t, self.n_a)
    }
}

/// Result of [`scser_analytic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticEstimate {
    pub scser: f64,
    /// Change between the last two grid refinements.
    pub achieved_tolerance: f64,
    pub cells: usize,
}

pub const MIN_CELLS: usize = 1 << 14;
pub const MAX_CELLS: usize = 1 << 17;
pub const TAIL_MASS: f64 = 1e-9;

/// `P(C_m < C^[2])` on a grid of `cells` cells.
pub fn miss_probability(dist: &MetricDistribution, cells: usize) -> f64 {
    let step = dist.support(TAIL_MASS) / cells as f64;
    let signal = dist.metric_pdf(Metric::Signal, step, cells);
    let second = second_largest_of(&dist.noise_law(), dist.competitors(), step, cells);
    let signal_cdf = signal.edge_cdf();
    let p: f64 = second
        .masses()
        .iter()
        .zip(signal.masses())
        .enumerate()
        .map(|(j, (m2, m1))| m2 * (signal_cdf[j] + 0.5 * m1))
        .sum();
    // Mass beyond the grid: C^[2] above the grid edge only loses to C_m there.
    let beyond = (1.0 - second.total()).max(0.0);
    (p + beyond * signal.total()).clamp(0.0, 1.0)
}

/// Spatial-symbol error probability `1 − P(C_m > C^[2])`.
///
/// The grid starts at [`MIN_CELLS`] and is doubled until two successive
/// estimates agree within `max(1e-8, 1e-3·p)`.
pub fn scser_analytic(kind: Recovery, params: &AnalyticParams) -> Result<AnalyticEstimate> {
    let dist = params.distribution(kind)?;
    let mut cells = MIN_CELLS;
    let mut prev = miss_probability(&dist, cells);
    loop {
        cells *= 2;
        let next = miss_probability(&dist, cells);
        let gap = libm::fabs(next - prev);
        if gap <= (1e-3 * next).max(1e-8) {
            return Ok(AnalyticEstimate { scser: next, achieved_tolerance: gap, cells });
        }
        if cells >= MAX_CELLS {
            return Err(Error::NotConverged { achieved: gap });
        }
        prev = next;
    }
}

/// Mean and standard deviation of `C_m − C_l` under the Gaussian
/// approximation.
pub fn gaussian_moments(moments: &MomentSet, group_size: usize) -> (f64, f64) {
    let g = group_size as f64;
    let s = [moments.sigma1_sq, moments.sigma2_sq, moments.sigma3_sq];
    let mu = moments.means();
    let mean = g * (mu[0] * mu[0] + mu[1] * mu[1] - 2.0 * mu[2] * mu[2] + s[0] + s[1] - 2.0 * s[2]);
    let var = g * s
        .iter()
        .zip(mu)
        .map(|(v, m)| 2.0 * v * v + 4.0 * m * m * v)
        .sum::<f64>();
    (mean, libm::sqrt(var))
}

/// Probability that `C_m` beats a single competitor `C_l`.
pub fn pairwise_correct_probability(kind: Recovery, moments: &MomentSet, group_size: usize) -> f64 {
    let (mu4, sigma4) = gaussian_moments(moments, group_size);
    match kind {
        Recovery::Gmmv => q_function(-mu4 / sigma4),
        Recovery::Mmv => q_function(-mu4 / (libm::sqrt(group_size as f64) * sigma4)),
    }
}

/// Gaussian approximation of the spatial-symbol error probability,
/// `1 − P(correct)`. Intended for high SNR and large `G`.
pub fn scser_gaussian_approx(kind: Recovery, params: &AnalyticParams) -> Result<f64> {
    let dist = params.distribution(kind)?;
    Ok(1.0 - pairwise_correct_probability(kind, &dist.moments, params.group_size))
}
