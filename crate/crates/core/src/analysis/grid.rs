//! Densities discretized on a uniform grid.
//!
//! A [`GridPdf`] stores the exact probability mass of every cell
//! `[i·h, (i+1)·h)`. The density inside a cell is taken as uniform, so the
//! represented distribution integrates to the stored total mass exactly.

use alloc::vec;
use alloc::vec::Vec;

use super::special::{gamma_p, gamma_q, ln_gamma};

/// `Gamma(shape, scale)`; `σ²χ²_n` is `Gamma(n/2, 2σ²)`.
///
/// `scale = 0` is the point mass at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLaw {
    pub shape: f64,
    pub scale: f64,
}

impl GammaLaw {
    pub fn new(shape: f64, scale: f64) -> Self {
        debug_assert!(shape > 0.0 && scale >= 0.0);
        Self { shape, scale }
    }

    /// `weight · χ²_dof`.
    pub fn scaled_chi_square(weight: f64, dof: f64) -> Self {
        Self::new(dof / 2.0, 2.0 * weight)
    }

    pub fn is_degenerate(&self) -> bool {
        self.scale == 0.0
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 || self.is_degenerate() {
            return 0.0;
        }
        if x == 0.0 {
            return match self.shape {
                k if k < 1.0 => f64::INFINITY,
                k if k == 1.0 => 1.0 / self.scale,
                _ => 0.0,
            };
        }
        let k = self.shape;
        libm::exp((k - 1.0) * libm::log(x) - x / self.scale - ln_gamma(k) - k * libm::log(self.scale))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if self.is_degenerate() {
            return 1.0;
        }
        gamma_p(self.shape, x / self.scale)
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 1.0;
        }
        if self.is_degenerate() {
            return 0.0;
        }
        gamma_q(self.shape, x / self.scale)
    }

    /// A point beyond which at most `tail` probability remains.
    pub fn upper_point(&self, tail: f64) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let mut hi = self.mean() + 2.0 * libm::sqrt(self.variance());
        while self.sf(hi) > tail {
            hi *= 2.0;
        }
        let mut lo = hi / 2.0;
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.sf(mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Exact cell masses on `cells` cells of width `step`.
    pub fn discretize(&self, step: f64, cells: usize) -> GridPdf {
        if self.is_degenerate() {
            let mut masses = vec![0.0; cells];
            masses[0] = 1.0;
            return GridPdf { step, masses };
        }
        let masses = (0..cells)
            .map(|i| {
                let (a, b) = (i as f64 * step, (i + 1) as f64 * step);
                if a >= self.mean() {
                    self.sf(a) - self.sf(b)
                } else {
                    self.cdf(b) - self.cdf(a)
                }
            })
            .map(|m| m.max(0.0))
            .collect();
        GridPdf { step, masses }
    }
}

/// Cell masses on the uniform grid `[i·step, (i+1)·step)`, `i < len`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPdf {
    step: f64,
    masses: Vec<f64>,
}

impl GridPdf {
    pub fn from_masses(step: f64, masses: Vec<f64>) -> Self {
        Self { step, masses }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Cell-average density of cell `i`.
    pub fn density(&self, i: usize) -> f64 {
        self.masses[i] / self.step
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.step
    }

    /// `∫ f` over the grid.
    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.masses.iter().enumerate().map(|(i, m)| m * self.center(i)).sum()
    }

    /// CDF at every cell edge: `cdf[i] = P(X < i·step)`, length `len + 1`.
    pub fn edge_cdf(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.masses.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for m in &self.masses {
            acc += m;
            out.push(acc);
        }
        out
    }

    /// CDF at `x` with linear interpolation inside a cell.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let pos = x / self.step;
        let i = pos as usize;
        let full: f64 = self.masses[..i.min(self.masses.len())].iter().sum();
        if i >= self.masses.len() {
            return full;
        }
        full + self.masses[i] * (pos - i as f64)
    }

    /// Density of `X + Y` for independent `X`, `Y` on the same grid.
    ///
    /// The sum of two cell-uniform variables in cells `i` and `j` puts half
    /// its mass in cell `i + j` and half in `i + j + 1`. Mass pushed past the
    /// grid end is dropped.
    pub fn convolve(&self, other: &GridPdf) -> GridPdf {
        assert_eq!(self.step, other.step, "grids must share a step");
        let n = self.masses.len();
        let mut out = vec![0.0; n];
        let support = |m: &[f64]| m.iter().rposition(|&v| v > 1e-300).map_or(0, |p| p + 1);
        let (la, lb) = (support(&self.masses), support(&other.masses));
        for (i, &a) in self.masses[..la].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let half = 0.5 * a;
            for (j, &b) in other.masses[..lb].iter().enumerate() {
                let k = i + j;
                if k >= n {
                    break;
                }
                let v = half * b;
                out[k] += v;
                if k + 1 < n {
                    out[k + 1] += v;
                }
            }
        }
        GridPdf { step: self.step, masses: out }
    }
}

/// Density of the largest of `n` i.i.d. draws from `law`, from the exact
/// order-statistic CDF `F(x)^n`.
pub fn largest_of(law: &GammaLaw, n: usize, step: f64, cells: usize) -> GridPdf {
    order_statistic(law, step, cells, |f| libm::pow(f, n as f64))
}

/// Density of the second largest of `n ≥ 2` i.i.d. draws from `law`, from
/// the exact CDF `F^n + n F^{n−1} (1 − F)`.
pub fn second_largest_of(law: &GammaLaw, n: usize, step: f64, cells: usize) -> GridPdf {
    let nf = n as f64;
    order_statistic(law, step, cells, |f| {
        libm::pow(f, nf) + nf * libm::pow(f, nf - 1.0) * (1.0 - f)
    })
}

fn order_statistic(law: &GammaLaw, step: f64, cells: usize, cdf_of: impl Fn(f64) -> f64) -> GridPdf {
    let mut prev = cdf_of(law.cdf(0.0));
    let masses = (0..cells)
        .map(|i| {
            let next = cdf_of(law.cdf((i + 1) as f64 * step));
            let m = (next - prev).max(0.0);
            prev = next;
            m
        })
        .collect();
    GridPdf::from_masses(step, masses)
}

/// Pointwise density of the second largest of `n` draws,
/// `n!/(n−2)! · F(x)^{n−2} (1 − F(x)) f(x)`.
pub fn second_largest_density(density: f64, cdf: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf * (nf - 1.0) * libm::pow(cdf, nf - 2.0) * (1.0 - cdf) * density
}
