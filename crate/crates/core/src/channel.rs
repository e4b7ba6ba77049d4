//! Kronecker-correlated flat Rayleigh fading and AWGN.
//!
//! `H = R_r^{1/2} H̃ R_t^{1/2}` with `H̃` i.i.d. `CN(0, 1)` and exponential
//! correlation `R_ij = r^{|i−j|}` at each side.
//!
//! SNR convention: `SNR = σ_s² / σ_w²` with `σ_s² = Tr E{x x*} = N_a` for
//! unit-energy constellations.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{symmetric_eigen, CMatrix, RealMatrix};
use crate::{Error, Result, C64};

/// Transmit and receive correlation coefficients of neighbouring antennas.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorrelationSpec {
    pub r_t: f64,
    pub r_r: f64,
}

impl CorrelationSpec {
    pub const UNCORRELATED: Self = Self { r_t: 0.0, r_r: 0.0 };

    pub fn new(r_t: f64, r_r: f64) -> Result<Self> {
        check_coefficient(r_t)?;
        check_coefficient(r_r)?;
        Ok(Self { r_t, r_r })
    }

    pub fn symmetric(r: f64) -> Result<Self> {
        Self::new(r, r)
    }
}

fn check_coefficient(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Correlation(r))
    }
}

/// Exponential correlation matrix `R_ij = r^{|i−j|}`.
pub fn correlation_matrix(n: usize, r: f64) -> RealMatrix {
    RealMatrix::from_fn(n, |i, j| libm::pow(r, i.abs_diff(j) as f64))
}

/// Symmetric positive-definite square root of the exponential correlation
/// matrix.
pub fn correlation_sqrt(n: usize, r: f64) -> Result<RealMatrix> {
    check_coefficient(r)?;
    if r == 0.0 {
        return Ok(RealMatrix::identity(n));
    }
    let eig = symmetric_eigen(&correlation_matrix(n, r));
    let v = &eig.vectors;
    let roots: Vec<f64> = eig.values.iter().map(|&l| libm::sqrt(l.max(0.0))).collect();
    Ok(RealMatrix::from_fn(n, |i, j| (0..n).map(|k| v.get(i, k) * v.get(j, k) * roots[k]).sum()))
}

/// Draws `CN(0, variance)`.
#[inline]
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = libm::sqrt(variance / 2.0);
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}

/// Reusable channel generator holding the correlation square roots.
#[derive(Debug, Clone)]
pub struct ChannelModel {
    n_r: usize,
    n_t: usize,
    rx_sqrt: Option<RealMatrix>,
    tx_sqrt: Option<RealMatrix>,
}

impl ChannelModel {
    pub fn new(n_r: usize, n_t: usize, spec: CorrelationSpec) -> Result<Self> {
        if n_r == 0 || n_t == 0 {
            return Err(Error::Dimension("channel must have at least one antenna per side"));
        }
        let rx = correlation_sqrt(n_r, spec.r_r)?;
        let tx = correlation_sqrt(n_t, spec.r_t)?;
        Ok(Self {
            n_r,
            n_t,
            rx_sqrt: (!rx.is_identity()).then_some(rx),
            tx_sqrt: (!tx.is_identity()).then_some(tx),
        })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let mut h = CMatrix::from_fn(self.n_r, self.n_t, |_, _| complex_gaussian(rng, 1.0));
        if let Some(s) = &self.rx_sqrt {
            h = h.left_mul_real(s);
        }
        if let Some(s) = &self.tx_sqrt {
            h = h.right_mul_real(s);
        }
        h
    }
}

/// One `N_r × N_t` channel realization.
pub fn draw_channel<R: Rng + ?Sized>(n_r: usize, n_t: usize, spec: CorrelationSpec, rng: &mut R) -> Result<CMatrix> {
    Ok(ChannelModel::new(n_r, n_t, spec)?.draw(rng))
}

/// Adds i.i.d. `CN(0, σ_w²)` noise in place. `σ_w² = 0` leaves the input
/// untouched and consumes no randomness.
pub fn add_noise<R: Rng + ?Sized>(y: &mut [C64], noise_variance: f64, rng: &mut R) {
    if noise_variance == 0.0 {
        return;
    }
    for v in y.iter_mut() {
        *v += complex_gaussian(rng, noise_variance);
    }
}

/// `σ_w²` for a given SNR in dB and signal power `σ_s²`.
pub fn noise_variance(snr_db: f64, signal_power: f64) -> f64 {
    signal_power * libm::pow(10.0, -snr_db / 10.0)
}
