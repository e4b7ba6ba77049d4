//! Signal and spatial constellations, and the bit mapping of SM signals.
//!
//! Bit words are slices of `bool`, most significant bit first. An SM signal
//! word is laid out as `[spatial bits | symbol bits of active antenna 0 | ...]`
//! with the active antennas taken in ascending index order.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result, C64};

/// Modulation family of a [`SignalConstellation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Psk,
    Qam,
}

/// An `M`-ary signal constellation with unit average symbol energy.
///
/// PSK point `k` is `exp(i 2πk/M)`. QAM points are laid out on the
/// `2^⌈b/2⌉ × 2^⌊b/2⌋` grid in natural row-major order and scaled to unit
/// average energy. `M = 1` is the single point `1` (pure spatial modulation).
#[derive(Debug, Clone, PartialEq)]
pub struct SignalConstellation {
    scheme: Scheme,
    points: Vec<C64>,
    bits: usize,
}

impl SignalConstellation {
    pub fn new(scheme: Scheme, order: usize) -> Result<Self> {
        if order == 0 || !order.is_power_of_two() {
            return Err(Error::ConstellationOrder(order));
        }
        let bits = order.trailing_zeros() as usize;
        let points = match scheme {
            Scheme::Psk => (0..order)
                .map(|k| {
                    let phi = 2.0 * PI * k as f64 / order as f64;
                    C64::new(libm::cos(phi), libm::sin(phi))
                })
                .collect(),
            Scheme::Qam => {
                if order < 4 {
                    return Err(Error::ConstellationOrder(order));
                }
                let cols = 1usize << bits.div_ceil(2);
                let rows = order / cols;
                let raw: Vec<C64> = (0..order)
                    .map(|k| {
                        let (r, c) = (k / cols, k % cols);
                        C64::new(2.0 * c as f64 - (cols - 1) as f64, (rows - 1) as f64 - 2.0 * r as f64)
                    })
                    .collect();
                let energy = raw.iter().map(|z| z.norm_sqr()).sum::<f64>() / order as f64;
                let s = 1.0 / libm::sqrt(energy);
                raw.into_iter().map(|z| z * s).collect()
            }
        };
        Ok(Self { scheme, points, bits })
    }

    pub fn psk(order: usize) -> Result<Self> {
        Self::new(Scheme::Psk, order)
    }

    pub fn qam(order: usize) -> Result<Self> {
        Self::new(Scheme::Qam, order)
    }

    pub fn bpsk() -> Self {
        Self::new(Scheme::Psk, 2).expect("valid order")
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> C64 {
        self.points[index]
    }

    /// Index of the point nearest to `z`; ties go to the lowest index.
    pub fn nearest(&self, z: C64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, p) in self.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        best
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }
}

/// `C(n, k)` as a `u128`; saturates on overflow.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The legal active-antenna patterns `𝔸`.
///
/// Holds the lexicographically first `2^⌊log₂ C(N_t, N_a)⌋` subsets of size
/// `N_a`. Pattern `i` carries the spatial bit word `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialConstellation {
    n_t: usize,
    n_a: usize,
    bits: usize,
    /// Flattened patterns, `n_a` indices each.
    patterns: Vec<usize>,
    usable: Vec<bool>,
}

/// Largest supported number of spatial bits (keeps `𝔸` enumerable).
pub const MAX_SPATIAL_BITS: usize = 24;

impl SpatialConstellation {
    pub fn new(n_t: usize, n_a: usize) -> Result<Self> {
        if n_a < 1 || n_a >= n_t {
            return Err(Error::AntennaCounts { n_t, n_a });
        }
        let count = binomial(n_t, n_a);
        let bits = (127 - count.leading_zeros()) as usize;
        if bits > MAX_SPATIAL_BITS {
            return Err(Error::Parameter("spatial constellation too large to enumerate"));
        }
        let size = 1usize << bits;
        let mut patterns = Vec::with_capacity(size * n_a);
        let mut current: Vec<usize> = (0..n_a).collect();
        for p in 0..size {
            patterns.extend_from_slice(&current);
            if p + 1 < size {
                next_combination(&mut current, n_t);
            }
        }
        let mut usable = vec![false; n_t];
        for &i in &patterns {
            usable[i] = true;
        }
        Ok(Self { n_t, n_a, bits, patterns, usable })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    /// `⌊log₂ C(N_t, N_a)⌋`.
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// `|𝔸|`.
    pub fn len(&self) -> usize {
        self.patterns.len() / self.n_a
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn pattern(&self, index: usize) -> &[usize] {
        &self.patterns[index * self.n_a..(index + 1) * self.n_a]
    }

    pub fn patterns(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.patterns.chunks_exact(self.n_a)
    }

    /// Whether antenna `i` belongs to at least one legal pattern.
    pub fn is_usable(&self, i: usize) -> bool {
        self.usable.get(i).copied().unwrap_or(false)
    }

    /// Index of `support` in `𝔸`; the support must be sorted ascending.
    pub fn index_of(&self, support: &[usize]) -> Option<usize> {
        if support.len() != self.n_a {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.pattern(mid).cmp(support) {
                core::cmp::Ordering::Less => lo = mid + 1,
                core::cmp::Ordering::Greater => hi = mid,
                core::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Pattern maximizing `Σ_{i∈Ω} weight[i]`; ties go to the lowest pattern.
    pub fn best_pattern(&self, weight: &[f64]) -> usize {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (p, pat) in self.patterns().enumerate() {
            let score: f64 = pat.iter().map(|&i| weight[i]).sum();
            if score > best_score {
                best = p;
                best_score = score;
            }
        }
        best
    }

    /// Pattern sharing the most indices with `support`; ties go to the
    /// lowest pattern.
    pub fn nearest_pattern(&self, support: &[usize]) -> usize {
        let mut mark = vec![0.0; self.n_t];
        for &i in support {
            if i < self.n_t {
                mark[i] = 1.0;
            }
        }
        self.best_pattern(&mark)
    }

    /// Number of ML hypotheses per slot, `M^{N_a} · |𝔸|`.
    pub fn hypotheses(&self, signal: &SignalConstellation) -> u128 {
        (signal.order() as u128).saturating_pow(self.n_a as u32) * self.len() as u128
    }
}

fn next_combination(c: &mut [usize], n: usize) {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return;
        }
    }
}

/// A length-`N_t` sparse SM signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SmSignal {
    /// Full antenna vector.
    pub values: Vec<C64>,
    /// Active antennas, ascending.
    pub support: Vec<usize>,
    /// Index of `support` in the spatial constellation.
    pub pattern: usize,
    /// Constellation point index of each active antenna.
    pub symbols: Vec<usize>,
}

impl SmSignal {
    /// Assembles the signal for a pattern and per-antenna symbol indices.
    pub fn from_indices(
        spatial: &SpatialConstellation,
        signal: &SignalConstellation,
        pattern: usize,
        symbols: &[usize],
    ) -> Self {
        let support = spatial.pattern(pattern).to_vec();
        let mut values = vec![C64::new(0.0, 0.0); spatial.n_t()];
        for (&i, &s) in support.iter().zip(symbols) {
            values[i] = signal.point(s);
        }
        Self { values, support, pattern, symbols: symbols.to_vec() }
    }

    /// Active-antenna amplitudes in support order.
    pub fn active_values(&self) -> Vec<C64> {
        self.support.iter().map(|&i| self.values[i]).collect()
    }
}

/// Packs `bits` (MSB first) into an integer.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Appends the `width` low bits of `value` to `out`, MSB first.
pub fn push_index_bits(value: usize, width: usize, out: &mut Vec<bool>) {
    for k in (0..width).rev() {
        out.push((value >> k) & 1 == 1);
    }
}

/// Bits carried by one SM signal.
pub fn signal_word_len(spatial: &SpatialConstellation, signal: &SignalConstellation) -> usize {
    spatial.bits() + spatial.n_a() * signal.bits_per_symbol()
}

/// Splits symbol bits into per-antenna point indices.
pub(crate) fn symbol_indices(bits: &[bool], n_a: usize, per_symbol: usize) -> Vec<usize> {
    (0..n_a).map(|i| bits_to_index(&bits[i * per_symbol..(i + 1) * per_symbol])).collect()
}

pub fn map_bits_to_sm(
    bits: &[bool],
    spatial: &SpatialConstellation,
    signal: &SignalConstellation,
) -> Result<SmSignal> {
    let expected = signal_word_len(spatial, signal);
    if bits.len() != expected {
        return Err(Error::BitLength { expected, got: bits.len() });
    }
    let pattern = bits_to_index(&bits[..spatial.bits()]);
    let symbols = symbol_indices(&bits[spatial.bits()..], spatial.n_a(), signal.bits_per_symbol());
    Ok(SmSignal::from_indices(spatial, signal, pattern, &symbols))
}

/// Inverse of [`map_bits_to_sm`]. Nonzero values are first quantized to the
/// nearest constellation point.
pub fn demap_sm_to_bits(
    x: &SmSignal,
    spatial: &SpatialConstellation,
    signal: &SignalConstellation,
) -> Result<Vec<bool>> {
    let pattern = spatial.index_of(&x.support).ok_or(Error::IllegalSupport)?;
    let mut out = Vec::with_capacity(signal_word_len(spatial, signal));
    push_index_bits(pattern, spatial.bits(), &mut out);
    for &i in &x.support {
        push_index_bits(signal.nearest(x.values[i]), signal.bits_per_symbol(), &mut out);
    }
    Ok(out)
}

/// Bit budget of grouped transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitBudget {
    pub spatial_bits: usize,
    /// Symbol bits of one slot, `N_a log₂ M`.
    pub signal_bits: usize,
    pub group_size: usize,
}

impl BitBudget {
    pub fn new(spatial: &SpatialConstellation, signal: &SignalConstellation, group_size: usize) -> Result<Self> {
        if group_size == 0 {
            return Err(Error::GroupSize);
        }
        Ok(Self {
            spatial_bits: spatial.bits(),
            signal_bits: spatial.n_a() * signal.bits_per_symbol(),
            group_size,
        })
    }

    /// Bits carried by one transmission group.
    pub fn bits_per_group(&self) -> usize {
        self.spatial_bits + self.group_size * self.signal_bits
    }

    /// Bits per channel use, `N_a log₂ M + ⌊log₂ C(N_t, N_a)⌋ / G`, as an
    /// exact fraction `(numerator, denominator)`.
    pub fn bpcu_ratio(&self) -> (usize, usize) {
        (self.bits_per_group(), self.group_size)
    }

    pub fn bpcu(&self) -> f64 {
        self.signal_bits as f64 + self.spatial_bits as f64 / self.group_size as f64
    }
}

pub fn bpcu(spatial: &SpatialConstellation, signal: &SignalConstellation, group_size: usize) -> Result<f64> {
    Ok(BitBudget::new(spatial, signal, group_size)?.bpcu())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Vec<bool> {
        s.chars().filter(|c| *c != '_').map(|c| c == '1').collect()
    }

    #[test]
    fn fig1_example_patterns() {
        let a = SpatialConstellation::new(4, 1).unwrap();
        assert_eq!(a.bits(), 2);
        let pats: Vec<&[usize]> = a.patterns().collect();
        assert_eq!(pats, [&[0usize][..], &[1], &[2], &[3]]);
    }

    #[test]
    fn large_configurations() {
        let a = SpatialConstellation::new(64, 1).unwrap();
        assert_eq!((a.len(), a.bits()), (64, 6));
        let a = SpatialConstellation::new(65, 2).unwrap();
        assert_eq!(binomial(65, 2), 2080);
        assert_eq!((a.len(), a.bits()), (2048, 11));
        // Lexicographic: {0,1} .. {0,64}, {1,2}, ...
        assert_eq!(a.pattern(0), &[0, 1]);
        assert_eq!(a.pattern(63), &[0, 64]);
        assert_eq!(a.pattern(64), &[1, 2]);
        assert!(a.patterns().collect::<Vec<_>>().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_antenna_counts() {
        assert!(SpatialConstellation::new(4, 4).is_err());
        assert!(SpatialConstellation::new(4, 0).is_err());
        assert!(SpatialConstellation::new(4, 5).is_err());
    }

    #[test]
    fn unit_energy_constellations() {
        for m in [1, 2, 4, 8, 16] {
            let b = SignalConstellation::psk(m).unwrap();
            assert!((b.average_energy() - 1.0).abs() < 1e-12);
        }
        for m in [4, 16, 32, 64] {
            let b = SignalConstellation::qam(m).unwrap();
            assert!((b.average_energy() - 1.0).abs() < 1e-12);
            for i in 0..m {
                for j in 0..i {
                    assert!((b.point(i) - b.point(j)).norm() > 1e-6);
                }
            }
        }
        assert!(SignalConstellation::psk(6).is_err());
        assert!(SignalConstellation::qam(2).is_err());
        let bpsk = SignalConstellation::bpsk();
        assert_eq!(bpsk.point(0), C64::new(1.0, 0.0));
        assert!((bpsk.point(1) - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn map_example_words() {
        let a = SpatialConstellation::new(4, 1).unwrap();
        let b = SignalConstellation::psk(4).unwrap();
        let x = map_bits_to_sm(&word("00_00"), &a, &b).unwrap();
        assert_eq!(x.support, [0]);
        assert_eq!(x.values[0], b.point(0));
        let x = map_bits_to_sm(&word("11_01"), &a, &b).unwrap();
        assert_eq!(x.support, [3]);
        assert_eq!(x.values[3], b.point(1));
        assert!(x.values[..3].iter().all(|z| z.norm() == 0.0));
        assert_eq!(
            map_bits_to_sm(&word("110"), &a, &b),
            Err(Error::BitLength { expected: 4, got: 3 })
        );
    }

    #[test]
    fn word_length_65_2_8psk() {
        let a = SpatialConstellation::new(65, 2).unwrap();
        let b = SignalConstellation::psk(8).unwrap();
        assert_eq!(signal_word_len(&a, &b), 17);
    }

    #[test]
    fn nearest_point_quantization() {
        let a = SpatialConstellation::new(4, 1).unwrap();
        let b = SignalConstellation::psk(4).unwrap();
        let mid = (b.point(0) + b.point(1)) * 0.5;
        let mut x = map_bits_to_sm(&word("10_00"), &a, &b).unwrap();
        x.values[2] = mid + (b.point(0) - mid) * 0.01;
        assert_eq!(demap_sm_to_bits(&x, &a, &b).unwrap(), word("10_00"));
        // Exact tie goes to the lower index.
        let q = SignalConstellation::qam(4).unwrap();
        assert_eq!(q.nearest(C64::new(0.0, 0.0)), 0);
        assert_eq!(q.nearest(C64::new(0.0, q.point(0).im)), 0);
    }

    #[test]
    fn demap_rejects_illegal_support() {
        let a = SpatialConstellation::new(65, 1).unwrap();
        let b = SignalConstellation::psk(2).unwrap();
        let x = SmSignal {
            values: vec![C64::new(0.0, 0.0); 65],
            support: vec![64],
            pattern: 0,
            symbols: vec![0],
        };
        assert_eq!(demap_sm_to_bits(&x, &a, &b), Err(Error::IllegalSupport));
    }

    #[test]
    fn exhaustive_bijection_small() {
        for (n_t, n_a, m) in [(4, 1, 4), (6, 2, 2), (8, 3, 4), (8, 2, 4), (5, 2, 1)] {
            let a = SpatialConstellation::new(n_t, n_a).unwrap();
            let b = SignalConstellation::psk(m).unwrap();
            let len = signal_word_len(&a, &b);
            let mut seen = std::collections::HashSet::new();
            for w in 0..(1usize << len) {
                let mut bits = Vec::new();
                push_index_bits(w, len, &mut bits);
                let x = map_bits_to_sm(&bits, &a, &b).unwrap();
                assert_eq!(x.support.len(), n_a);
                assert!(a.index_of(&x.support).is_some());
                assert_eq!(demap_sm_to_bits(&x, &a, &b).unwrap(), bits);
                let key: Vec<(i64, i64)> =
                    x.values.iter().map(|z| ((z.re * 1e9) as i64, (z.im * 1e9) as i64)).collect();
                assert!(seen.insert(key), "two words map to the same signal");
            }
        }
    }

    #[test]
    fn hypothesis_count() {
        let a = SpatialConstellation::new(65, 2).unwrap();
        let b = SignalConstellation::psk(8).unwrap();
        assert_eq!(a.hypotheses(&b), 131_072);
    }

    #[test]
    fn bpcu_reference_configurations() {
        let psk = |m| SignalConstellation::psk(m).unwrap();
        let a65 = SpatialConstellation::new(65, 2).unwrap();
        let a64 = SpatialConstellation::new(64, 1).unwrap();
        assert_eq!(bpcu(&a65, &psk(4), 2).unwrap(), 9.5);
        assert_eq!(bpcu(&a65, &psk(8), 2).unwrap(), 11.5);
        assert_eq!(bpcu(&a64, &psk(2), 1).unwrap(), 7.0);
        assert_eq!(bpcu(&a65, &psk(1), 1).unwrap(), 11.0);
        assert_eq!(BitBudget::new(&a65, &psk(4), 2).unwrap().bpcu_ratio(), (19, 2));
        assert_eq!(bpcu(&a65, &psk(4), 0), Err(Error::GroupSize));
    }
}
