//! Grouped transmission and SM-signal interleaving.
//!
//! `G` consecutive slots share one spatial symbol. In slot `t` the
//! transmitter sends `Π^(t) x^(t)` instead of `x^(t)`, so the common support
//! lands on different physical antennas in each slot. The receiver folds the
//! permutation into the channel: `H'^(t) = H Π^(t)`.
//!
//! Permutations are stored as index maps: logical antenna `l` is sent on
//! physical antenna `perm[l]`. Slots are numbered from 0.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::add_noise;
use crate::constellation::{
    bits_to_index, push_index_bits, symbol_indices, SignalConstellation, SmSignal, SpatialConstellation,
};
use crate::linalg::CMatrix;
use crate::{seed, Error, Result, C64};

/// Per-slot permutations of one transmission group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSchedule {
    n_t: usize,
    seed: u64,
    group_index: u64,
    perms: Vec<Vec<usize>>,
}

impl PermutationSchedule {
    /// All slots untouched (plain MMV transmission).
    pub fn identity(n_t: usize, group_size: usize) -> Result<Self> {
        if group_size == 0 {
            return Err(Error::GroupSize);
        }
        Ok(Self { n_t, seed: 0, group_index: 0, perms: vec![(0..n_t).collect(); group_size] })
    }

    /// Builds a schedule from explicit permutations.
    pub fn from_permutations(perms: Vec<Vec<usize>>) -> Result<Self> {
        let n_t = perms.first().ok_or(Error::GroupSize)?.len();
        for p in &perms {
            if p.len() != n_t || !is_permutation(p) {
                return Err(Error::Parameter("not a permutation of 0..N_t"));
            }
        }
        Ok(Self { n_t, seed: 0, group_index: 0, perms })
    }

    pub fn group_size(&self) -> usize {
        self.perms.len()
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn group_index(&self) -> u64 {
        self.group_index
    }

    pub fn perm(&self, slot: usize) -> &[usize] {
        &self.perms[slot]
    }

    pub fn is_identity(&self) -> bool {
        self.perms.iter().all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
    }

    /// `Π^(t) x`: moves entry `l` to position `perm[l]`.
    pub fn permute(&self, slot: usize, x: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        for (l, &p) in self.perms[slot].iter().enumerate() {
            out[p] = x[l];
        }
        out
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Pseudo-random schedule for one group: slot 0 is the identity, every
/// further slot is an independent seeded Fisher–Yates shuffle addressed by
/// `(seed, group_index, slot)`.
pub fn make_schedule(n_t: usize, group_size: usize, seed: u64, group_index: u64) -> Result<PermutationSchedule> {
    if group_size == 0 {
        return Err(Error::GroupSize);
    }
    let mut perms = Vec::with_capacity(group_size);
    perms.push((0..n_t).collect());
    for slot in 1..group_size {
        let mut rng = seed::rng_for(&[0x1a7e, seed, group_index, slot as u64]);
        let mut p: Vec<usize> = (0..n_t).collect();
        p.shuffle(&mut rng);
        perms.push(p);
    }
    Ok(PermutationSchedule { n_t, seed, group_index, perms })
}

/// `H'^(t) = H Π^(t)`: column `l` of the result is column `perm[l]` of `H`.
pub fn deinterleave_channel(h: &CMatrix, schedule: &PermutationSchedule, slot: usize) -> Result<CMatrix> {
    if slot >= schedule.group_size() {
        return Err(Error::Slot { slot, group: schedule.group_size() });
    }
    if h.cols() != schedule.n_t() {
        return Err(Error::Dimension("channel columns must equal N_t"));
    }
    Ok(h.select_columns(schedule.perm(slot)))
}

/// Bits carried by a group of `group_size` slots.
pub fn group_word_len(spatial: &SpatialConstellation, signal: &SignalConstellation, group_size: usize) -> usize {
    spatial.bits() + group_size * spatial.n_a() * signal.bits_per_symbol()
}

/// The `G` SM signals of one group and what actually leaves the antennas.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedGroup {
    /// Logical signals `x^(t)`, all on the same support.
    pub signals: Vec<SmSignal>,
    /// Antenna vectors `Π^(t) x^(t)`.
    pub transmitted: Vec<Vec<C64>>,
}

impl EncodedGroup {
    pub fn pattern(&self) -> usize {
        self.signals[0].pattern
    }
}

/// Maps a group bit word `[spatial | slot 0 symbols | slot 1 symbols | ...]`.
pub fn encode_group(
    bits: &[bool],
    spatial: &SpatialConstellation,
    signal: &SignalConstellation,
    schedule: &PermutationSchedule,
) -> Result<EncodedGroup> {
    let g = schedule.group_size();
    let expected = group_word_len(spatial, signal, g);
    if bits.len() != expected {
        return Err(Error::BitLength { expected, got: bits.len() });
    }
    if schedule.n_t() != spatial.n_t() {
        return Err(Error::Dimension("schedule and spatial constellation disagree on N_t"));
    }
    let pattern = bits_to_index(&bits[..spatial.bits()]);
    let per_slot = spatial.n_a() * signal.bits_per_symbol();
    let mut signals = Vec::with_capacity(g);
    let mut transmitted = Vec::with_capacity(g);
    for t in 0..g {
        let start = spatial.bits() + t * per_slot;
        let symbols = symbol_indices(&bits[start..start + per_slot], spatial.n_a(), signal.bits_per_symbol());
        let x = SmSignal::from_indices(spatial, signal, pattern, &symbols);
        transmitted.push(schedule.permute(t, &x.values));
        signals.push(x);
    }
    Ok(EncodedGroup { signals, transmitted })
}

/// Bit word of a detected group, the inverse of [`encode_group`].
pub fn group_bits(
    spatial: &SpatialConstellation,
    signal: &SignalConstellation,
    pattern: usize,
    symbols: &[Vec<usize>],
) -> Vec<bool> {
    let mut out = Vec::with_capacity(group_word_len(spatial, signal, symbols.len()));
    push_index_bits(pattern, spatial.bits(), &mut out);
    for slot in symbols {
        for &s in slot {
            push_index_bits(s, signal.bits_per_symbol(), &mut out);
        }
    }
    out
}

/// A group after the channel: `y^(t) = H^(t) Π^(t) x^(t) + w^(t)`.
#[derive(Debug, Clone)]
pub struct TransmissionGroup {
    pub encoded: EncodedGroup,
    pub schedule: PermutationSchedule,
    /// Physical channel of each slot. Quasi-static groups repeat one matrix.
    pub channels: Vec<CMatrix>,
    pub received: Vec<Vec<C64>>,
}

impl TransmissionGroup {
    /// Passes an encoded group through `channels` (one per slot) and AWGN.
    pub fn transmit<R: Rng + ?Sized>(
        encoded: EncodedGroup,
        schedule: PermutationSchedule,
        channels: Vec<CMatrix>,
        noise_variance: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if channels.len() != encoded.signals.len() || schedule.group_size() != channels.len() {
            return Err(Error::Dimension("one channel and one permutation per slot"));
        }
        let received = encoded
            .transmitted
            .iter()
            .zip(&channels)
            .map(|(x, h)| {
                let mut y = h.mul_vec(x);
                add_noise(&mut y, noise_variance, rng);
                y
            })
            .collect();
        Ok(Self { encoded, schedule, channels, received })
    }

    /// `H'^(t)` for every slot.
    pub fn effective_channels(&self) -> Vec<CMatrix> {
        self.channels
            .iter()
            .enumerate()
            .map(|(t, h)| h.select_columns(self.schedule.perm(t)))
            .collect()
    }

    pub fn pattern(&self) -> usize {
        self.encoded.pattern()
    }

    pub fn group_size(&self) -> usize {
        self.channels.len()
    }

    /// The transmitted bit word.
    pub fn bits(&self, spatial: &SpatialConstellation, signal: &SignalConstellation) -> Vec<bool> {
        let symbols: Vec<Vec<usize>> = self.encoded.signals.iter().map(|s| s.symbols.clone()).collect();
        group_bits(spatial, signal, self.pattern(), &symbols)
    }
}
