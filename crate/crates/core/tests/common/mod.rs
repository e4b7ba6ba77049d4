#![allow(dead_code)]

use rand::Rng;
use smcs_core::channel::{ChannelModel, CorrelationSpec};
use smcs_core::constellation::{SignalConstellation, SpatialConstellation};
use smcs_core::interleave::{encode_group, group_word_len, make_schedule, PermutationSchedule, TransmissionGroup};

pub struct Setup {
    pub spatial: SpatialConstellation,
    pub signal: SignalConstellation,
    pub model: ChannelModel,
    pub group_size: usize,
}

impl Setup {
    pub fn new(n_t: usize, n_r: usize, n_a: usize, signal: SignalConstellation, g: usize, r: f64) -> Self {
        Self {
            spatial: SpatialConstellation::new(n_t, n_a).unwrap(),
            signal,
            model: ChannelModel::new(n_r, n_t, CorrelationSpec::symmetric(r).unwrap()).unwrap(),
            group_size: g,
        }
    }

    pub fn random_bits<R: Rng>(&self, rng: &mut R) -> Vec<bool> {
        (0..group_word_len(&self.spatial, &self.signal, self.group_size)).map(|_| rng.random()).collect()
    }

    /// One quasi-static group with interleaving.
    pub fn group<R: Rng>(&self, rng: &mut R, noise_variance: f64, seed: u64, index: u64) -> TransmissionGroup {
        let schedule = make_schedule(self.spatial.n_t(), self.group_size, seed, index).unwrap();
        self.group_with(rng, noise_variance, schedule, false)
    }

    pub fn group_with<R: Rng>(
        &self,
        rng: &mut R,
        noise_variance: f64,
        schedule: PermutationSchedule,
        independent: bool,
    ) -> TransmissionGroup {
        let h = self.model.draw(rng);
        let channels = (0..self.group_size)
            .map(|t| if independent && t > 0 { self.model.draw(rng) } else { h.clone() })
            .collect();
        let bits = self.random_bits(rng);
        let encoded = encode_group(&bits, &self.spatial, &self.signal, &schedule).unwrap();
        TransmissionGroup::transmit(encoded, schedule, channels, noise_variance, rng).unwrap()
    }
}
