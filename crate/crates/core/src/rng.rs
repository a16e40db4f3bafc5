//! Counter-based splittable random numbers.
//!
//! Streams are keyed by `(master_seed, stream_index, trial_index)`; every word
//! of a trial's stream is a pure function of that key and a counter, so shards
//! can be re-derived independently on any worker and merged without
//! coordination.

/// Identifies one sampled configuration: `(master seed, stream index, trial index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SeedRecord {
    pub master_seed: u64,
    pub stream: u64,
    pub trial: u64,
}

impl SeedRecord {
    pub const fn new(master_seed: u64, stream: u64, trial: u64) -> Self {
        SeedRecord { master_seed, stream, trial }
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based generator: word `i` of a stream is
/// `mix64(base + (i+1) * GOLDEN)`, i.e. a SplitMix64 sequence whose base state
/// is derived from the seed record by chained mixing.
#[derive(Debug, Clone)]
pub struct CounterRng {
    base: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: SeedRecord) -> Self {
        let k1 = mix64(seed.master_seed ^ 0xa5a5_a5a5_a5a5_a5a5);
        let k2 = mix64(k1 ^ seed.stream.wrapping_mul(GOLDEN));
        let base = mix64(k2 ^ seed.trial.wrapping_mul(GOLDEN));
        CounterRng { base, counter: 0 }
    }

    #[inline]
    pub fn word_at(&self, i: u64) -> u64 {
        mix64(self.base.wrapping_add((i + 1).wrapping_mul(GOLDEN)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let w = self.word_at(self.counter);
        self.counter += 1;
        w
    }

    /// Uniform f64 in [0, 1).
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
