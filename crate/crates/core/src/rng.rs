//! Reproducible random substreams.
//!
//! A master seed keys a ChaCha8 generator; each consumer selects its own
//! 64-bit ChaCha stream from a label tuple (domain, sweep point, block, ...),
//! so any cell of a sweep can be regenerated without replaying the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier recorded in run metadata.
pub const PRNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.9), key = SplitMix64(master seed), stream = SplitMix64 fold of labels";

/// What a substream is used for. Distinct domains never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Domain {
    Payload = 1,
    DataNoise = 2,
    DataFading = 3,
    FeedbackNoise = 4,
    FeedbackFading = 5,
    FeedbackBits = 6,
    CyclicShift = 7,
    Bler = 8,
    ChannelEstimate = 9,
    Test = 10,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree {
    master: u64,
    key: [u8; 32],
}

impl SeedTree {
    pub fn new(master: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = master;
        for chunk in key.chunks_exact_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        Self { master, key }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Generator for `(domain, labels...)`.
    pub fn stream(&self, domain: Domain, labels: &[u64]) -> ChaCha8Rng {
        let id = labels
            .iter()
            .fold(splitmix64(domain as u64), |acc, &l| splitmix64(acc ^ splitmix64(l)));
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(id);
        rng
    }
}
