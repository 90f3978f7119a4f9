//! Transport-block channel coding: turbo mother code, circular-buffer rate
//! matching with redundancy versions, soft combining and iterative decoding.

mod qpp;
mod ratematch;
mod turbo;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harq::HarqScheme;

pub use qpp::QppInterleaver;
pub use ratematch::{stream_len, CircularSoftBuffer, RateMatchSpec, RateMatcher};
pub use turbo::{decode_mother, encode_mother, TurboDecoded};

/// Number of redundancy versions.
pub const NUM_RVS: u8 = 4;
/// Redundancy-version order used by incremental redundancy.
pub const RV_CYCLE: [u8; 4] = [0, 2, 3, 1];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodecConfig {
    pub decoder_iterations: usize,
    /// Stop iterating once the CRC passes.
    pub early_stop: bool,
    /// Damping applied to extrinsic information exchanged between the two
    /// max-log-MAP decoders.
    pub extrinsic_scale: f64,
}

impl Default for CodecConfig {
    fn default() -> Self {
        Self {
            decoder_iterations: 8,
            early_stop: true,
            extrinsic_scale: 0.75,
        }
    }
}

impl CodecConfig {
    pub fn validate(&self) -> Result<()> {
        if self.decoder_iterations == 0 {
            return Err(Error::Config("decoder_iterations must be at least 1".into()));
        }
        if !(self.extrinsic_scale > 0.0 && self.extrinsic_scale <= 1.0) {
            return Err(Error::Config(format!(
                "extrinsic_scale must lie in (0, 1], got {}",
                self.extrinsic_scale
            )));
        }
        Ok(())
    }
}

/// Redundancy version for a 1-based transmission attempt.
pub fn rv_schedule(scheme: HarqScheme, attempt: usize) -> u8 {
    match scheme {
        HarqScheme::Type3IncrementalRedundancy => RV_CYCLE[(attempt.max(1) - 1) % RV_CYCLE.len()],
        _ => 0,
    }
}

/// Encoder/decoder bound to one `(tb_size, G)` pair. Construction does the
/// interleaver search and ring layout once; all methods are then pure.
#[derive(Debug, Clone)]
pub struct TurboCodec {
    cfg: CodecConfig,
    pi: QppInterleaver,
    matcher: RateMatcher,
    readouts: [Vec<usize>; 4],
}

impl TurboCodec {
    pub fn new(tb_size: usize, g: usize, cfg: CodecConfig) -> Result<Self> {
        cfg.validate()?;
        let matcher = RateMatcher::new(tb_size, g)?;
        let pi = QppInterleaver::new(tb_size)?;
        let readouts = [
            matcher.positions(0)?,
            matcher.positions(1)?,
            matcher.positions(2)?,
            matcher.positions(3)?,
        ];
        Ok(Self {
            cfg,
            pi,
            matcher,
            readouts,
        })
    }

    pub fn for_spec(spec: &RateMatchSpec, cfg: CodecConfig) -> Result<Self> {
        spec.validate()?;
        Self::new(spec.tb_size, spec.g, cfg)
    }

    pub fn tb_size(&self) -> usize {
        self.matcher.k()
    }

    pub fn g(&self) -> usize {
        self.matcher.g()
    }

    pub fn config(&self) -> &CodecConfig {
        &self.cfg
    }

    pub fn interleaver(&self) -> &QppInterleaver {
        &self.pi
    }

    pub fn mother_len(&self) -> usize {
        self.matcher.mother_len()
    }

    fn readout(&self, rv: u8) -> Result<&[usize]> {
        self.readouts
            .get(rv as usize)
            .map(Vec::as_slice)
            .ok_or(Error::OutOfRange {
                what: "redundancy version",
                index: rv as usize,
                valid: "0..=3",
            })
    }

    /// Mother-codeword index of each transmitted bit for `rv`.
    pub fn positions(&self, rv: u8) -> Result<&[usize]> {
        self.readout(rv)
    }

    pub fn encode_mother(&self, tb: &[u8]) -> Result<Vec<u8>> {
        if tb.len() != self.tb_size() {
            return Err(Error::LengthMismatch {
                expected: self.tb_size(),
                got: tb.len(),
            });
        }
        crate::phy::validate_bits(tb)?;
        Ok(encode_mother(tb, &self.pi))
    }

    /// `G` coded bits of redundancy version `rv`.
    pub fn encode(&self, tb: &[u8], rv: u8) -> Result<Vec<u8>> {
        let readout = self.readout(rv)?;
        let mother = self.encode_mother(tb)?;
        Ok(readout.iter().map(|&p| mother[p]).collect())
    }

    pub fn new_buffer(&self) -> CircularSoftBuffer {
        CircularSoftBuffer::new(self.mother_len())
    }

    /// De-rate-matches `llrs` (length `G`) and adds them into `buffer`.
    pub fn deposit(&self, buffer: &mut CircularSoftBuffer, llrs: &[f64], rv: u8) -> Result<()> {
        if buffer.llrs().len() != self.mother_len() {
            return Err(Error::LengthMismatch {
                expected: self.mother_len(),
                got: buffer.llrs().len(),
            });
        }
        if llrs.len() != self.g() {
            return Err(Error::LengthMismatch {
                expected: self.g(),
                got: llrs.len(),
            });
        }
        buffer.accumulate(self.readout(rv)?, llrs)
    }

    pub fn decode(&self, buffer: &CircularSoftBuffer) -> Result<TurboDecoded> {
        if buffer.is_empty() {
            return Err(Error::EmptyBuffer);
        }
        if buffer.llrs().len() != self.mother_len() {
            return Err(Error::LengthMismatch {
                expected: self.mother_len(),
                got: buffer.llrs().len(),
            });
        }
        Ok(decode_mother(
            buffer.llrs(),
            self.tb_size(),
            &self.pi,
            self.cfg.decoder_iterations,
            self.cfg.extrinsic_scale,
            self.cfg.early_stop,
        ))
    }
}

/// One-shot encode for a rate-matching spec.
pub fn encode(tb: &[u8], spec: &RateMatchSpec, cfg: &CodecConfig) -> Result<Vec<u8>> {
    TurboCodec::for_spec(spec, *cfg)?.encode(tb, spec.rv)
}

/// One-shot deposit for a rate-matching spec.
pub fn deposit(
    buffer: &mut CircularSoftBuffer,
    llrs: &[f64],
    spec: &RateMatchSpec,
    cfg: &CodecConfig,
) -> Result<()> {
    TurboCodec::for_spec(spec, *cfg)?.deposit(buffer, llrs, spec.rv)
}

/// One-shot decode; returns the decoded block and whether its CRC passed.
pub fn decode(
    buffer: &CircularSoftBuffer,
    spec: &RateMatchSpec,
    cfg: &CodecConfig,
) -> Result<(Vec<u8>, bool)> {
    let out = TurboCodec::for_spec(spec, *cfg)?.decode(buffer)?;
    Ok((out.bits, out.crc_ok))
}

/// Noiseless LLR for a coded bit.
pub fn ideal_llr(bit: u8, magnitude: f64) -> f64 {
    if bit == 0 {
        magnitude
    } else {
        -magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy::crc24_attach;
    use crate::rng::{Domain, SeedTree};
    use rand::Rng;

    fn random_tb(k: usize, seed: u64) -> Vec<u8> {
        let mut rng = SeedTree::new(seed).stream(Domain::Test, &[k as u64]);
        let payload: Vec<u8> = (0..k - 24).map(|_| rng.random_range(0..2)).collect();
        crc24_attach(&payload).unwrap()
    }

    #[test]
    fn output_length_is_g() {
        let tb = random_tb(100, 1);
        let spec = RateMatchSpec::new(200, 100, 0).unwrap();
        assert_eq!(encode(&tb, &spec, &CodecConfig::default()).unwrap().len(), 200);
    }

    #[test]
    fn rv0_and_rv2_differ() {
        let tb = random_tb(100, 2);
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        assert_ne!(c.encode(&tb, 0).unwrap(), c.encode(&tb, 2).unwrap());
    }

    #[test]
    fn every_rv_self_decodable() {
        for (k, g) in [(100usize, 200usize), (64, 128), (3150, 12600), (9450, 12600)] {
            let tb = random_tb(k, 3);
            let c = TurboCodec::new(k, g, CodecConfig::default()).unwrap();
            for rv in 0..4 {
                let coded = c.encode(&tb, rv).unwrap();
                let llrs: Vec<f64> = coded.iter().map(|&b| ideal_llr(b, 8.0)).collect();
                let mut buf = c.new_buffer();
                c.deposit(&mut buf, &llrs, rv).unwrap();
                let out = c.decode(&buf).unwrap();
                assert!(out.crc_ok, "k={k} rv={rv}");
                assert_eq!(out.bits, tb);
            }
        }
    }

    #[test]
    fn empty_buffer_is_an_error() {
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        assert_eq!(c.decode(&c.new_buffer()), Err(Error::EmptyBuffer));
    }

    #[test]
    fn double_deposit_doubles() {
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        let llrs: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut once = c.new_buffer();
        c.deposit(&mut once, &llrs, 0).unwrap();
        let mut twice = once.clone();
        c.deposit(&mut twice, &llrs, 0).unwrap();
        for (i, (&a, &b)) in once.llrs().iter().zip(twice.llrs()).enumerate() {
            if once.fill_mask()[i] {
                assert_eq!(b, 2.0 * a);
            }
        }
    }

    #[test]
    fn zero_deposit_leaves_values() {
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        let mut buf = c.new_buffer();
        c.deposit(&mut buf, &vec![0.0; 200], 2).unwrap();
        assert!(buf.llrs().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rv2_extends_fill_mask() {
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        let llrs = vec![1.0; 200];
        let mut a = c.new_buffer();
        c.deposit(&mut a, &llrs, 0).unwrap();
        let mut b = a.clone();
        c.deposit(&mut b, &llrs, 2).unwrap();
        assert!(b.filled_count() > a.filled_count());
    }

    #[test]
    fn deposit_length_checked() {
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        let mut buf = c.new_buffer();
        assert!(matches!(
            c.deposit(&mut buf, &[0.0; 199], 0),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn schedule() {
        assert_eq!(rv_schedule(HarqScheme::Type1ChaseCombining, 3), 0);
        assert_eq!(rv_schedule(HarqScheme::Type1NoCombining, 2), 0);
        assert_eq!(rv_schedule(HarqScheme::BurstChaseCombining, 4), 0);
        let ir: Vec<u8> = (1..=4)
            .map(|a| rv_schedule(HarqScheme::Type3IncrementalRedundancy, a))
            .collect();
        assert_eq!(ir, vec![0, 2, 3, 1]);
    }

    #[test]
    fn erased_buffer_fails_crc() {
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        let mut buf = c.new_buffer();
        c.deposit(&mut buf, &vec![0.0; 200], 0).unwrap();
        assert!(!c.decode(&buf).unwrap().crc_ok);
    }

    #[test]
    fn ir_cycle_covers_mother_code() {
        let c = TurboCodec::new(100, 200, CodecConfig::default()).unwrap();
        let mut buf = c.new_buffer();
        let mut filled = Vec::new();
        for attempt in 1..=4 {
            let rv = rv_schedule(HarqScheme::Type3IncrementalRedundancy, attempt);
            c.deposit(&mut buf, &vec![1.0; 200], rv).unwrap();
            filled.push(buf.filled_count());
        }
        assert!(filled.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(*filled.last().unwrap(), c.mother_len());
    }

    // With distinct RVs the code rate after n transmissions is K / min(n G, 3(K+4))
    // up to the systematic part being repeated; CC stays at K / G.
    #[test]
    fn effective_rate_law() {
        let (k, g) = (100usize, 160usize);
        let c = TurboCodec::new(k, g, CodecConfig::default()).unwrap();
        let sys = k + 4;
        let mut ir = c.new_buffer();
        let mut cc = c.new_buffer();
        for attempt in 1..=4 {
            let rv = rv_schedule(HarqScheme::Type3IncrementalRedundancy, attempt);
            c.deposit(&mut ir, &vec![1.0; g], rv).unwrap();
            c.deposit(&mut cc, &vec![1.0; g], 0).unwrap();
            let want = (sys + attempt * (g - sys)).min(c.mother_len());
            assert!(ir.filled_count() <= want, "attempt {attempt}");
            assert_eq!(cc.filled_count(), g);
        }
        assert!(ir.filled_count() > 2 * (g - sys) + sys);
    }

    #[test]
    fn complementary_rvs_decode_where_one_fails() {
        // Heavy puncturing plus erased systematic bits: one RV carries too few
        // parity bits to recover, RV0 + RV2 carry disjoint ones and can.
        let (k, g) = (100usize, 120usize);
        let tb = random_tb(k, 9);
        let c = TurboCodec::new(k, g, CodecConfig::default()).unwrap();
        let llrs = |rv: u8| -> Vec<f64> {
            c.encode(&tb, rv)
                .unwrap()
                .iter()
                .enumerate()
                .map(|(i, &b)| if i % 5 == 0 && i < k { 0.0 } else { ideal_llr(b, 4.0) })
                .collect()
        };
        let mut single = c.new_buffer();
        c.deposit(&mut single, &llrs(0), 0).unwrap();
        assert!(!c.decode(&single).unwrap().crc_ok);
        let mut both = single.clone();
        c.deposit(&mut both, &llrs(2), 2).unwrap();
        let out = c.decode(&both).unwrap();
        assert!(out.crc_ok);
        assert_eq!(out.bits, tb);
    }
}
