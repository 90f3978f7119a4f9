//! Concrete physical links driven by the experiment loops: the turbo-coded
//! QPSK downlink data channel and the PUCCH feedback channel.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{Channel, ChannelConfig, ChannelModel, ChannelState};
use crate::codec::{CircularSoftBuffer, CodecConfig, TurboCodec};
use crate::error::Result;
use crate::harq::{HarqPhy, TxContext};
use crate::phy::{crc24_attach, qpsk_llrs, qpsk_modulate, ResourceGrid};
use crate::pucch::{self, AckNackDecision, FeedbackStandard, LtePucchConfig, NrPucchConfig};
use crate::rng::{Domain, SeedTree};

/// Floor on the noise variance handed to the demapper so that noiseless
/// runs still produce finite LLRs.
const MIN_NOISE_VAR: f64 = 1e-6;

/// Stable label of a sweep point: the SINR value itself, so that a point's
/// random streams do not depend on which grid it was part of.
pub fn point_key(sinr_db: f64) -> u64 {
    (sinr_db + 0.0).to_bits()
}

/// Channel model and Doppler shared by a run's links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSpec {
    pub model: ChannelModel,
    pub doppler_hz: f64,
}

impl FadingSpec {
    pub fn awgn() -> Self {
        Self {
            model: ChannelModel::Awgn,
            doppler_hz: 0.0,
        }
    }

    pub fn rayleigh(doppler_hz: f64) -> Self {
        Self {
            model: ChannelModel::Rayleigh,
            doppler_hz,
        }
    }

    pub fn channel(&self, sinr_db: f64, tree: &SeedTree, domain: Domain, key: u64) -> Result<Channel> {
        let cfg = ChannelConfig {
            model: self.model,
            doppler_hz: self.doppler_hz,
            seed: tree.master(),
            sinr_db,
        };
        Channel::new(cfg, &mut tree.stream(domain, &[key]))
    }
}

/// Downlink data channel at one SINR point.
///
/// Random streams: payload by block serial; noise by `(point, serial,
/// attempt)` so different HARQ schemes see identical noise for the same
/// transmission of the same block; fading by subframe index.
pub struct PdschLink {
    codec: Arc<TurboCodec>,
    tbs: usize,
    tree: SeedTree,
    channel: Channel,
    key: u64,
    pin_noise: bool,
}

impl PdschLink {
    pub fn new(
        codec: Arc<TurboCodec>,
        sinr_db: f64,
        fading: FadingSpec,
        tree: SeedTree,
    ) -> Result<Self> {
        let key = point_key(sinr_db);
        let channel = fading.channel(sinr_db, &tree, Domain::DataFading, key)?;
        Ok(Self {
            tbs: codec.tb_size() - crate::phy::CRC24_LEN,
            codec,
            tree,
            channel,
            key,
            pin_noise: false,
        })
    }

    pub fn build_codec(tb_size: usize, g: usize, cfg: CodecConfig) -> Result<Arc<TurboCodec>> {
        Ok(Arc::new(TurboCodec::new(tb_size, g, cfg)?))
    }

    /// Reuse the first attempt's noise for every retransmission of a block.
    pub fn with_pinned_noise(mut self, pinned: bool) -> Self {
        self.pin_noise = pinned;
        self
    }

    pub fn codec(&self) -> &TurboCodec {
        &self.codec
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }
}

impl HarqPhy for PdschLink {
    fn tbs(&self) -> usize {
        self.tbs
    }

    fn generate(&mut self, block_serial: u64) -> Vec<u8> {
        let mut rng = self.tree.stream(Domain::Payload, &[block_serial]);
        let payload: Vec<u8> = (0..self.tbs).map(|_| rng.random_range(0..2u8)).collect();
        crc24_attach(&payload).expect("payload is non-empty")
    }

    fn new_buffer(&self) -> CircularSoftBuffer {
        self.codec.new_buffer()
    }

    fn transmit(&mut self, block: &[u8], rv: u8, ctx: TxContext) -> Result<Vec<f64>> {
        let coded = self.codec.encode(block, rv)?;
        let symbols = qpsk_modulate(&coded)?;
        let attempt = if self.pin_noise { 1 } else { ctx.attempt as u64 };
        let rng = self
            .tree
            .stream(Domain::DataNoise, &[self.key, ctx.block_serial, attempt]);
        let mut state = ChannelState::new(ctx.subframe, rng);
        let (rx, h) = self.channel.apply(&symbols, &mut state);
        qpsk_llrs(&rx, h, self.channel.noise_var().max(MIN_NOISE_VAR))
    }

    fn combine(&self, buffer: &mut CircularSoftBuffer, llrs: &[f64], rv: u8) -> Result<()> {
        self.codec.deposit(buffer, llrs, rv)
    }

    fn decode(&mut self, buffer: &CircularSoftBuffer) -> Result<bool> {
        Ok(self.codec.decode(buffer)?.crc_ok)
    }
}

/// Feedback channel transmitter/receiver pair for one standard.
#[derive(Debug, Clone)]
pub enum FeedbackLink {
    Lte(LtePucchConfig),
    Nr(NrPucchConfig),
}

impl FeedbackLink {
    pub fn new(
        standard: FeedbackStandard,
        lte: &LtePucchConfig,
        nr: &NrPucchConfig,
        tree: &SeedTree,
        key: u64,
    ) -> Self {
        match standard {
            FeedbackStandard::Lte => FeedbackLink::Lte(*lte),
            FeedbackStandard::Nr => {
                let mut rng = tree.stream(Domain::CyclicShift, &[key]);
                FeedbackLink::Nr(nr.clone().with_random_shifts(&mut rng))
            }
        }
    }

    pub fn standard(&self) -> FeedbackStandard {
        match self {
            FeedbackLink::Lte(_) => FeedbackStandard::Lte,
            FeedbackLink::Nr(_) => FeedbackStandard::Nr,
        }
    }

    pub fn encode(&self, bit: u8) -> Result<ResourceGrid> {
        match self {
            FeedbackLink::Lte(c) => pucch::encode_format1a(bit, c),
            FeedbackLink::Nr(c) => pucch::encode_format1(bit, c),
        }
    }

    pub fn estimate(&self, rx: &ResourceGrid) -> Result<Vec<Complex64>> {
        match self {
            FeedbackLink::Lte(c) => pucch::estimate_channel_lte(rx, c),
            FeedbackLink::Nr(c) => pucch::estimate_channel_nr(rx, c),
        }
    }

    /// Channel estimation followed by detection.
    pub fn receive(&self, rx: &ResourceGrid) -> Result<AckNackDecision> {
        let h = self.estimate(rx)?;
        match self {
            FeedbackLink::Lte(c) => pucch::decode_format1a(rx, c, &h),
            FeedbackLink::Nr(c) => pucch::detect_decode_format1(rx, c, &h),
        }
    }
}

/// Circularly-symmetric complex Gaussian samples of unit variance. Scaling
/// by `sqrt(sigma^2)` gives the noise of any SINR from the same draws.
pub fn unit_noise<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex64> {
    let sd = std::f64::consts::FRAC_1_SQRT_2;
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(sd * re, sd * im)
        })
        .collect()
}

/// `h * tx + sqrt(noise_var) * noise`, cellwise.
pub fn received_grid(
    tx: &ResourceGrid,
    h: Complex64,
    noise: &[Complex64],
    noise_var: f64,
) -> ResourceGrid {
    let sd = noise_var.sqrt();
    let cells = tx
        .cells()
        .iter()
        .zip(noise)
        .map(|(&x, &n)| h * x + sd * n)
        .collect();
    tx.with_values(cells)
}
