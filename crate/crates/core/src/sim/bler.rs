//! Standalone block-error-rate curves of the data and feedback channels.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelState;
use crate::error::{Error, Result};
use crate::harq::{HarqPhy, TxContext};
use crate::phy::{qpsk_llrs, NUM_SUBCARRIERS, NUM_SYMBOLS};
use crate::pucch::{AckNackDecision, FeedbackStandard};
use crate::rng::{Domain, SeedTree};
use crate::wifi::{build_ack_frame, build_data_frame, wifi_decode, wifi_encode};

use super::link::{point_key, received_grid, unit_noise, FadingSpec, FeedbackLink, PdschLink};
use super::params::{Mcs, SimParams};
use super::report::{SweepReport, SweepRow};
use super::SinrGrid;

const RECEIVER: [u8; 6] = [0x02, 0x00, 0x5e, 0x10, 0x00, 0x01];
const TRANSMITTER: [u8; 6] = [0x02, 0x00, 0x5e, 0x10, 0x00, 0x02];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlerCurve {
    #[serde(rename = "lte-pdsch")]
    LtePdsch,
    #[serde(rename = "lte-pucch")]
    LtePucch,
    #[serde(rename = "nr-pucch")]
    NrPucch,
    #[serde(rename = "wifi-data")]
    WifiData,
    #[serde(rename = "wifi-ack")]
    WifiAck,
}

impl BlerCurve {
    pub const ALL: [BlerCurve; 5] = [
        BlerCurve::LtePdsch,
        BlerCurve::LtePucch,
        BlerCurve::NrPucch,
        BlerCurve::WifiData,
        BlerCurve::WifiAck,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BlerCurve::LtePdsch => "lte-pdsch",
            BlerCurve::LtePucch => "lte-pucch",
            BlerCurve::NrPucch => "nr-pucch",
            BlerCurve::WifiData => "wifi-data",
            BlerCurve::WifiAck => "wifi-ack",
        }
    }

    fn id(self) -> u64 {
        self as u64 + 1
    }
}

impl std::str::FromStr for BlerCurve {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BlerCurve::ALL
            .into_iter()
            .find(|c| c.label() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown BLER curve `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlerConfig {
    pub curves: Vec<BlerCurve>,
    /// Trials per point for the feedback channels.
    pub trials: u64,
    /// Trials per point for the turbo-coded data channel.
    pub pdsch_trials: u64,
    /// Trials per point for the Wi-Fi data frame.
    pub wifi_data_trials: u64,
    /// MSDU length of the Wi-Fi data frame.
    pub wifi_data_octets: usize,
}

impl Default for BlerConfig {
    fn default() -> Self {
        Self {
            curves: BlerCurve::ALL.to_vec(),
            trials: 100_000,
            pdsch_trials: 2_000,
            wifi_data_trials: 5_000,
            wifi_data_octets: 1500,
        }
    }
}

impl BlerConfig {
    pub fn trials_for(&self, curve: BlerCurve) -> u64 {
        match curve {
            BlerCurve::LtePdsch => self.pdsch_trials,
            BlerCurve::WifiData => self.wifi_data_trials,
            _ => self.trials,
        }
    }
}

/// `(errors, trials)` of one curve at one SINR point.
pub fn bler_point(
    curve: BlerCurve,
    sinr_db: f64,
    trials: u64,
    fading: FadingSpec,
    params: &SimParams,
    cfg: &BlerConfig,
    seed: u64,
) -> Result<(u64, u64)> {
    let tree = SeedTree::new(seed);
    let key = point_key(sinr_db);
    let errors = match curve {
        BlerCurve::LtePdsch => {
            let codec = PdschLink::build_codec(params.tb_size(Mcs::Mcs2), params.g(), params.codec)?;
            let mut link = PdschLink::new(codec, sinr_db, fading, tree)?;
            let mut errors = 0;
            for t in 0..trials {
                let block = link.generate(t);
                let ctx = TxContext {
                    subframe: t,
                    block_serial: t,
                    attempt: 1,
                };
                let llrs = link.transmit(&block, 0, ctx)?;
                let mut buf = link.new_buffer();
                link.combine(&mut buf, &llrs, 0)?;
                errors += (!link.decode(&buf)?) as u64;
            }
            errors
        }
        BlerCurve::LtePucch | BlerCurve::NrPucch => {
            let standard = if curve == BlerCurve::LtePucch {
                FeedbackStandard::Lte
            } else {
                FeedbackStandard::Nr
            };
            let link = FeedbackLink::new(standard, &params.lte_pucch, &params.nr_pucch, &tree, key);
            let grids = [link.encode(0)?, link.encode(1)?];
            let channel = fading.channel(sinr_db, &tree, Domain::FeedbackFading, key)?;
            let mut errors = 0;
            for t in 0..trials {
                let mut rng = tree.stream(Domain::Bler, &[curve.id(), key, t]);
                let bit: u8 = rng.random_range(0..2);
                let noise = unit_noise(NUM_SUBCARRIERS * NUM_SYMBOLS, &mut rng);
                let rx = received_grid(&grids[bit as usize], channel.gain_at(t), &noise, channel.noise_var());
                errors += (link.receive(&rx)? != AckNackDecision::from_bit(bit)) as u64;
            }
            errors
        }
        BlerCurve::WifiAck | BlerCurve::WifiData => {
            let frame = if curve == BlerCurve::WifiAck {
                build_ack_frame(RECEIVER)
            } else {
                let mut rng = tree.stream(Domain::Payload, &[curve.id(), key]);
                let msdu: Vec<u8> = (0..cfg.wifi_data_octets).map(|_| rng.random()).collect();
                build_data_frame(RECEIVER, TRANSMITTER, &msdu)
            };
            let symbols = wifi_encode(&frame);
            let channel = fading.channel(sinr_db, &tree, Domain::DataFading, key)?;
            let noise_var = channel.noise_var().max(1e-6);
            let mut errors = 0;
            for t in 0..trials {
                let rng = tree.stream(Domain::Bler, &[curve.id(), key, t]);
                let mut state = ChannelState::new(t, rng);
                let (rx, h) = channel.apply(&symbols, &mut state);
                let llrs = qpsk_llrs(&rx, h, noise_var)?;
                let (got, ok) = wifi_decode(&llrs)?;
                errors += (!ok || got != frame) as u64;
            }
            errors
        }
    };
    Ok((errors, trials))
}

/// BLER of every configured curve over the grid; rows ordered by curve,
/// then SINR. The curve name goes in the `standard` column.
pub fn run_bler_suite(
    fading: FadingSpec,
    sweep: &SinrGrid,
    cfg: &BlerConfig,
    params: &SimParams,
    seed: u64,
) -> Result<SweepReport> {
    sweep.validate()?;
    params.validate()?;
    let jobs: Vec<(BlerCurve, f64)> = cfg
        .curves
        .iter()
        .flat_map(|&c| sweep.points().into_iter().map(move |s| (c, s)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(curve, s)| {
            let trials = cfg.trials_for(curve);
            let (errors, trials) = bler_point(curve, s, trials, fading, params, cfg, seed)?;
            Ok(SweepRow {
                dl_sinr_db: s,
                standard: curve.label().to_string(),
                mcs: (curve == BlerCurve::LtePdsch).then_some(Mcs::Mcs2.index()),
                bler: if trials == 0 { f64::NAN } else { errors as f64 / trials as f64 },
                trials,
                errors,
                ..SweepRow::empty(seed)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::new(rows))
}

/// `(errors, trials)` for a block decoded once after `transmissions`
/// identical, independently noisy copies are chase-combined.
pub fn combining_bler_point(
    tb_size: usize,
    g: usize,
    transmissions: usize,
    sinr_db: f64,
    trials: u64,
    params: &SimParams,
    seed: u64,
) -> Result<(u64, u64)> {
    let codec = PdschLink::build_codec(tb_size, g, params.codec)?;
    let mut link = PdschLink::new(codec, sinr_db, FadingSpec::awgn(), SeedTree::new(seed))?;
    let mut errors = 0;
    for t in 0..trials {
        let block = link.generate(t);
        let mut buf = link.new_buffer();
        for attempt in 1..=transmissions {
            let ctx = TxContext {
                subframe: t,
                block_serial: t,
                attempt,
            };
            let llrs = link.transmit(&block, 0, ctx)?;
            link.combine(&mut buf, &llrs, 0)?;
        }
        errors += (!link.decode(&buf)?) as u64;
    }
    Ok((errors, trials))
}

/// SINR at which a BLER curve crosses `target`, by linear interpolation of
/// `log10(BLER)` between the bracketing grid points. Points are
/// `(sinr_db, bler)` in increasing SINR. Returns `None` when the curve never
/// crosses.
pub fn crossing_sinr(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let lg = |b: f64| b.max(1e-12).log10();
    points.windows(2).find_map(|w| {
        let ((s0, b0), (s1, b1)) = (w[0], w[1]);
        if b0 >= target && b1 < target {
            let (l0, l1, lt) = (lg(b0), lg(b1), lg(target));
            Some(if l0 == l1 { s0 } else { s0 + (s1 - s0) * (l0 - lt) / (l0 - l1) })
        } else {
            None
        }
    })
}
