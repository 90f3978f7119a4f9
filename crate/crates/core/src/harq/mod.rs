//! HARQ state machines: no combining, chase combining, incremental
//! redundancy over a pool of stop-and-wait processes, and fixed four-shot
//! burst repetition. Feedback here is ideal; the asymmetric driver in
//! [`crate::sim`] layers lossy feedback on top of these outcomes.

mod engine;

use serde::{Deserialize, Serialize};

use crate::codec::CircularSoftBuffer;
use crate::error::{Error, Result};
use crate::pucch::AckNackDecision;

pub use engine::{harq_index, step, step_burst_cc, step_type1_cc, step_type1_nocomb, step_type3_ir};

/// Default maximum number of transmissions of one block.
pub const DEFAULT_MAX_TRANSMISSIONS: usize = 4;
/// Transmissions per block in burst mode.
pub const BURST_LENGTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HarqScheme {
    #[serde(rename = "type1-nocomb")]
    Type1NoCombining,
    #[serde(rename = "type1-cc")]
    Type1ChaseCombining,
    #[serde(rename = "type3-ir")]
    Type3IncrementalRedundancy,
    #[serde(rename = "burst-cc")]
    BurstChaseCombining,
}

impl HarqScheme {
    pub const ALL: [HarqScheme; 4] = [
        HarqScheme::Type1NoCombining,
        HarqScheme::Type1ChaseCombining,
        HarqScheme::Type3IncrementalRedundancy,
        HarqScheme::BurstChaseCombining,
    ];

    pub fn label(self) -> &'static str {
        match self {
            HarqScheme::Type1NoCombining => "type1-nocomb",
            HarqScheme::Type1ChaseCombining => "type1-cc",
            HarqScheme::Type3IncrementalRedundancy => "type3-ir",
            HarqScheme::BurstChaseCombining => "burst-cc",
        }
    }

    /// Number of parallel processes the scheme runs with by default.
    pub fn default_processes(self, n_harq: usize) -> usize {
        match self {
            HarqScheme::Type3IncrementalRedundancy => n_harq,
            _ => 1,
        }
    }

    /// Subframes consumed by one engine step.
    pub fn subframes_per_step(self) -> usize {
        match self {
            HarqScheme::BurstChaseCombining => BURST_LENGTH,
            _ => 1,
        }
    }
}

impl std::fmt::Display for HarqScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for HarqScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "type1-nocomb" | "nocomb" | "type1" => Ok(HarqScheme::Type1NoCombining),
            "type1-cc" | "cc" => Ok(HarqScheme::Type1ChaseCombining),
            "type3-ir" | "ir" => Ok(HarqScheme::Type3IncrementalRedundancy),
            "burst-cc" | "burst" => Ok(HarqScheme::BurstChaseCombining),
            other => Err(Error::Config(format!(
                "unknown HARQ scheme `{other}` (expected type1-nocomb, type1-cc, type3-ir or burst-cc)"
            ))),
        }
    }
}

/// Where a transmission sits in time and in the block's history; physical
/// layers key their random streams on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TxContext {
    /// Subframe (TTI) index the transmission occupies.
    pub subframe: u64,
    /// Run-unique serial number of the transport block.
    pub block_serial: u64,
    /// 1-based transmission attempt of this block.
    pub attempt: usize,
}

/// The physical layer + channel the engine drives.
pub trait HarqPhy {
    /// Payload bits credited per delivered block.
    fn tbs(&self) -> usize;
    /// Fresh transport block (CRC included) for `block_serial`.
    fn generate(&mut self, block_serial: u64) -> Vec<u8>;
    fn new_buffer(&self) -> CircularSoftBuffer;
    /// Encodes, transmits and demodulates one redundancy version; returns the
    /// received coded-bit LLRs.
    fn transmit(&mut self, block: &[u8], rv: u8, ctx: TxContext) -> Result<Vec<f64>>;
    fn combine(&self, buffer: &mut CircularSoftBuffer, llrs: &[f64], rv: u8) -> Result<()>;
    /// Decodes the buffer; `true` when the CRC passes.
    fn decode(&mut self, buffer: &CircularSoftBuffer) -> Result<bool>;
}

/// Block awaiting acknowledgement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingBlock {
    pub serial: u64,
    pub bits: Vec<u8>,
}

/// One stop-and-wait process: pending data, soft buffer and transmission count.
#[derive(Debug, Clone, Default)]
pub struct HarqProcess {
    pub data: Option<PendingBlock>,
    pub soft: Option<CircularSoftBuffer>,
    pub tx_count: usize,
}

impl HarqProcess {
    pub fn is_idle(&self) -> bool {
        self.data.is_none() && self.soft.is_none() && self.tx_count == 0
    }

    pub fn reset(&mut self) {
        self.data = None;
        self.soft = None;
        self.tx_count = 0;
    }
}

#[derive(Debug, Clone)]
pub struct HarqPool {
    processes: Vec<HarqProcess>,
    max_transmissions: usize,
    next_serial: u64,
}

impl HarqPool {
    pub fn new(n_processes: usize, max_transmissions: usize) -> Result<Self> {
        if n_processes == 0 {
            return Err(Error::Config("HARQ pool needs at least one process".into()));
        }
        if max_transmissions == 0 {
            return Err(Error::Config("maximum transmissions must be at least 1".into()));
        }
        Ok(Self {
            processes: vec![HarqProcess::default(); n_processes],
            max_transmissions,
            next_serial: 0,
        })
    }

    pub fn for_scheme(scheme: HarqScheme, n_harq: usize, max_transmissions: usize) -> Result<Self> {
        Self::new(scheme.default_processes(n_harq), max_transmissions)
    }

    pub fn len(&self) -> usize {
        self.processes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.processes.is_empty()
    }

    pub fn max_transmissions(&self) -> usize {
        self.max_transmissions
    }

    /// 1-based process access.
    pub fn process(&self, index: usize) -> Option<&HarqProcess> {
        index.checked_sub(1).and_then(|i| self.processes.get(i))
    }

    pub fn processes(&self) -> &[HarqProcess] {
        &self.processes
    }

    pub(crate) fn process_mut(&mut self, index: usize) -> &mut HarqProcess {
        &mut self.processes[index - 1]
    }

    pub(crate) fn take_serial(&mut self) -> u64 {
        let s = self.next_serial;
        self.next_serial += 1;
        s
    }

    /// Blocks generated so far.
    pub fn blocks_generated(&self) -> u64 {
        self.next_serial
    }
}

/// Result of one engine step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubframeOutcome {
    /// 1-based process served.
    pub process: usize,
    pub block_serial: u64,
    /// Payload bits delivered (non-zero only on CRC success).
    pub delivered_bits: usize,
    /// Transmissions of this block so far, including this one.
    pub attempts_used: usize,
    pub crc_ok: bool,
    /// Feedback the receiver generates from the true CRC result.
    pub acknack_sent: AckNackDecision,
    /// Block discarded after its last allowed transmission failed.
    pub dropped: bool,
    /// Decode attempts performed in this step.
    pub decodes: usize,
}

impl SubframeOutcome {
    /// Retransmissions before delivery (`attempts_used - 1`).
    pub fn retransmissions(&self) -> usize {
        self.attempts_used.saturating_sub(1)
    }
}
