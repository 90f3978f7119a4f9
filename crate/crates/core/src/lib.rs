//! Deterministic link-level simulator for cellular and Wi-Fi remote-control links.
//!
//! The crate models the downlink data channel with turbo coding and HARQ
//! (no combining, chase combining, incremental redundancy and burst
//! repetition), the uplink feedback channels that carry ACK/NACK (LTE PUCCH
//! format 1a, NR PUCCH format 1, the 802.11 ACK frame), and the experiment
//! drivers that turn those pieces into throughput, BLER, latency and
//! channel-estimation sweeps.
//!
//! Every random draw comes from a [`rng::SeedTree`] substream, so any sweep
//! point can be reproduced in isolation from the master seed.

pub mod channel;
pub mod codec;
pub mod error;
pub mod harq;
pub mod phy;
pub mod pucch;
pub mod rng;
pub mod sim;
pub mod wifi;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use harq::{HarqPool, HarqProcess, HarqScheme, SubframeOutcome};
pub use pucch::AckNackDecision;
pub use sim::{LatencyModel, Mcs, SimParams, SweepReport, SweepRow};
