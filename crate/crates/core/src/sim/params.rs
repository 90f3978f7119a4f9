use serde::{Deserialize, Serialize};

use crate::codec::CodecConfig;
use crate::error::{Error, Result};
use crate::pucch::{LtePucchConfig, NrPucchConfig};

use super::LatencyModel;

/// Modulation-and-coding scheme; all three use QPSK.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Mcs {
    Mcs1,
    Mcs2,
    Mcs3,
}

impl Mcs {
    pub const ALL: [Mcs; 3] = [Mcs::Mcs1, Mcs::Mcs2, Mcs::Mcs3];

    pub fn index(self) -> u8 {
        match self {
            Mcs::Mcs1 => 1,
            Mcs::Mcs2 => 2,
            Mcs::Mcs3 => 3,
        }
    }

    pub fn coding_rate(self) -> f64 {
        match self {
            Mcs::Mcs1 => 0.25,
            Mcs::Mcs2 => 0.5,
            Mcs::Mcs3 => 0.75,
        }
    }
}

impl TryFrom<u8> for Mcs {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Mcs::Mcs1),
            2 => Ok(Mcs::Mcs2),
            3 => Ok(Mcs::Mcs3),
            _ => Err(Error::Config(format!("unknown MCS {v} (expected 1, 2 or 3)"))),
        }
    }
}

impl From<Mcs> for u8 {
    fn from(m: Mcs) -> u8 {
        m.index()
    }
}

impl std::fmt::Display for Mcs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl std::str::FromStr for Mcs {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix("mcs").unwrap_or(&t);
        t.parse::<u8>()
            .map_err(|_| Error::Config(format!("unknown MCS `{s}`")))
            .and_then(Mcs::try_from)
    }
}

/// Simulation parameters. Every field has a default and can be overridden
/// from a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimParams {
    /// Subframes per sweep point (bursts, in burst mode).
    pub n_sf: usize,
    pub n_harq: usize,
    pub max_transmissions: usize,
    pub n_rb_dl: usize,
    pub n_rb_ul: usize,
    pub bandwidth_dl_mhz: f64,
    pub bandwidth_ul_mhz: f64,
    pub duplex: String,
    pub transmission_mode: String,
    /// Data resource elements per resource-block pair after overheads.
    pub data_re_per_rb: usize,
    pub doppler_hz: f64,
    pub codec: CodecConfig,
    pub latency: LatencyModel,
    pub lte_pucch: LtePucchConfig,
    pub nr_pucch: NrPucchConfig,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            n_sf: 500,
            n_harq: 8,
            max_transmissions: 4,
            n_rb_dl: 50,
            n_rb_ul: 6,
            bandwidth_dl_mhz: 10.0,
            bandwidth_ul_mhz: 1.4,
            duplex: "FDD".into(),
            transmission_mode: "SISO".into(),
            data_re_per_rb: 126,
            doppler_hz: 5.0,
            codec: CodecConfig::default(),
            latency: LatencyModel::default(),
            lte_pucch: LtePucchConfig::default(),
            nr_pucch: NrPucchConfig::default(),
        }
    }
}

pub const QPSK_BITS: usize = 2;
pub const CRC_BITS: usize = 24;
pub const TTI_SECONDS: f64 = 1e-3;

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n_sf", self.n_sf),
            ("n_harq", self.n_harq),
            ("max_transmissions", self.max_transmissions),
            ("n_rb_dl", self.n_rb_dl),
            ("data_re_per_rb", self.data_re_per_rb),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if !(self.doppler_hz >= 0.0 && self.doppler_hz.is_finite()) {
            return Err(Error::Config("doppler_hz must be finite and non-negative".into()));
        }
        self.codec.validate()?;
        self.latency.validate()?;
        self.lte_pucch.validate()?;
        self.nr_pucch.validate()?;
        for m in Mcs::ALL {
            if self.g() < CRC_BITS * 2 || self.tb_size(m) + 4 > self.g() {
                return Err(Error::Config(format!("resource grid too small for MCS{m}")));
            }
        }
        Ok(())
    }

    /// Coded bits per downlink subframe, `N_RB * REs * 2`.
    pub fn g(&self) -> usize {
        self.n_rb_dl * self.data_re_per_rb * QPSK_BITS
    }

    /// Payload bits per transport block (CRC excluded).
    pub fn tbs(&self, mcs: Mcs) -> usize {
        ((self.g() as f64 * mcs.coding_rate()).floor() as usize).saturating_sub(CRC_BITS)
    }

    /// Encoder input length (payload + CRC).
    pub fn tb_size(&self, mcs: Mcs) -> usize {
        self.tbs(mcs) + CRC_BITS
    }

    /// One transport block per TTI.
    pub fn th_max_bps(&self, mcs: Mcs) -> f64 {
        self.tbs(mcs) as f64 / TTI_SECONDS
    }
}

/// `th / TH_max * 100`.
pub fn throughput_ratio(th_bps: f64, mcs: Mcs, params: &SimParams) -> f64 {
    100.0 * th_bps / params.th_max_bps(mcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transport_block_sizes() {
        let p = SimParams::default();
        assert_eq!(p.g(), 12600);
        assert_eq!(p.tbs(Mcs::Mcs1), 3126);
        assert_eq!(p.tbs(Mcs::Mcs2), 6276);
        assert_eq!(p.tbs(Mcs::Mcs3), 9426);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn ratio_examples() {
        let p = SimParams::default();
        let max = p.th_max_bps(Mcs::Mcs2);
        assert_eq!(throughput_ratio(max, Mcs::Mcs2, &p), 100.0);
        assert_eq!(throughput_ratio(0.0, Mcs::Mcs2, &p), 0.0);
        assert_eq!(throughput_ratio(max / 4.0, Mcs::Mcs2, &p), 25.0);
    }

    #[test]
    fn mcs_parsing() {
        assert_eq!("2".parse::<Mcs>().unwrap(), Mcs::Mcs2);
        assert_eq!("MCS3".parse::<Mcs>().unwrap(), Mcs::Mcs3);
        assert!("4".parse::<Mcs>().is_err());
    }

    #[test]
    fn zero_subframes_rejected() {
        let p = SimParams {
            n_sf: 0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }
}
