//! Uplink ACK/NACK feedback channels: LTE PUCCH format 1a and NR PUCCH
//! format 1, with their DMRS channel estimators and detectors.

pub mod lte;
pub mod nr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lte::{decode_format1a, encode_format1a, estimate_channel_lte, LteInterpolation, LtePucchConfig};
pub use nr::{
    base_sequence, cyclic_shift, detect_decode_format1, encode_format1, estimate_channel_nr,
    NrPucchConfig, PhiTable,
};

/// Three-valued feedback decision. Bit 1 is ACK, bit 0 is NACK.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AckNackDecision {
    Ack,
    Nack,
    Dtx,
}

impl AckNackDecision {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 1 {
            AckNackDecision::Ack
        } else {
            AckNackDecision::Nack
        }
    }

    pub fn from_crc(ok: bool) -> Self {
        Self::from_bit(ok as u8)
    }

    /// The carried bit; `None` for DTX.
    pub fn bit(self) -> Option<u8> {
        match self {
            AckNackDecision::Ack => Some(1),
            AckNackDecision::Nack => Some(0),
            AckNackDecision::Dtx => None,
        }
    }
}

/// Which cellular feedback channel carries ACK/NACK.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackStandard {
    Lte,
    Nr,
}

impl FeedbackStandard {
    pub fn label(self) -> &'static str {
        match self {
            FeedbackStandard::Lte => "lte",
            FeedbackStandard::Nr => "nr",
        }
    }
}

impl std::fmt::Display for FeedbackStandard {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for FeedbackStandard {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lte" | "4g" => Ok(FeedbackStandard::Lte),
            "nr" | "5g" => Ok(FeedbackStandard::Nr),
            other => Err(Error::Config(format!("unknown standard `{other}` (expected lte or nr)"))),
        }
    }
}

/// `sqrt(mean |est - truth|^2)`.
pub fn channel_est_rmse(estimates: &[Complex64], truths: &[Complex64]) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::LengthMismatch {
            expected: truths.len(),
            got: estimates.len(),
        });
    }
    if estimates.is_empty() {
        return Err(Error::Empty("estimate vector"));
    }
    let sum: f64 = estimates
        .iter()
        .zip(truths)
        .map(|(e, t)| (e - t).norm_sqr())
        .sum();
    Ok((sum / estimates.len() as f64).sqrt())
}

/// Divides every cell of symbol `l` by `h_est[l]`.
pub(crate) fn equalize(cells: &[Complex64], h_est: &[Complex64]) -> Vec<Complex64> {
    use crate::phy::NUM_SUBCARRIERS;
    cells
        .iter()
        .enumerate()
        .map(|(i, &y)| y / h_est[i / NUM_SUBCARRIERS])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rmse_examples() {
        let h = vec![Complex64::new(0.3, -0.2); 5];
        assert_eq!(channel_est_rmse(&h, &h).unwrap(), 0.0);
        let off: Vec<Complex64> = h.iter().map(|x| x + Complex64::new(0.06, 0.08)).collect();
        assert!((channel_est_rmse(&off, &h).unwrap() - 0.1).abs() < 1e-12);
        assert!(channel_est_rmse(&h[..2], &h).is_err());
        assert!(channel_est_rmse(&[], &[]).is_err());
    }

    #[test]
    fn decision_bits() {
        assert_eq!(AckNackDecision::from_bit(1), AckNackDecision::Ack);
        assert_eq!(AckNackDecision::from_crc(false), AckNackDecision::Nack);
        assert_eq!(AckNackDecision::Dtx.bit(), None);
    }
}
