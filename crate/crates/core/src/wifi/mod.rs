//! 802.11 frames over a non-HT-style PHY skeleton: 16-bit SERVICE field,
//! PSDU, six tail bits, K = 7 rate-1/2 convolutional code, QPSK.

mod conv;
mod frame;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phy::qpsk_modulate;

pub use conv::{conv_encode, viterbi_decode};
pub use frame::{
    build_ack_frame, build_data_frame, MacFrameControl, WifiFrame, ACK_FRAME_LEN,
    DATA_HEADER_LEN, FCS_LEN, SUBTYPE_ACK, TYPE_CONTROL, TYPE_DATA,
};

pub const SERVICE_BITS: usize = 16;
pub const TAIL_BITS: usize = 6;

/// Uncoded bits carried for a frame of `octets` octets.
pub fn data_field_bits(octets: usize) -> usize {
    SERVICE_BITS + 8 * octets + TAIL_BITS
}

/// QPSK symbols needed for a frame of `octets` octets.
pub fn symbols_for(octets: usize) -> usize {
    data_field_bits(octets)
}

/// SERVICE + PSDU (LSB first per octet) + tail.
pub fn data_field(frame: &WifiFrame) -> Vec<u8> {
    let mut bits = vec![0u8; SERVICE_BITS];
    for &o in frame.octets() {
        bits.extend((0..8).map(|i| (o >> i) & 1));
    }
    bits.extend([0u8; TAIL_BITS]);
    bits
}

/// Convolutionally encoded, QPSK-mapped frame.
pub fn wifi_encode(frame: &WifiFrame) -> Vec<Complex64> {
    let coded = conv_encode(&data_field(frame));
    qpsk_modulate(&coded).expect("rate-1/2 output has even length")
}

/// Soft Viterbi decode of coded-bit LLRs; the frame length follows from the
/// LLR count. Returns the recovered frame and whether its FCS checks.
pub fn wifi_decode(llrs: &[f64]) -> Result<(WifiFrame, bool)> {
    let invalid = || {
        let n = llrs.len() / 2;
        let octets = n.saturating_sub(SERVICE_BITS + TAIL_BITS) / 8;
        Error::LengthMismatch {
            expected: 2 * data_field_bits(octets.max(FCS_LEN + 2)),
            got: llrs.len(),
        }
    };
    if !llrs.len().is_multiple_of(2) {
        return Err(invalid());
    }
    let n = llrs.len() / 2;
    if n < data_field_bits(FCS_LEN + 2) || !(n - SERVICE_BITS - TAIL_BITS).is_multiple_of(8) {
        return Err(invalid());
    }
    let bits = viterbi_decode(llrs);
    let psdu = &bits[SERVICE_BITS..n - TAIL_BITS];
    let octets: Vec<u8> = psdu
        .chunks_exact(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b << i)))
        .collect();
    let frame = WifiFrame::from_octets(octets)?;
    let ok = frame.fcs_ok();
    Ok((frame, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy::qpsk_llrs;

    const RA: [u8; 6] = [0x02, 0, 0, 0, 0, 1];

    #[test]
    fn symbol_count() {
        let f = build_ack_frame(RA);
        assert_eq!(wifi_encode(&f).len(), (8 * 14 + 16 + 6) * 2 / 2);
    }

    #[test]
    fn noiseless_roundtrip() {
        for f in [build_ack_frame(RA), build_data_frame(RA, RA, &[7u8; 100])] {
            let y = wifi_encode(&f);
            let llrs = qpsk_llrs(&y, Complex64::new(1.0, 0.0), 0.1).unwrap();
            let (g, ok) = wifi_decode(&llrs).unwrap();
            assert!(ok);
            assert_eq!(g, f);
        }
    }

    #[test]
    fn deterministic() {
        let f = build_ack_frame(RA);
        assert_eq!(wifi_encode(&f), wifi_encode(&f));
    }

    #[test]
    fn bad_lengths_rejected() {
        assert!(wifi_decode(&[0.0; 3]).is_err());
        assert!(wifi_decode(&[0.0; 10]).is_err());
        assert!(wifi_decode(&vec![0.0; 2 * (16 + 6 + 8 * 14 + 3)]).is_err());
    }
}
