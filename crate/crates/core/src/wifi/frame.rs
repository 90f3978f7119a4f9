use crate::error::{Error, Result};
use crate::phy::crc32_ieee;

pub const FCS_LEN: usize = 4;
pub const ACK_FRAME_LEN: usize = 14;
pub const DATA_HEADER_LEN: usize = 24;

pub const TYPE_CONTROL: u8 = 0b01;
pub const TYPE_DATA: u8 = 0b10;
/// Subtype value whose bits B4..B7 read 1, 0, 1, 1.
pub const SUBTYPE_ACK: u8 = 0b1101;

/// First two octets of a MAC header. Bit `Bi` of the field is bit `i` of the
/// little-endian 16-bit value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MacFrameControl {
    pub protocol_version: u8,
    pub frame_type: u8,
    pub subtype: u8,
    /// Flag bits B8..B15 (to/from DS, more fragments, retry, ...).
    pub flags: u8,
}

impl MacFrameControl {
    pub fn ack() -> Self {
        Self {
            frame_type: TYPE_CONTROL,
            subtype: SUBTYPE_ACK,
            ..Default::default()
        }
    }

    pub fn data() -> Self {
        Self {
            frame_type: TYPE_DATA,
            ..Default::default()
        }
    }

    pub fn to_octets(self) -> [u8; 2] {
        [
            (self.protocol_version & 0b11) | ((self.frame_type & 0b11) << 2) | ((self.subtype & 0xF) << 4),
            self.flags,
        ]
    }

    pub fn from_octets(o: [u8; 2]) -> Self {
        Self {
            protocol_version: o[0] & 0b11,
            frame_type: (o[0] >> 2) & 0b11,
            subtype: o[0] >> 4,
            flags: o[1],
        }
    }

    /// Bits B4..B7 in transmission order.
    pub fn subtype_bits(self) -> [u8; 4] {
        std::array::from_fn(|i| (self.subtype >> i) & 1)
    }

    pub fn is_ack(self) -> bool {
        self.frame_type == TYPE_CONTROL && self.subtype == SUBTYPE_ACK
    }
}

/// A MAC frame including its trailing frame check sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WifiFrame {
    octets: Vec<u8>,
}

impl WifiFrame {
    /// Appends the FCS to `body`.
    pub fn with_fcs(body: &[u8]) -> Self {
        let mut octets = body.to_vec();
        octets.extend_from_slice(&crc32_ieee(body).to_le_bytes());
        Self { octets }
    }

    /// Wraps received octets (FCS included) without checking them.
    pub fn from_octets(octets: Vec<u8>) -> Result<Self> {
        if octets.len() < FCS_LEN + 2 {
            return Err(Error::TooShort {
                need: 8 * (FCS_LEN + 2),
                got: 8 * octets.len(),
            });
        }
        Ok(Self { octets })
    }

    pub fn octets(&self) -> &[u8] {
        &self.octets
    }

    pub fn len(&self) -> usize {
        self.octets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.octets.is_empty()
    }

    pub fn body(&self) -> &[u8] {
        &self.octets[..self.octets.len() - FCS_LEN]
    }

    pub fn fcs(&self) -> u32 {
        let tail = &self.octets[self.octets.len() - FCS_LEN..];
        u32::from_le_bytes(tail.try_into().expect("four octets"))
    }

    pub fn fcs_ok(&self) -> bool {
        crc32_ieee(self.body()) == self.fcs()
    }

    pub fn frame_control(&self) -> MacFrameControl {
        MacFrameControl::from_octets([self.octets[0], self.octets[1]])
    }
}

/// 14-octet ACK: frame control, duration, receiver address, FCS.
pub fn build_ack_frame(receiver: [u8; 6]) -> WifiFrame {
    let mut body = Vec::with_capacity(ACK_FRAME_LEN - FCS_LEN);
    body.extend_from_slice(&MacFrameControl::ack().to_octets());
    body.extend_from_slice(&[0, 0]);
    body.extend_from_slice(&receiver);
    WifiFrame::with_fcs(&body)
}

/// Data frame with a 24-octet header, `payload` as MSDU and FCS.
pub fn build_data_frame(receiver: [u8; 6], transmitter: [u8; 6], payload: &[u8]) -> WifiFrame {
    let mut body = Vec::with_capacity(DATA_HEADER_LEN + payload.len());
    body.extend_from_slice(&MacFrameControl::data().to_octets());
    body.extend_from_slice(&[0, 0]);
    body.extend_from_slice(&receiver);
    body.extend_from_slice(&transmitter);
    body.extend_from_slice(&transmitter);
    body.extend_from_slice(&[0, 0]);
    body.extend_from_slice(payload);
    WifiFrame::with_fcs(&body)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RA: [u8; 6] = [0x02, 0x11, 0x22, 0x33, 0x44, 0x55];

    #[test]
    fn ack_frame_shape() {
        let f = build_ack_frame(RA);
        assert_eq!(f.len(), 2 + 2 + 6 + 4);
        assert_eq!(f.octets()[0], 0xD4);
        assert_eq!(f.frame_control().subtype_bits(), [1, 0, 1, 1]);
        assert!(f.frame_control().is_ack());
        assert!(f.fcs_ok());
    }

    #[test]
    fn fcs_detects_every_single_bit_flip() {
        let f = build_ack_frame(RA);
        for i in 0..8 * f.len() {
            let mut o = f.octets().to_vec();
            o[i / 8] ^= 1 << (i % 8);
            assert!(!WifiFrame::from_octets(o).unwrap().fcs_ok(), "bit {i}");
        }
    }

    #[test]
    fn data_frame_length() {
        let f = build_data_frame(RA, RA, &[0xAB; 1500]);
        assert_eq!(f.len(), 1528);
        assert!(f.fcs_ok());
        assert!(!f.frame_control().is_ack());
    }

    #[test]
    fn frame_control_roundtrip() {
        let fc = MacFrameControl {
            protocol_version: 0,
            frame_type: 2,
            subtype: 8,
            flags: 0x41,
        };
        assert_eq!(MacFrameControl::from_octets(fc.to_octets()), fc);
    }
}
