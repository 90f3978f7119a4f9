use crate::error::{Error, Result};

pub const CRC24_LEN: usize = 24;

const CRC24_POLY: u32 = 0x86_4CFB;
// Non-zero preset so that an all-zero block never passes the check.
const CRC24_INIT: u32 = 0xB7_04CE;
const CRC24_MASK: u32 = 0xFF_FFFF;

/// Runs the CRC-24 shift register over `bits` (MSB-first, non-reflected).
pub fn crc24_remainder(bits: &[u8]) -> u32 {
    bits.iter().fold(CRC24_INIT, |reg, &b| {
        let top = (reg >> 23) & 1;
        let reg = (reg << 1) & CRC24_MASK;
        if top ^ u32::from(b & 1) == 1 {
            reg ^ CRC24_POLY
        } else {
            reg
        }
    })
}

/// Appends the 24 parity bits, most significant first.
pub fn crc24_attach(payload: &[u8]) -> Result<Vec<u8>> {
    if payload.is_empty() {
        return Err(Error::Empty("CRC payload"));
    }
    let crc = crc24_remainder(payload);
    let mut out = Vec::with_capacity(payload.len() + CRC24_LEN);
    out.extend_from_slice(payload);
    out.extend((0..CRC24_LEN).rev().map(|i| ((crc >> i) & 1) as u8));
    Ok(out)
}

/// `Ok(true)` iff the register is zero after the whole block.
pub fn crc24_check(block: &[u8]) -> Result<bool> {
    if block.len() < CRC24_LEN {
        return Err(Error::TooShort {
            need: CRC24_LEN,
            got: block.len(),
        });
    }
    Ok(crc24_remainder(block) == 0)
}

/// IEEE 802.3 CRC-32 as used for the 802.11 frame check sequence.
pub fn crc32_ieee(octets: &[u8]) -> u32 {
    !octets.iter().fold(!0u32, |mut crc, &byte| {
        crc ^= u32::from(byte);
        for _ in 0..8 {
            let lsb = crc & 1;
            crc >>= 1;
            if lsb == 1 {
                crc ^= 0xEDB8_8320;
            }
        }
        crc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn attach_then_check() {
        let payload: Vec<u8> = (0..100).map(|i| ((i * 7 + 3) % 5 % 2) as u8).collect();
        let block = crc24_attach(&payload).unwrap();
        assert_eq!(block.len(), 124);
        assert!(crc24_check(&block).unwrap());
        for i in 0..block.len() {
            let mut corrupt = block.clone();
            corrupt[i] ^= 1;
            assert!(!crc24_check(&corrupt).unwrap(), "flip at {i} undetected");
        }
    }

    #[test]
    fn crc_errors() {
        assert_eq!(crc24_attach(&[]), Err(Error::Empty("CRC payload")));
        assert_eq!(
            crc24_check(&[0; 23]),
            Err(Error::TooShort { need: 24, got: 23 })
        );
    }

    #[test]
    fn all_zero_block_fails() {
        assert!(!crc24_check(&[0u8; 200]).unwrap());
    }

    #[test]
    fn crc32_check_value() {
        // Standard check value for "123456789".
        assert_eq!(crc32_ieee(b"123456789"), 0xCBF4_3926);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn detects_single_and_double_errors(
            len in 1usize..4072,
            seed in any::<u64>(),
            a in any::<prop::sample::Index>(),
            b in any::<prop::sample::Index>(),
        ) {
            let payload: Vec<u8> = (0..len)
                .map(|i| ((seed.rotate_left((i % 64) as u32) ^ i as u64) & 1) as u8)
                .collect();
            let block = crc24_attach(&payload).unwrap();
            let i = a.index(block.len());
            let j = b.index(block.len());
            let mut single = block.clone();
            single[i] ^= 1;
            prop_assert!(!crc24_check(&single).unwrap());
            if i != j {
                let mut double = single;
                double[j] ^= 1;
                prop_assert!(!crc24_check(&double).unwrap());
            }
        }
    }
}
