//! Shared physical-layer primitives: constellation mapping, soft demapping,
//! CRC, orthogonal cover codes and the per-RB-pair resource grid.

mod crc;
mod grid;
mod modulation;
mod occ;

pub use crc::{crc24_attach, crc24_check, crc24_remainder, crc32_ieee, CRC24_LEN};
pub use grid::{CellKind, ResourceGrid, NUM_SUBCARRIERS, NUM_SYMBOLS};
pub use modulation::{
    bpsk_modulate, hard_decide_bpsk, hard_decide_qpsk, llr_awgn, qpsk_llrs, qpsk_modulate,
    validate_bits,
};
pub use occ::{occ_sequence, OccLength, LENGTH3_ROWS, LENGTH4_ROWS};

/// Soft value of a coded bit, natural log, positive favours bit 0.
pub type Llr = f64;
