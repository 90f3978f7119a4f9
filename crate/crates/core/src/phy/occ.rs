use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Spreading length of an orthogonal cover code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OccLength {
    Three,
    Four,
}

impl OccLength {
    pub fn symbols(self) -> usize {
        match self {
            OccLength::Three => 3,
            OccLength::Four => 4,
        }
    }

    pub fn from_len(len: usize) -> Result<Self> {
        match len {
            3 => Ok(OccLength::Three),
            4 => Ok(OccLength::Four),
            _ => Err(Error::OutOfRange {
                what: "OCC length",
                index: len,
                valid: "3 or 4",
            }),
        }
    }
}

/// Length-4 covers, rows indexed by `I_occ - 1`.
pub const LENGTH4_ROWS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// Length-3 covers as DFT exponents: element `k` is `exp(j 2 pi e_k / 3)`.
pub const LENGTH3_ROWS: [[u8; 3]; 3] = [[0, 0, 0], [0, 1, 2], [0, 2, 1]];

/// Returns the cover for the 1-based index `index`.
pub fn occ_sequence(length: OccLength, index: usize) -> Result<Vec<Complex64>> {
    let out_of_range = || Error::OutOfRange {
        what: "OCC",
        index,
        valid: match length {
            OccLength::Three => "1..=3",
            OccLength::Four => "1..=4",
        },
    };
    if index == 0 {
        return Err(out_of_range());
    }
    match length {
        OccLength::Four => LENGTH4_ROWS
            .get(index - 1)
            .map(|row| row.iter().map(|&w| Complex64::new(w, 0.0)).collect())
            .ok_or_else(out_of_range),
        OccLength::Three => LENGTH3_ROWS
            .get(index - 1)
            .map(|row| {
                row.iter()
                    .map(|&e| Complex64::from_polar(1.0, 2.0 * PI * f64::from(e) / 3.0))
                    .collect()
            })
            .ok_or_else(out_of_range),
    }
}
