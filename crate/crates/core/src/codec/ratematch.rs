//! Circular-buffer rate matching with four redundancy versions.
//!
//! The mother codeword is stored stream-major as `[d0 | d1 | d2]`, each
//! stream `K + 4` long (systematic, parity 1, parity 2, with the twelve
//! trellis-termination bits spread four per stream). Every readout carries the
//! whole systematic stream first, so each redundancy version is decodable on
//! its own; the remaining `G - (K + 4)` bits come from the parity ring, i.e.
//! the interlaced sub-block-interleaved parity streams, starting at a quarter
//! point selected by the RV and wrapping around the ring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const COLUMNS: usize = 32;
const COLUMN_PERMUTATION: [usize; COLUMNS] = [
    0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30, 1, 17, 9, 25, 5, 21, 13, 29, 3,
    19, 11, 27, 7, 23, 15, 31,
];

/// Transmission-level rate-matching parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateMatchSpec {
    /// Coded bits available per transmission.
    pub g: usize,
    /// Information bits including the CRC.
    pub tb_size: usize,
    pub rv: u8,
}

impl RateMatchSpec {
    pub fn new(g: usize, tb_size: usize, rv: u8) -> Result<Self> {
        let spec = Self { g, tb_size, rv };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tb_size == 0 {
            return Err(Error::Empty("transport block"));
        }
        if self.rv > 3 {
            return Err(Error::OutOfRange {
                what: "redundancy version",
                index: self.rv as usize,
                valid: "0..=3",
            });
        }
        if self.g < self.tb_size + 4 {
            return Err(Error::UncodeableRate {
                tb_size: self.tb_size,
                g: self.g,
            });
        }
        Ok(())
    }
}

/// Readout patterns for one `(K, G)` pair.
#[derive(Debug, Clone)]
pub struct RateMatcher {
    k: usize,
    g: usize,
    ring: Vec<usize>,
}

/// Length of one mother-code stream for `k` information bits.
pub fn stream_len(k: usize) -> usize {
    k + 4
}

/// Sub-block interleaver of one stream; `None` marks a dummy (null) slot.
fn sub_block(d: usize, offset: usize, shifted: bool) -> Vec<Option<usize>> {
    let rows = d.div_ceil(COLUMNS);
    let k_pi = rows * COLUMNS;
    let nulls = k_pi - d;
    let slot = |pos: usize| (pos >= nulls).then(|| offset + pos - nulls);
    if !shifted {
        // Column-wise readout of the row-filled matrix after column permutation.
        let mut out = Vec::with_capacity(k_pi);
        for &col in &COLUMN_PERMUTATION {
            for r in 0..rows {
                out.push(slot(r * COLUMNS + col));
            }
        }
        out
    } else {
        (0..k_pi)
            .map(|k| {
                let pos = (COLUMN_PERMUTATION[k / rows] + COLUMNS * (k % rows) + 1) % k_pi;
                slot(pos)
            })
            .collect()
    }
}

impl RateMatcher {
    pub fn new(k: usize, g: usize) -> Result<Self> {
        RateMatchSpec::new(g, k, 0)?;
        let d = stream_len(k);
        let v1 = sub_block(d, d, false);
        let v2 = sub_block(d, 2 * d, true);
        let ring: Vec<usize> = v1
            .iter()
            .zip(&v2)
            .flat_map(|(a, b)| [*a, *b])
            .flatten()
            .collect();
        debug_assert_eq!(ring.len(), 2 * d);
        Ok(Self { k, g, ring })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Mother-codeword length `3 (K + 4)`.
    pub fn mother_len(&self) -> usize {
        3 * stream_len(self.k)
    }

    /// Ring offset where redundancy version `rv` starts reading parity.
    pub fn rv_offset(&self, rv: u8) -> usize {
        rv as usize * self.ring.len() / 4
    }

    /// Mother-codeword index carried by each of the `G` transmitted bits.
    pub fn positions(&self, rv: u8) -> Result<Vec<usize>> {
        if rv > 3 {
            return Err(Error::OutOfRange {
                what: "redundancy version",
                index: rv as usize,
                valid: "0..=3",
            });
        }
        let d = stream_len(self.k);
        let start = self.rv_offset(rv);
        let n = self.ring.len();
        let mut out: Vec<usize> = (0..d).collect();
        out.extend((0..self.g - d).map(|i| self.ring[(start + i) % n]));
        Ok(out)
    }
}

/// Soft mother-codeword accumulator.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularSoftBuffer {
    llrs: Vec<f64>,
    filled: Vec<bool>,
    deposits: usize,
}

impl CircularSoftBuffer {
    pub fn new(mother_len: usize) -> Self {
        Self {
            llrs: vec![0.0; mother_len],
            filled: vec![false; mother_len],
            deposits: 0,
        }
    }

    pub fn llrs(&self) -> &[f64] {
        &self.llrs
    }

    pub fn fill_mask(&self) -> &[bool] {
        &self.filled
    }

    pub fn filled_count(&self) -> usize {
        self.filled.iter().filter(|&&f| f).count()
    }

    pub fn deposits(&self) -> usize {
        self.deposits
    }

    pub fn is_empty(&self) -> bool {
        self.deposits == 0
    }

    pub fn clear(&mut self) {
        self.llrs.fill(0.0);
        self.filled.fill(false);
        self.deposits = 0;
    }

    /// Positionwise addition of `llrs[i]` into `positions[i]`.
    pub fn accumulate(&mut self, positions: &[usize], llrs: &[f64]) -> Result<()> {
        if positions.len() != llrs.len() {
            return Err(Error::LengthMismatch {
                expected: positions.len(),
                got: llrs.len(),
            });
        }
        for (&p, &l) in positions.iter().zip(llrs) {
            self.llrs[p] += l;
            self.filled[p] = true;
        }
        self.deposits += 1;
        Ok(())
    }
}
