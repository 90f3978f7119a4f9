//! LTE PUCCH format 1a: one BPSK symbol, phase-rotated across twelve
//! subcarriers and spread over four symbols per slot by a length-4 cover;
//! three DMRS symbols in the middle of each slot.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phy::{occ_sequence, CellKind, OccLength, ResourceGrid, NUM_SUBCARRIERS, NUM_SYMBOLS};

use super::{equalize, AckNackDecision};

/// Data symbols per subframe, four per slot.
pub const DATA_SYMBOLS: [usize; 8] = [0, 1, 5, 6, 7, 8, 12, 13];
/// DMRS symbols per subframe, three per slot.
pub const DMRS_SYMBOLS: [usize; 6] = [2, 3, 4, 9, 10, 11];
pub const DEFAULT_THRESHOLD: f64 = 0.83;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LtePucchConfig {
    /// Phase-rotation index `m`, 0..=11.
    pub phase_index: usize,
    /// 1-based length-4 cover index.
    pub occ_index: usize,
    pub threshold: f64,
    pub interpolation: LteInterpolation,
}

/// How DMRS estimates are carried to the data symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LteInterpolation {
    /// Least-squares line through the three DMRS of each slot, evaluated
    /// within that slot only.
    PerSlotLine,
    /// Line through the two slot means (at the slot DMRS centres),
    /// interpolated between and extrapolated beyond them.
    CrossSlotLine,
}

impl Default for LtePucchConfig {
    fn default() -> Self {
        Self {
            phase_index: 0,
            occ_index: 1,
            threshold: DEFAULT_THRESHOLD,
            interpolation: LteInterpolation::PerSlotLine,
        }
    }
}

impl LtePucchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.phase_index > 11 {
            return Err(Error::OutOfRange {
                what: "phase rotation",
                index: self.phase_index,
                valid: "0..=11",
            });
        }
        occ_sequence(OccLength::Four, self.occ_index)?;
        Ok(())
    }

    /// `exp(j m pi n / 6)` for subcarrier `n`.
    fn rotation(&self, n: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.phase_index as f64 * PI * n as f64 / 6.0)
    }
}

fn slot_of(symbol: usize) -> usize {
    symbol / 7
}

/// Resource grid carrying `bit`.
pub fn encode_format1a(bit: u8, cfg: &LtePucchConfig) -> Result<ResourceGrid> {
    cfg.validate()?;
    if bit > 1 {
        return Err(Error::NonBinary(bit));
    }
    let x = if bit == 0 { 1.0 } else { -1.0 };
    let w = occ_sequence(OccLength::Four, cfg.occ_index)?;
    let mut grid = ResourceGrid::new();
    for (pos, &l) in DATA_SYMBOLS.iter().enumerate() {
        for n in 0..NUM_SUBCARRIERS {
            grid.set(n, l, x * cfg.rotation(n) * w[pos % 4], CellKind::Data);
        }
    }
    for &l in &DMRS_SYMBOLS {
        for n in 0..NUM_SUBCARRIERS {
            grid.set(n, l, cfg.rotation(n), CellKind::Dmrs);
        }
    }
    Ok(grid)
}

/// Least-squares estimate per DMRS symbol (averaged over subcarriers), then
/// linear interpolation/extrapolation in time per [`LteInterpolation`].
/// Returns 14 per-symbol estimates.
pub fn estimate_channel_lte(rx: &ResourceGrid, cfg: &LtePucchConfig) -> Result<Vec<Complex64>> {
    let mut slots: Vec<Vec<(f64, Complex64)>> = vec![Vec::new(), Vec::new()];
    for &l in &DMRS_SYMBOLS {
        if !(0..NUM_SUBCARRIERS).all(|n| rx.kind(n, l) == CellKind::Dmrs) {
            continue;
        }
        let sum: Complex64 = (0..NUM_SUBCARRIERS)
            .map(|n| rx.get(n, l) * cfg.rotation(n).conj())
            .sum();
        slots[slot_of(l)].push((l as f64, sum / NUM_SUBCARRIERS as f64));
    }
    if slots.iter().any(Vec::is_empty) {
        return Err(Error::MissingDmrs);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); NUM_SYMBOLS];
    match cfg.interpolation {
        LteInterpolation::PerSlotLine => {
            for (slot, pilots) in slots.iter().enumerate() {
                let (t0, h0, slope) = line_fit(pilots);
                for (l, h) in out.iter_mut().enumerate().filter(|(l, _)| slot_of(*l) == slot) {
                    *h = h0 + slope * (l as f64 - t0);
                }
            }
        }
        LteInterpolation::CrossSlotLine => {
            let centre = |p: &[(f64, Complex64)]| {
                let n = p.len() as f64;
                (p.iter().map(|x| x.0).sum::<f64>() / n, p.iter().map(|x| x.1).sum::<Complex64>() / n)
            };
            let (ta, ha) = centre(&slots[0]);
            let (tb, hb) = centre(&slots[1]);
            let slope = (hb - ha) / (tb - ta);
            for (l, h) in out.iter_mut().enumerate() {
                *h = ha + slope * (l as f64 - ta);
            }
        }
    }
    Ok(out)
}

/// Least-squares line `(t_mean, h_mean, slope)`; flat when only one point.
fn line_fit(pilots: &[(f64, Complex64)]) -> (f64, Complex64, Complex64) {
    let np = pilots.len() as f64;
    let t_mean = pilots.iter().map(|p| p.0).sum::<f64>() / np;
    let h_mean = pilots.iter().map(|p| p.1).sum::<Complex64>() / np;
    let sxx: f64 = pilots.iter().map(|p| (p.0 - t_mean).powi(2)).sum();
    let slope = if sxx > 0.0 {
        pilots.iter().map(|p| (p.1 - h_mean) * (p.0 - t_mean)).sum::<Complex64>() / sxx
    } else {
        Complex64::new(0.0, 0.0)
    };
    (t_mean, h_mean, slope)
}

/// Normalised error metrics `(e_0, e_1)` of the equalised data cells against
/// both hypotheses.
pub fn error_metrics(
    rx: &ResourceGrid,
    cfg: &LtePucchConfig,
    h_est: &[Complex64],
) -> Result<(f64, f64)> {
    if h_est.len() != NUM_SYMBOLS {
        return Err(Error::LengthMismatch {
            expected: NUM_SYMBOLS,
            got: h_est.len(),
        });
    }
    let reference = encode_format1a(0, cfg)?;
    if !rx.same_layout(&reference) {
        return Err(Error::GridMismatch);
    }
    let eq = equalize(rx.cells(), h_est);
    let mut corr = Complex64::new(0.0, 0.0);
    let mut energy = 0.0;
    for (i, s0) in reference.cells().iter().enumerate() {
        let l = i / NUM_SUBCARRIERS;
        if rx.kind(i % NUM_SUBCARRIERS, l) != CellKind::Data {
            continue;
        }
        corr += eq[i] * s0.conj();
        energy += s0.norm_sqr();
    }
    // s_1 = -s_0, so sum((y - s_b) s_b*) / sum|s_b|^2 = +-r - 1.
    let r = corr / energy;
    let one = Complex64::new(1.0, 0.0);
    Ok(((r - one).norm_sqr(), (-r - one).norm_sqr()))
}

/// Hypothesis with the smaller error metric if it is below the threshold,
/// otherwise DTX. Non-finite metrics also yield DTX.
pub fn decode_format1a(
    rx: &ResourceGrid,
    cfg: &LtePucchConfig,
    h_est: &[Complex64],
) -> Result<AckNackDecision> {
    let (e0, e1) = error_metrics(rx, cfg, h_est)?;
    if !(e0.is_finite() && e1.is_finite()) {
        return Ok(AckNackDecision::Dtx);
    }
    let (bit, e) = if e1 < e0 { (1, e1) } else { (0, e0) };
    Ok(if e < cfg.threshold {
        AckNackDecision::from_bit(bit)
    } else {
        AckNackDecision::Dtx
    })
}
