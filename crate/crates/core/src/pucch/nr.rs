//! NR PUCCH format 1: one BPSK symbol on a cyclically shifted length-12
//! base sequence, DMRS on every even symbol, and time-domain covers of
//! length 3 (first hop) and 4 (second hop) over the data symbols.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phy::{occ_sequence, CellKind, OccLength, ResourceGrid, NUM_SUBCARRIERS, NUM_SYMBOLS};

use super::{equalize, AckNackDecision};

pub const DMRS_SYMBOLS: [usize; 7] = [0, 2, 4, 6, 8, 10, 12];
pub const DATA_SYMBOLS: [usize; 7] = [1, 3, 5, 7, 9, 11, 13];
/// First symbol of the second frequency hop.
pub const SECOND_HOP_START: usize = 7;
pub const DEFAULT_THRESHOLD: f64 = 0.22;

const SHIPPED_PHI_TABLE: &str = include_str!("../../data/phi_table.txt");

/// Phase exponents of the length-12 base sequences, one row per group `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    rows: Vec<[i8; NUM_SUBCARRIERS]>,
}

impl PhiTable {
    /// Parses whitespace-separated rows of twelve integers; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let vals: Vec<i8> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i8>()
                        .map_err(|e| Error::PhaseTable(format!("line {}: `{t}`: {e}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            let row: [i8; NUM_SUBCARRIERS] = vals.try_into().map_err(|v: Vec<i8>| {
                Error::PhaseTable(format!(
                    "line {}: expected {NUM_SUBCARRIERS} values, got {}",
                    lineno + 1,
                    v.len()
                ))
            })?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::PhaseTable("no rows".into()));
        }
        Ok(Self { rows })
    }

    /// The table shipped with the crate (30 groups).
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_PHI_TABLE).expect("shipped phase table is well formed")
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, u: usize) -> Result<&[i8; NUM_SUBCARRIERS]> {
        self.rows.get(u).ok_or(Error::MissingTableRow(u))
    }
}

impl Default for PhiTable {
    fn default() -> Self {
        Self::shipped()
    }
}

/// `r(n) = exp(j phi(n) pi / 4)`. Length-12 sequences exist only for `v = 0`.
pub fn base_sequence(u: usize, v: usize, table: &PhiTable) -> Result<Vec<Complex64>> {
    if v != 0 {
        return Err(Error::OutOfRange {
            what: "base sequence number",
            index: v,
            valid: "0 for length-12 sequences",
        });
    }
    Ok(table
        .row(u)?
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p as f64 * PI / 4.0))
        .collect())
}

/// `seq'(n) = exp(j alpha n) seq(n)`.
pub fn cyclic_shift(seq: &[Complex64], alpha: f64) -> Vec<Complex64> {
    seq.iter()
        .enumerate()
        .map(|(n, &s)| s * Complex64::from_polar(1.0, alpha * n as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NrPucchConfig {
    pub group: usize,
    pub sequence: usize,
    /// Cyclic-shift phase per OFDM symbol, radians.
    pub alphas: [f64; NUM_SYMBOLS],
    /// 1-based length-3 cover index for the first hop.
    pub occ3_index: usize,
    /// 1-based length-4 cover index for the second hop.
    pub occ4_index: usize,
    pub threshold: f64,
    /// When set, channel estimates never average across the hop boundary.
    pub intra_slot_hopping: bool,
    #[serde(skip)]
    pub phi_table: Arc<PhiTable>,
}

impl Default for NrPucchConfig {
    fn default() -> Self {
        Self {
            group: 0,
            sequence: 0,
            alphas: [0.0; NUM_SYMBOLS],
            occ3_index: 1,
            occ4_index: 1,
            threshold: DEFAULT_THRESHOLD,
            intra_slot_hopping: true,
            phi_table: Arc::new(PhiTable::shipped()),
        }
    }
}

impl NrPucchConfig {
    /// Draws a cyclic shift `2 pi k / 12` per symbol from `rng`.
    pub fn with_random_shifts<R: Rng + ?Sized>(mut self, rng: &mut R) -> Self {
        for a in self.alphas.iter_mut() {
            *a = 2.0 * PI * rng.random_range(0..NUM_SUBCARRIERS) as f64 / NUM_SUBCARRIERS as f64;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        base_sequence(self.group, self.sequence, &self.phi_table)?;
        occ_sequence(OccLength::Three, self.occ3_index)?;
        occ_sequence(OccLength::Four, self.occ4_index)?;
        Ok(())
    }

    fn shifted(&self, base: &[Complex64], symbol: usize) -> Vec<Complex64> {
        cyclic_shift(base, self.alphas[symbol])
    }
}

fn hop_of(symbol: usize) -> usize {
    (symbol >= SECOND_HOP_START) as usize
}

/// Resource grid carrying `bit`.
pub fn encode_format1(bit: u8, cfg: &NrPucchConfig) -> Result<ResourceGrid> {
    if bit > 1 {
        return Err(Error::NonBinary(bit));
    }
    cfg.validate()?;
    let base = base_sequence(cfg.group, cfg.sequence, &cfg.phi_table)?;
    let w3 = occ_sequence(OccLength::Three, cfg.occ3_index)?;
    let w4 = occ_sequence(OccLength::Four, cfg.occ4_index)?;
    let x = if bit == 0 { 1.0 } else { -1.0 };
    let mut grid = ResourceGrid::new();
    for (pos, &l) in DATA_SYMBOLS.iter().enumerate() {
        let w = if pos < 3 { w3[pos] } else { w4[pos - 3] };
        for (n, r) in cfg.shifted(&base, l).into_iter().enumerate() {
            grid.set(n, l, x * r * w, CellKind::Data);
        }
    }
    for &l in &DMRS_SYMBOLS {
        for (n, r) in cfg.shifted(&base, l).into_iter().enumerate() {
            grid.set(n, l, r, CellKind::Dmrs);
        }
    }
    Ok(grid)
}

/// LS estimate per DMRS symbol; each data symbol takes the mean of its
/// adjacent DMRS estimates (restricted to its own hop when hopping is on).
pub fn estimate_channel_nr(rx: &ResourceGrid, cfg: &NrPucchConfig) -> Result<Vec<Complex64>> {
    let base = base_sequence(cfg.group, cfg.sequence, &cfg.phi_table)?;
    let mut ls: [Option<Complex64>; NUM_SYMBOLS] = [None; NUM_SYMBOLS];
    for &l in &DMRS_SYMBOLS {
        if !(0..NUM_SUBCARRIERS).all(|n| rx.kind(n, l) == CellKind::Dmrs) {
            continue;
        }
        let r = cfg.shifted(&base, l);
        let sum: Complex64 = (0..NUM_SUBCARRIERS).map(|n| rx.get(n, l) * r[n].conj()).sum();
        ls[l] = Some(sum / NUM_SUBCARRIERS as f64);
    }
    if ls.iter().all(Option::is_none) {
        return Err(Error::MissingDmrs);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); NUM_SYMBOLS];
    for l in 0..NUM_SYMBOLS {
        if let Some(h) = ls[l] {
            out[l] = h;
            continue;
        }
        let neighbours: Vec<Complex64> = [l.checked_sub(1), Some(l + 1)]
            .into_iter()
            .flatten()
            .filter(|&j| j < NUM_SYMBOLS)
            .filter(|&j| !cfg.intra_slot_hopping || hop_of(j) == hop_of(l))
            .filter_map(|j| ls[j])
            .collect();
        if neighbours.is_empty() {
            return Err(Error::MissingDmrs);
        }
        out[l] = neighbours.iter().sum::<Complex64>() / neighbours.len() as f64;
    }
    Ok(out)
}

/// Normalised correlation `c` of the equalised data cells with the bit-1
/// reference, and the real part of their mean matched-filter output.
pub fn correlation(
    rx: &ResourceGrid,
    cfg: &NrPucchConfig,
    h_est: &[Complex64],
) -> Result<(f64, f64)> {
    if h_est.len() != NUM_SYMBOLS {
        return Err(Error::LengthMismatch {
            expected: NUM_SYMBOLS,
            got: h_est.len(),
        });
    }
    let s1 = encode_format1(1, cfg)?;
    if !rx.same_layout(&s1) {
        return Err(Error::GridMismatch);
    }
    let eq = equalize(rx.cells(), h_est);
    let mut cross = Complex64::new(0.0, 0.0);
    let mut ey = 0.0;
    let mut es = 0.0;
    let mut count = 0usize;
    for (i, s) in s1.cells().iter().enumerate() {
        if rx.kind(i % NUM_SUBCARRIERS, i / NUM_SUBCARRIERS) != CellKind::Data {
            continue;
        }
        cross += eq[i] * s.conj();
        ey += eq[i].norm_sqr();
        es += s.norm_sqr();
        count += 1;
    }
    let c = cross.norm() / (ey * es).sqrt();
    Ok((c, cross.re / count as f64))
}

/// ACK/NACK from the matched-filter sign when `c >= threshold`, else DTX.
pub fn detect_decode_format1(
    rx: &ResourceGrid,
    cfg: &NrPucchConfig,
    h_est: &[Complex64],
) -> Result<AckNackDecision> {
    let (c, mf) = correlation(rx, cfg, h_est)?;
    if !(c.is_finite() && mf.is_finite()) || c < cfg.threshold {
        return Ok(AckNackDecision::Dtx);
    }
    Ok(if mf > 0.0 {
        AckNackDecision::Ack
    } else {
        AckNackDecision::Nack
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Domain, SeedTree};

    #[test]
    fn shipped_table_shape() {
        let t = PhiTable::shipped();
        assert_eq!(t.len(), 30);
        assert!(t.rows.iter().flatten().all(|v| [-3, -1, 1, 3].contains(v)));
        assert_eq!(t.row(30), Err(Error::MissingTableRow(30)));
    }

    #[test]
    fn parse_errors() {
        assert!(PhiTable::parse("").is_err());
        assert!(PhiTable::parse("1 2 3").is_err());
        assert!(PhiTable::parse("1 2 3 4 5 6 7 8 9 10 11 x").is_err());
    }

    #[test]
    fn base_sequence_examples() {
        let zeros = PhiTable::parse("0 0 0 0 0 0 0 0 0 0 0 0\n0 4 0 4 0 4 0 4 0 4 0 4").unwrap();
        let r = base_sequence(0, 0, &zeros).unwrap();
        assert!(r.iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-15));
        let r = base_sequence(1, 0, &zeros).unwrap();
        for (n, c) in r.iter().enumerate() {
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((c - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
        let t = PhiTable::shipped();
        for u in 0..30 {
            assert!(base_sequence(u, 0, &t).unwrap().iter().all(|c| (c.norm() - 1.0).abs() < 1e-12));
        }
        assert!(base_sequence(0, 1, &t).is_err());
    }

    #[test]
    fn cyclic_shift_examples() {
        let seq: Vec<Complex64> = (0..12).map(|n| Complex64::new(1.0 + n as f64, 0.5)).collect();
        assert_eq!(cyclic_shift(&seq, 0.0), seq);
        let s = cyclic_shift(&seq, PI);
        assert!((s[1] + seq[1]).norm() < 1e-12);
        let e0: f64 = seq.iter().map(|c| c.norm_sqr()).sum();
        let e1: f64 = s.iter().map(|c| c.norm_sqr()).sum();
        assert!((e0 - e1).abs() < 1e-9);
    }

    #[test]
    fn layout_counts_and_negation() {
        let cfg = NrPucchConfig::default();
        let g0 = encode_format1(0, &cfg).unwrap();
        let g1 = encode_format1(1, &cfg).unwrap();
        assert_eq!(g0.count(CellKind::Data), 84);
        assert_eq!(g0.count(CellKind::Dmrs), 84);
        for i in 0..168 {
            if g0.kind(i % 12, i / 12) == CellKind::Data {
                assert_eq!(g0.cells()[i], -g1.cells()[i]);
            } else {
                assert_eq!(g0.cells()[i], g1.cells()[i]);
            }
        }
    }

    #[test]
    fn exact_rx_decisions() {
        let cfg = NrPucchConfig::default();
        let ones = vec![Complex64::new(1.0, 0.0); 14];
        let g1 = encode_format1(1, &cfg).unwrap();
        let (c, _) = correlation(&g1, &cfg, &ones).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        assert_eq!(detect_decode_format1(&g1, &cfg, &ones).unwrap(), AckNackDecision::Ack);
        let g0 = encode_format1(0, &cfg).unwrap();
        assert_eq!(detect_decode_format1(&g0, &cfg, &ones).unwrap(), AckNackDecision::Nack);
    }

    #[test]
    fn noiseless_roundtrip_all_configs() {
        let tree = SeedTree::new(5);
        for u in [0usize, 7, 29] {
            for occ3 in 1..=3 {
                for occ4 in 1..=4 {
                    for hopping in [false, true] {
                        let mut rng = tree.stream(Domain::CyclicShift, &[u as u64, occ3 as u64, occ4 as u64]);
                        let cfg = NrPucchConfig {
                            group: u,
                            occ3_index: occ3,
                            occ4_index: occ4,
                            intra_slot_hopping: hopping,
                            ..Default::default()
                        }
                        .with_random_shifts(&mut rng);
                        for bit in 0..2 {
                            let g = encode_format1(bit, &cfg).unwrap();
                            let h = estimate_channel_nr(&g, &cfg).unwrap();
                            assert_eq!(
                                detect_decode_format1(&g, &cfg, &h).unwrap(),
                                AckNackDecision::from_bit(bit)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ramp_channel_midpoint() {
        let cfg = NrPucchConfig {
            intra_slot_hopping: false,
            ..Default::default()
        };
        let g = encode_format1(0, &cfg).unwrap();
        let h = |l: usize| Complex64::new(0.5 + 0.1 * l as f64, -0.05 * l as f64);
        let cells: Vec<Complex64> = g.cells().iter().enumerate().map(|(i, c)| c * h(i / 12)).collect();
        let est = estimate_channel_nr(&g.with_values(cells), &cfg).unwrap();
        for l in [1usize, 3, 5, 7, 9, 11] {
            assert!((est[l] - (h(l - 1) + h(l + 1)) / 2.0).norm() < 1e-12);
        }
        assert!((est[13] - h(12)).norm() < 1e-12);
    }

    #[test]
    fn hopping_keeps_estimates_within_hop() {
        let cfg = NrPucchConfig::default();
        let g = encode_format1(0, &cfg).unwrap();
        let h = |l: usize| if l < SECOND_HOP_START { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
        let cells: Vec<Complex64> = g.cells().iter().enumerate().map(|(i, c)| c * h(i / 12)).collect();
        let est = estimate_channel_nr(&g.with_values(cells), &cfg).unwrap();
        for (l, e) in est.iter().enumerate() {
            assert!((e - h(l)).norm() < 1e-12, "symbol {l}");
        }
    }

    #[test]
    fn global_phase_invariance() {
        let cfg = NrPucchConfig::default();
        let g = encode_format1(1, &cfg).unwrap();
        let rot = Complex64::from_polar(1.0, 2.1);
        let rx = g.with_values(g.cells().iter().map(|c| c * rot).collect());
        let h = estimate_channel_nr(&rx, &cfg).unwrap();
        assert_eq!(detect_decode_format1(&rx, &cfg, &h).unwrap(), AckNackDecision::Ack);
    }
}
