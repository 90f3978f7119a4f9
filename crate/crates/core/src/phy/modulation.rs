use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Rejects empty or non-binary input.
pub fn validate_bits(bits: &[u8]) -> Result<()> {
    if bits.is_empty() {
        return Err(Error::Empty("bit sequence"));
    }
    match bits.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::NonBinary(b)),
        None => Ok(()),
    }
}

/// Maps bit 0 to +1 and bit 1 to -1 on the real axis.
pub fn bpsk_modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    validate_bits(bits)?;
    Ok(bits
        .iter()
        .map(|&b| Complex64::new(1.0 - 2.0 * f64::from(b), 0.0))
        .collect())
}

/// Gray-mapped QPSK: the first bit of each pair drives I, the second drives Q,
/// with bit 0 mapping to the positive half-axis.
pub fn qpsk_modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    validate_bits(bits)?;
    if !bits.len().is_multiple_of(2) {
        return Err(Error::OddLength(bits.len()));
    }
    Ok(bits
        .chunks_exact(2)
        .map(|pair| {
            Complex64::new(
                (1.0 - 2.0 * f64::from(pair[0])) * FRAC_1_SQRT_2,
                (1.0 - 2.0 * f64::from(pair[1])) * FRAC_1_SQRT_2,
            )
        })
        .collect())
}

/// Per-axis BPSK log-likelihood ratio `2y / noise_var` for the I and Q
/// components of `symbol`.
pub fn llr_awgn(symbol: Complex64, noise_var: f64) -> Result<(f64, f64)> {
    if !noise_var.is_finite() || noise_var <= 0.0 {
        return Err(Error::InvalidNoiseVariance(noise_var));
    }
    Ok((2.0 * symbol.re / noise_var, 2.0 * symbol.im / noise_var))
}

/// Soft demapper for unit-power QPSK received through a flat gain `gain` with
/// complex noise of total variance `noise_var`.
///
/// Each axis is an independent BPSK signal of amplitude `|h|^2 / sqrt(2)`
/// after matched filtering with noise variance `|h|^2 noise_var / 2`, which
/// gives `LLR = 2 sqrt(2) Re(h* y) / noise_var` (and likewise for Q).
pub fn qpsk_llrs(received: &[Complex64], gain: Complex64, noise_var: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(received.len() * 2);
    let conj = gain.conj();
    for &y in received {
        let (li, lq) = llr_awgn(conj * y * std::f64::consts::SQRT_2, noise_var)?;
        out.push(li);
        out.push(lq);
    }
    Ok(out)
}

/// Hard decision on the real axis (ties go to bit 0).
pub fn hard_decide_bpsk(symbols: &[Complex64]) -> Vec<u8> {
    symbols.iter().map(|s| u8::from(s.re < 0.0)).collect()
}

pub fn hard_decide_qpsk(symbols: &[Complex64]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|s| [u8::from(s.re < 0.0), u8::from(s.im < 0.0)])
        .collect()
}
