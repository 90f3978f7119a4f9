//! K = 7, rate-1/2 convolutional code (generators 133, 171 octal) with a
//! soft-decision Viterbi decoder.

const STATES: usize = 64;
const G0: u32 = 0o133;
const G1: u32 = 0o171;

#[inline]
fn outputs(state: usize, u: usize) -> (u8, u8) {
    let reg = ((u as u32) << 6) | state as u32;
    (((reg & G0).count_ones() & 1) as u8, ((reg & G1).count_ones() & 1) as u8)
}

#[inline]
fn next_state(state: usize, u: usize) -> usize {
    (u << 5) | (state >> 1)
}

/// Encodes from the all-zero state; two output bits (A, B) per input bit.
pub fn conv_encode(bits: &[u8]) -> Vec<u8> {
    let mut state = 0usize;
    let mut out = Vec::with_capacity(2 * bits.len());
    for &b in bits {
        let (a, c) = outputs(state, b as usize);
        out.push(a);
        out.push(c);
        state = next_state(state, b as usize);
    }
    out
}

/// Maximum-likelihood input sequence for `llrs` (two per input bit,
/// positive favours 0), assuming the encoder starts and ends in state 0.
pub fn viterbi_decode(llrs: &[f64]) -> Vec<u8> {
    let n = llrs.len() / 2;
    const NEG: f64 = f64::NEG_INFINITY;
    let table: Vec<[(u8, u8); 2]> = (0..STATES).map(|s| [outputs(s, 0), outputs(s, 1)]).collect();
    let mut metric = [NEG; STATES];
    metric[0] = 0.0;
    let mut decisions: Vec<u64> = Vec::with_capacity(n);
    for t in 0..n {
        let (la, lb) = (0.5 * llrs[2 * t], 0.5 * llrs[2 * t + 1]);
        let mut next = [NEG; STATES];
        let mut choice = 0u64;
        for (ns, slot) in next.iter_mut().enumerate() {
            let u = ns >> 5;
            let base = (ns & 31) << 1;
            let mut best = NEG;
            for b in 0..2 {
                let s = base | b;
                let m = metric[s];
                if m == NEG {
                    continue;
                }
                let (a, c) = table[s][u];
                let v = m + if a == 0 { la } else { -la } + if c == 0 { lb } else { -lb };
                if v > best {
                    best = v;
                    if b == 1 {
                        choice |= 1 << ns;
                    } else {
                        choice &= !(1 << ns);
                    }
                }
            }
            *slot = best;
        }
        let top = next.iter().copied().fold(NEG, f64::max);
        if top.is_finite() {
            for m in next.iter_mut() {
                *m -= top;
            }
        }
        metric = next;
        decisions.push(choice);
    }
    let mut state = 0usize;
    let mut out = vec![0u8; n];
    for t in (0..n).rev() {
        out[t] = (state >> 5) as u8;
        let b = ((decisions[t] >> state) & 1) as usize;
        state = ((state & 31) << 1) | b;
    }
    out
}
