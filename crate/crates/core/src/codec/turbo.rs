//! Rate-1/3 parallel-concatenated convolutional code: two 8-state recursive
//! systematic encoders (feedback 1 + D^2 + D^3, feedforward 1 + D + D^3)
//! joined by a QPP interleaver, each terminated with three tail steps, and an
//! iterative max-log-MAP decoder.

use crate::phy::crc24_check;

use super::qpp::QppInterleaver;

const STATES: usize = 8;
const TAIL: usize = 3;

/// `(next_state, parity)` for `(state, input)`; state bits are `s1 s2 s3`
/// with `s1` the most recent register.
#[inline]
fn step(state: usize, u: u8) -> (usize, u8) {
    let s1 = (state >> 2) & 1;
    let s2 = (state >> 1) & 1;
    let s3 = state & 1;
    let a = (u as usize) ^ s2 ^ s3;
    let parity = (a ^ s1 ^ s3) as u8;
    ((a << 2) | (state >> 1), parity)
}

/// Input that drives the feedback to zero (used for termination).
#[inline]
fn tail_input(state: usize) -> u8 {
    (((state >> 1) ^ state) & 1) as u8
}

struct Trellis {
    next: [[usize; 2]; STATES],
    parity: [[u8; 2]; STATES],
}

const fn build_trellis() -> Trellis {
    let mut next = [[0usize; 2]; STATES];
    let mut parity = [[0u8; 2]; STATES];
    let mut s = 0;
    while s < STATES {
        let mut u = 0;
        while u < 2 {
            let s1 = (s >> 2) & 1;
            let s2 = (s >> 1) & 1;
            let s3 = s & 1;
            let a = u ^ s2 ^ s3;
            parity[s][u] = (a ^ s1 ^ s3) as u8;
            next[s][u] = (a << 2) | (s >> 1);
            u += 1;
        }
        s += 1;
    }
    Trellis { next, parity }
}

static TRELLIS: Trellis = build_trellis();

/// Constituent encoder output: `K` parity bits plus 3 tail (systematic, parity) pairs.
fn rsc_encode(input: impl Iterator<Item = u8>) -> (Vec<u8>, [(u8, u8); TAIL]) {
    let mut state = 0usize;
    let mut parity = Vec::new();
    for u in input {
        let (ns, p) = step(state, u);
        parity.push(p);
        state = ns;
    }
    let mut tail = [(0u8, 0u8); TAIL];
    for t in tail.iter_mut() {
        let u = tail_input(state);
        let (ns, p) = step(state, u);
        *t = (u, p);
        state = ns;
    }
    debug_assert_eq!(state, 0);
    (parity, tail)
}

/// Mother codeword `[d0 | d1 | d2]`, each stream `K + 4` bits.
pub fn encode_mother(bits: &[u8], pi: &QppInterleaver) -> Vec<u8> {
    let k = bits.len();
    let d = k + 4;
    let (z, t1) = rsc_encode(bits.iter().copied());
    let (zp, t2) = rsc_encode((0..k).map(|i| bits[pi.at(i)]));
    let mut out = vec![0u8; 3 * d];
    out[..k].copy_from_slice(bits);
    out[d..d + k].copy_from_slice(&z);
    out[2 * d..2 * d + k].copy_from_slice(&zp);
    let (x, zt) = (t1.map(|t| t.0), t1.map(|t| t.1));
    let (xp, zpt) = (t2.map(|t| t.0), t2.map(|t| t.1));
    let (d0, rest) = out.split_at_mut(d);
    let (d1, d2) = rest.split_at_mut(d);
    d0[k..].copy_from_slice(&[x[0], zt[1], xp[0], zpt[1]]);
    d1[k..].copy_from_slice(&[zt[0], x[2], zpt[0], xp[2]]);
    d2[k..].copy_from_slice(&[x[1], zt[2], xp[1], zpt[2]]);
    out
}

/// Systematic and parity soft inputs of both constituent decoders, tails included.
struct Split {
    sys1: Vec<f64>,
    par1: Vec<f64>,
    sys2: Vec<f64>,
    par2: Vec<f64>,
}

fn split_mother(llrs: &[f64], k: usize, pi: &QppInterleaver) -> Split {
    let d = k + 4;
    let (d0, rest) = llrs.split_at(d);
    let (d1, d2) = rest.split_at(d);
    let mut sys1 = d0[..k].to_vec();
    sys1.extend([d0[k], d2[k], d1[k + 1]]);
    let mut par1 = d1[..k].to_vec();
    par1.extend([d1[k], d0[k + 1], d2[k + 1]]);
    let mut sys2: Vec<f64> = (0..k).map(|i| d0[pi.at(i)]).collect();
    sys2.extend([d0[k + 2], d2[k + 2], d1[k + 3]]);
    let mut par2 = d2[..k].to_vec();
    par2.extend([d1[k + 2], d0[k + 3], d2[k + 3]]);
    Split {
        sys1,
        par1,
        sys2,
        par2,
    }
}

/// Max-log-MAP pass over a terminated trellis. Writes the extrinsic LLR of the
/// first `k` inputs into `extrinsic`. LLRs are positive for bit 0.
fn max_log_map(
    sys: &[f64],
    par: &[f64],
    apriori: &[f64],
    alpha: &mut Vec<[f64; STATES]>,
    extrinsic: &mut [f64],
) {
    let k = apriori.len();
    let n = k + TAIL;
    const NEG: f64 = f64::NEG_INFINITY;
    let t = &TRELLIS;
    let half_sys = |i: usize| 0.5 * (sys[i] + if i < k { apriori[i] } else { 0.0 });

    alpha.clear();
    alpha.resize(n + 1, [NEG; STATES]);
    alpha[0][0] = 0.0;
    for i in 0..n {
        let hs = half_sys(i);
        let hp = 0.5 * par[i];
        let mut next = [NEG; STATES];
        let row = alpha[i];
        for (s, &a) in row.iter().enumerate() {
            if a == NEG {
                continue;
            }
            for u in 0..2 {
                let g = if u == 0 { hs } else { -hs } + if t.parity[s][u] == 0 { hp } else { -hp };
                let ns = t.next[s][u];
                let v = a + g;
                if v > next[ns] {
                    next[ns] = v;
                }
            }
        }
        let norm = next.iter().copied().fold(NEG, f64::max);
        for v in next.iter_mut() {
            *v -= norm;
        }
        alpha[i + 1] = next;
    }

    let mut beta = [NEG; STATES];
    beta[0] = 0.0;
    for i in (0..n).rev() {
        let hs = half_sys(i);
        let hp = 0.5 * par[i];
        let mut prev = [NEG; STATES];
        let mut best = [NEG; 2];
        for s in 0..STATES {
            for u in 0..2 {
                let g = if u == 0 { hs } else { -hs } + if t.parity[s][u] == 0 { hp } else { -hp };
                let b = beta[t.next[s][u]];
                let v = g + b;
                if v > prev[s] {
                    prev[s] = v;
                }
                if i < k {
                    let m = alpha[i][s] + v;
                    if m > best[u] {
                        best[u] = m;
                    }
                }
            }
        }
        if i < k {
            extrinsic[i] = (best[0] - best[1]) - sys[i] - apriori[i];
        }
        let norm = prev.iter().copied().fold(NEG, f64::max);
        for v in prev.iter_mut() {
            *v -= norm;
        }
        beta = prev;
    }
}

/// Decoder result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurboDecoded {
    pub bits: Vec<u8>,
    pub crc_ok: bool,
    pub iterations: usize,
}

/// Iterative decode of a soft mother codeword. With `early_stop`, iteration
/// ends as soon as the hard decision passes the CRC-24 check.
pub fn decode_mother(
    llrs: &[f64],
    k: usize,
    pi: &QppInterleaver,
    iterations: usize,
    extrinsic_scale: f64,
    early_stop: bool,
) -> TurboDecoded {
    let s = split_mother(llrs, k, pi);
    let mut la1 = vec![0.0; k];
    let mut la2 = vec![0.0; k];
    let mut e1 = vec![0.0; k];
    let mut e2 = vec![0.0; k];
    let mut alpha = Vec::new();
    let mut bits = vec![0u8; k];
    let mut crc_ok = false;
    let mut done = 0;
    for it in 0..iterations.max(1) {
        max_log_map(&s.sys1, &s.par1, &la1, &mut alpha, &mut e1);
        for i in 0..k {
            la2[i] = extrinsic_scale * e1[pi.at(i)];
        }
        max_log_map(&s.sys2, &s.par2, &la2, &mut alpha, &mut e2);
        for i in 0..k {
            let j = pi.at(i);
            la1[j] = extrinsic_scale * e2[i];
            let app = s.sys2[i] + la2[i] + e2[i];
            bits[j] = (app < 0.0) as u8;
        }
        done = it + 1;
        crc_ok = crc24_check(&bits).unwrap_or(false);
        if early_stop && crc_ok {
            break;
        }
    }
    TurboDecoded {
        bits,
        crc_ok,
        iterations: done,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy::crc24_attach;
    use crate::rng::{Domain, SeedTree};
    use rand::Rng;

    #[test]
    fn termination_returns_to_zero_state() {
        for s in 0..STATES {
            let mut st = s;
            for _ in 0..TAIL {
                st = step(st, tail_input(st)).0;
            }
            assert_eq!(st, 0);
        }
    }

    #[test]
    fn trellis_table_matches_step() {
        for s in 0..STATES {
            for u in 0..2u8 {
                let (ns, p) = step(s, u);
                assert_eq!(TRELLIS.next[s][u as usize], ns);
                assert_eq!(TRELLIS.parity[s][u as usize], p);
            }
        }
    }

    #[test]
    fn impulse_response_of_rsc() {
        // 1 + D + D^3 over 1 + D^2 + D^3: impulse parity 1 1 1 1 0 0 1 0
        let mut input = vec![0u8; 8];
        input[0] = 1;
        let (p, _) = rsc_encode(input.into_iter());
        assert_eq!(p, vec![1, 1, 1, 1, 0, 0, 1, 0]);
    }

    #[test]
    fn noiseless_mother_roundtrip() {
        let tree = SeedTree::new(11);
        let mut rng = tree.stream(Domain::Test, &[]);
        for k in [40usize, 64, 200] {
            let payload: Vec<u8> = (0..k - 24).map(|_| rng.random_range(0..2)).collect();
            let tb = crc24_attach(&payload).unwrap();
            let pi = QppInterleaver::new(k).unwrap();
            let c = encode_mother(&tb, &pi);
            let llrs: Vec<f64> = c.iter().map(|&b| if b == 0 { 10.0 } else { -10.0 }).collect();
            let out = decode_mother(&llrs, k, &pi, 8, 1.0, true);
            assert!(out.crc_ok);
            assert_eq!(out.bits, tb);
            assert_eq!(out.iterations, 1);
        }
    }
}
