//! Quadratic permutation polynomial interleaver `pi(i) = (f1 i + f2 i^2) mod K`.
//!
//! Transport blocks here are not segmented, so K ranges far beyond the
//! standard coefficient table. Coefficients are found by a deterministic
//! search: `f2` a multiple of every prime factor of K, `f1` coprime to K
//! near `sqrt(K)`, and the candidate is accepted only after checking that it
//! really permutes `0..K`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QppInterleaver {
    f1: u64,
    f2: u64,
    perm: Vec<usize>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn radical(mut k: u64) -> u64 {
    let mut rad = 1;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            rad *= p;
            while k.is_multiple_of(p) {
                k /= p;
            }
        }
        p += 1;
    }
    if k > 1 {
        rad *= k;
    }
    rad
}

fn permutation(k: u64, f1: u64, f2: u64) -> Option<Vec<usize>> {
    let mut perm = Vec::with_capacity(k as usize);
    let mut seen = vec![false; k as usize];
    for i in 0..k {
        // (f1 i + f2 i^2) mod K without overflow for K < 2^31.
        let v = ((f1 % k) * i % k + (f2 % k) * (i * i % k) % k) % k;
        if std::mem::replace(&mut seen[v as usize], true) {
            return None;
        }
        perm.push(v as usize);
    }
    Some(perm)
}

impl QppInterleaver {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoInterleaver(0));
        }
        if k == 1 {
            return Ok(Self { f1: 1, f2: 0, perm: vec![0] });
        }
        let kk = k as u64;
        let rad = radical(kk);
        let root = (kk as f64).sqrt().round() as u64;
        // Aim f2 near 2 sqrt(K) so the quadratic term actually spreads indices.
        let f2_start = ((2 * root).div_ceil(rad)).max(1);
        for m in f2_start..f2_start + 64 {
            let f2 = (rad * m) % kk;
            for f1 in (root.max(1)..kk).chain(1..root.max(1)) {
                if gcd(f1, kk) != 1 {
                    continue;
                }
                if let Some(perm) = permutation(kk, f1, f2) {
                    return Ok(Self { f1, f2, perm });
                }
                break;
            }
        }
        // A linear interleaver with f1 coprime to K always permutes.
        let f1 = (root.max(1)..kk).find(|&f| gcd(f, kk) == 1).unwrap_or(1);
        let perm = permutation(kk, f1, 0).ok_or(Error::NoInterleaver(k))?;
        Ok(Self { f1, f2: 0, perm })
    }

    pub fn coefficients(&self) -> (u64, u64) {
        (self.f1, self.f2)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `pi(i)`: the natural-order index read at interleaved position `i`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }
}
