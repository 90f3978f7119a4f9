use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive SINR grid `lo:step:hi` in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrGrid {
    pub lo: f64,
    pub step: f64,
    pub hi: f64,
}

impl SinrGrid {
    pub fn new(lo: f64, step: f64, hi: f64) -> Result<Self> {
        let g = Self { lo, step, hi };
        g.validate()?;
        Ok(g)
    }

    pub fn single(v: f64) -> Self {
        Self { lo: v, step: 1.0, hi: v }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.step.is_finite()) {
            return Err(Error::Config("SINR grid bounds must be finite".into()));
        }
        if self.step <= 0.0 {
            return Err(Error::Config("SINR grid step must be positive".into()));
        }
        if self.hi < self.lo {
            return Err(Error::Config("SINR grid upper bound is below the lower bound".into()));
        }
        Ok(())
    }

    /// Grid points, rounded to 1e-9 dB so that decimal steps land exactly.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| ((self.lo + i as f64 * self.step) * 1e9).round() / 1e9)
            .map(|v| if v == 0.0 { 0.0 } else { v })
            .collect()
    }
}

impl std::str::FromStr for SinrGrid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad SINR grid `{s}` (expected lo:step:hi)")))
        };
        match parts.as_slice() {
            [v] => Ok(Self::single(num(v)?)),
            [lo, step, hi] => Self::new(num(lo)?, num(step)?, num(hi)?),
            _ => Err(Error::Config(format!("bad SINR grid `{s}` (expected lo:step:hi)"))),
        }
    }
}

impl std::fmt::Display for SinrGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.step, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_grid() {
        let g: SinrGrid = "-10:1:15".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 26);
        assert_eq!(p[0], -10.0);
        assert_eq!(p[25], 15.0);
        let g: SinrGrid = "-1:0.1:1".parse().unwrap();
        assert_eq!(g.points().len(), 21);
        assert_eq!(g.points()[13], 0.3);
    }

    #[test]
    fn bad_grids() {
        assert!("1:0:2".parse::<SinrGrid>().is_err());
        assert!("3:1:2".parse::<SinrGrid>().is_err());
        assert!("a:b".parse::<SinrGrid>().is_err());
        assert_eq!("4".parse::<SinrGrid>().unwrap().points(), vec![4.0]);
    }
}
