//! Flat AWGN and correlated Rayleigh block fading at resource-element level.
//!
//! Signal power is normalised to one, so the per-element noise variance is
//! `10^(-SINR/10)` and interference is folded into the same Gaussian term.
//! Rayleigh fading holds one complex gain per 1 ms subframe; successive gains
//! follow the Clarke/Jakes autocorrelation `J0(2 pi f_D dt)` through a
//! sum-of-sinusoids generator with separate frequency sets for I and Q.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SUBFRAME_SECONDS: f64 = 1e-3;
const SINUSOIDS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    Awgn,
    Rayleigh,
}

impl std::fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelModel::Awgn => "awgn",
            ChannelModel::Rayleigh => "rayleigh",
        })
    }
}

impl std::str::FromStr for ChannelModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" => Ok(ChannelModel::Awgn),
            "rayleigh" | "rayleighflat" | "rayleigh-flat" => Ok(ChannelModel::Rayleigh),
            other => Err(Error::Config(format!("unknown channel model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub model: ChannelModel,
    pub doppler_hz: f64,
    pub seed: u64,
    pub sinr_db: f64,
}

impl ChannelConfig {
    pub fn awgn(sinr_db: f64) -> Self {
        Self {
            model: ChannelModel::Awgn,
            doppler_hz: 0.0,
            seed: 0,
            sinr_db,
        }
    }

    pub fn rayleigh(sinr_db: f64, doppler_hz: f64, seed: u64) -> Self {
        Self {
            model: ChannelModel::Rayleigh,
            doppler_hz,
            seed,
            sinr_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.doppler_hz.is_finite() || self.doppler_hz < 0.0 {
            return Err(Error::Config(format!(
                "Doppler frequency must be finite and non-negative, got {}",
                self.doppler_hz
            )));
        }
        if self.sinr_db.is_nan() {
            return Err(Error::Config("SINR must not be NaN".into()));
        }
        Ok(())
    }
}

/// `sigma^2 = 10^(-sinr_db / 10)` under unit signal power. `+inf` dB gives 0.
pub fn noise_var_from_sinr(sinr_db: f64) -> f64 {
    10f64.powf(-sinr_db / 10.0)
}

/// Sum-of-sinusoids Rayleigh process with unit mean power.
#[derive(Debug, Clone)]
pub struct JakesFading {
    omega: f64,
    freq_i: Vec<f64>,
    freq_q: Vec<f64>,
    phase_i: Vec<f64>,
    phase_q: Vec<f64>,
}

impl JakesFading {
    pub fn new<R: Rng + ?Sized>(doppler_hz: f64, rng: &mut R) -> Self {
        let m = SINUSOIDS;
        let theta: f64 = rng.random_range(-PI..PI);
        let angles: Vec<f64> = (1..=m)
            .map(|n| (2.0 * PI * n as f64 - PI + theta) / (4.0 * m as f64))
            .collect();
        let mut draw = || -> Vec<f64> { (0..m).map(|_| rng.random_range(-PI..PI)).collect() };
        let phase_i = draw();
        let phase_q = draw();
        Self {
            omega: 2.0 * PI * doppler_hz,
            freq_i: angles.iter().map(|a| a.cos()).collect(),
            freq_q: angles.iter().map(|a| a.sin()).collect(),
            phase_i,
            phase_q,
        }
    }

    pub fn gain_at(&self, t_seconds: f64) -> Complex64 {
        let wt = self.omega * t_seconds;
        let sum = |freq: &[f64], phase: &[f64]| -> f64 {
            freq.iter()
                .zip(phase)
                .map(|(f, p)| (wt * f + p).cos())
                .sum::<f64>()
        };
        // sqrt(2/M) per axis gives unit power per axis; 1/sqrt(2) makes E|H|^2 = 1.
        let scale = (2.0 / self.freq_i.len() as f64).sqrt() * FRAC_1_SQRT_2;
        Complex64::new(
            scale * sum(&self.freq_i, &self.phase_i),
            scale * sum(&self.freq_q, &self.phase_q),
        )
    }
}

/// Per-run channel state: the subframe clock, the current gain and the noise
/// generator. Single owner.
#[derive(Debug, Clone)]
pub struct ChannelState<R> {
    pub subframe_index: u64,
    pub gain: Complex64,
    pub rng: R,
}

impl<R: Rng> ChannelState<R> {
    pub fn new(subframe_index: u64, rng: R) -> Self {
        Self {
            subframe_index,
            gain: Complex64::new(1.0, 0.0),
            rng,
        }
    }

    pub fn advance(&mut self) {
        self.subframe_index += 1;
    }
}

/// A configured channel realisation. The fading trajectory is fixed at
/// construction; noise comes from the state passed to [`Channel::apply`].
#[derive(Debug, Clone)]
pub struct Channel {
    cfg: ChannelConfig,
    noise_var: f64,
    fading: Option<JakesFading>,
}

impl Channel {
    pub fn new<R: Rng + ?Sized>(cfg: ChannelConfig, fading_rng: &mut R) -> Result<Self> {
        cfg.validate()?;
        let fading = match cfg.model {
            ChannelModel::Awgn => None,
            ChannelModel::Rayleigh => Some(JakesFading::new(cfg.doppler_hz, fading_rng)),
        };
        Ok(Self {
            cfg,
            noise_var: noise_var_from_sinr(cfg.sinr_db),
            fading,
        })
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.cfg
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    /// Same fading trajectory at a different SINR.
    pub fn with_sinr(&self, sinr_db: f64) -> Self {
        let mut out = self.clone();
        out.cfg.sinr_db = sinr_db;
        out.noise_var = noise_var_from_sinr(sinr_db);
        out
    }

    pub fn gain_at(&self, subframe: u64) -> Complex64 {
        match &self.fading {
            None => Complex64::new(1.0, 0.0),
            Some(f) => f.gain_at(subframe as f64 * SUBFRAME_SECONDS),
        }
    }

    /// `y = H x + n` for the subframe in `state`; returns the received block
    /// and the true gain. Noise draws are unit Gaussians scaled by
    /// `sqrt(sigma^2 / 2)`, so two channels differing only in SINR and fed
    /// identical generators produce proportional noise.
    pub fn apply<R: Rng>(
        &self,
        symbols: &[Complex64],
        state: &mut ChannelState<R>,
    ) -> (Vec<Complex64>, Complex64) {
        let h = self.gain_at(state.subframe_index);
        state.gain = h;
        let mut out: Vec<Complex64> = symbols.iter().map(|&x| h * x).collect();
        add_noise(&mut out, self.noise_var, &mut state.rng);
        (out, h)
    }
}

/// Adds circularly-symmetric complex Gaussian noise of total variance
/// `noise_var` in place.
pub fn add_noise<R: Rng + ?Sized>(symbols: &mut [Complex64], noise_var: f64, rng: &mut R) {
    if noise_var == 0.0 {
        return;
    }
    let sd = (noise_var / 2.0).sqrt();
    for s in symbols.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *s += Complex64::new(sd * re, sd * im);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Domain, SeedTree};

    #[test]
    fn noise_variance_examples() {
        assert_eq!(noise_var_from_sinr(0.0), 1.0);
        assert!((noise_var_from_sinr(10.0) - 0.1).abs() < 1e-15);
        assert!((noise_var_from_sinr(-10.0) - 10.0).abs() < 1e-12);
        assert_eq!(noise_var_from_sinr(f64::INFINITY), 0.0);
    }

    #[test]
    fn noiseless_awgn_is_identity() {
        let tree = SeedTree::new(1);
        let ch = Channel::new(ChannelConfig::awgn(f64::INFINITY), &mut tree.stream(Domain::Test, &[])).unwrap();
        let x: Vec<Complex64> = (0..10).map(|i| Complex64::new(i as f64, -1.0)).collect();
        let mut st = ChannelState::new(0, tree.stream(Domain::Test, &[1]));
        let (y, h) = ch.apply(&x, &mut st);
        assert_eq!(y, x);
        assert_eq!(h, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn zero_doppler_is_constant() {
        let tree = SeedTree::new(3);
        let ch = Channel::new(
            ChannelConfig::rayleigh(10.0, 0.0, 3),
            &mut tree.stream(Domain::DataFading, &[]),
        )
        .unwrap();
        let h0 = ch.gain_at(0);
        for t in [1u64, 17, 999, 123_456] {
            assert_eq!(ch.gain_at(t), h0);
        }
    }

    #[test]
    fn negative_doppler_rejected() {
        let tree = SeedTree::new(3);
        let cfg = ChannelConfig::rayleigh(0.0, -1.0, 0);
        assert!(Channel::new(cfg, &mut tree.stream(Domain::Test, &[])).is_err());
    }

    #[test]
    fn same_seed_same_sequence() {
        let run = || {
            let tree = SeedTree::new(42);
            let ch = Channel::new(
                ChannelConfig::rayleigh(3.0, 5.0, 42),
                &mut tree.stream(Domain::DataFading, &[0]),
            )
            .unwrap();
            let mut st = ChannelState::new(5, tree.stream(Domain::DataNoise, &[0]));
            ch.apply(&[Complex64::new(1.0, 0.0); 64], &mut st)
        };
        let (a, ha) = run();
        let (b, hb) = run();
        assert_eq!(ha, hb);
        assert!(a.iter().zip(&b).all(|(x, y)| x.re.to_bits() == y.re.to_bits()
            && x.im.to_bits() == y.im.to_bits()));
    }

    fn ensemble(n: usize, doppler_hz: f64) -> Vec<JakesFading> {
        let tree = SeedTree::new(2024);
        (0..n as u64)
            .map(|i| JakesFading::new(doppler_hz, &mut tree.stream(Domain::Test, &[i])))
            .collect()
    }

    // Power series; accurate to ~1e-15 for the small arguments used here.
    fn bessel_j0(x: f64) -> f64 {
        let q = -(x * x) / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..40 {
            term *= q / (m * m) as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn jakes_mean_power_is_unity() {
        let paths = ensemble(20_000, 5.0);
        let p: f64 = paths.iter().map(|f| f.gain_at(0.137).norm_sqr()).sum::<f64>() / paths.len() as f64;
        assert!((p - 1.0).abs() < 0.02, "mean power {p}");
    }

    #[test]
    fn jakes_envelope_is_rayleigh() {
        let paths = ensemble(20_000, 5.0);
        let mut r: Vec<f64> = paths.iter().map(|f| f.gain_at(0.05).norm()).collect();
        r.sort_by(f64::total_cmp);
        let n = r.len() as f64;
        let d = r
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let cdf = 1.0 - (-x * x).exp();
                (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 1.36 / n.sqrt(), "KS statistic {d}");
    }

    #[test]
    fn jakes_autocorrelation_follows_bessel() {
        let fd = 5.0;
        let paths = ensemble(20_000, fd);
        for k in 0..=20u32 {
            let tau = f64::from(k) * 1e-3;
            let acf: Complex64 = paths
                .iter()
                .map(|f| f.gain_at(0.3 + tau) * f.gain_at(0.3).conj())
                .sum::<Complex64>()
                / paths.len() as f64;
            let want = bessel_j0(2.0 * std::f64::consts::PI * fd * tau);
            assert!((acf.re - want).abs() < 0.05, "lag {k}: {} vs {want}", acf.re);
        }
    }

    #[test]
    fn awgn_realised_snr_matches_target() {
        let tree = SeedTree::new(8);
        for sinr in [-10.0, 0.0, 7.5] {
            let ch = Channel::new(ChannelConfig::awgn(sinr), &mut tree.stream(Domain::Test, &[])).unwrap();
            let x = vec![Complex64::new(1.0, 0.0); 200_000];
            let mut st = ChannelState::new(0, tree.stream(Domain::Test, &[1]));
            let (y, _) = ch.apply(&x, &mut st);
            let noise: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / x.len() as f64;
            let snr = -10.0 * noise.log10();
            assert!((snr - sinr).abs() < 0.1, "{snr} vs {sinr}");
        }
    }
}
