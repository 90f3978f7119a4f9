use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::PRNG_ALGORITHM;

/// Fixed CSV header of every sweep report.
pub const CSV_HEADER: &str = "dl_sinr_db,ul_sinr_db,scheme,mcs,standard,throughput_bps,throughput_ratio_pct,bler,avg_latency_ms,attempts_mean,seed";

/// One sweep point. Numeric fields that do not apply are NaN and are written
/// as empty CSV fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub dl_sinr_db: f64,
    pub ul_sinr_db: f64,
    pub scheme: String,
    pub mcs: Option<u8>,
    pub standard: String,
    pub throughput_bps: f64,
    pub throughput_ratio_pct: f64,
    pub bler: f64,
    pub avg_latency_ms: f64,
    pub attempts_mean: f64,
    pub seed: u64,
    /// UL SINR deficit of asymmetric runs (not part of the CSV schema).
    #[serde(skip)]
    pub offset_db: Option<f64>,
    /// Completed blocks by number of transmissions used, index 0 = one transmission.
    #[serde(skip)]
    pub attempts_histogram: Vec<u64>,
    /// Blocks or trials evaluated and how many of them failed.
    #[serde(skip)]
    pub trials: u64,
    #[serde(skip)]
    pub errors: u64,
}

impl SweepRow {
    pub fn empty(seed: u64) -> Self {
        Self {
            dl_sinr_db: f64::NAN,
            ul_sinr_db: f64::NAN,
            scheme: String::new(),
            mcs: None,
            standard: String::new(),
            throughput_bps: f64::NAN,
            throughput_ratio_pct: f64::NAN,
            bler: f64::NAN,
            avg_latency_ms: f64::NAN,
            attempts_mean: f64::NAN,
            seed,
            offset_db: None,
            attempts_histogram: Vec::new(),
            trials: 0,
            errors: 0,
        }
    }

    pub fn csv_line(&self) -> String {
        [
            num(self.dl_sinr_db),
            num(self.ul_sinr_db),
            self.scheme.clone(),
            self.mcs.map(|m| m.to_string()).unwrap_or_default(),
            self.standard.clone(),
            num(self.throughput_bps),
            num(self.throughput_ratio_pct),
            num(self.bler),
            num(self.avg_latency_ms),
            num(self.attempts_mean),
            self.seed.to_string(),
        ]
        .join(",")
    }
}

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v}")
    }
}

/// Ordered sweep rows.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn new(rows: Vec<SweepRow>) -> Self {
        Self { rows }
    }

    pub fn extend(&mut self, other: SweepReport) {
        self.rows.extend(other.rows);
    }

    pub fn sinr_points(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.dl_sinr_db).collect()
    }

    /// Throughput ratio at `sinr_db`, if the grid contains it.
    pub fn ratio_at(&self, sinr_db: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.dl_sinr_db == sinr_db)
            .map(|r| r.throughput_ratio_pct)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

/// Mean of `baseline - report` throughput ratio over grid points in
/// `[lo, hi]` dB, in percentage points.
pub fn average_gap(report: &SweepReport, baseline: &SweepReport, lo: f64, hi: f64) -> Result<f64> {
    let window = |r: &SweepReport| -> Vec<(f64, f64)> {
        r.rows
            .iter()
            .filter(|row| row.dl_sinr_db >= lo - 1e-9 && row.dl_sinr_db <= hi + 1e-9)
            .map(|row| (row.dl_sinr_db, row.throughput_ratio_pct))
            .collect()
    };
    let a = window(report);
    let b = window(baseline);
    if a.is_empty() || a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| x.0 != y.0) {
        return Err(Error::GridMismatch);
    }
    Ok(a.iter().zip(&b).map(|(x, y)| y.1 - x.1).sum::<f64>() / a.len() as f64)
}

/// Reproducibility record written next to every CSV.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: String,
    pub prng: &'static str,
    pub csv_header: String,
    pub notes: Vec<String>,
    pub config: serde_json::Value,
}

pub const PDSCH_CODEC_NOTE: &str = "NR and LTE downlink data channels share the same turbo codec, circular-buffer rate matching and QPSK mapping; no LDPC path is modelled";
pub const FADING_NOTE: &str = "fading is flat and block-constant per 1 ms subframe with Jakes temporal correlation";

impl RunMetadata {
    pub fn new(experiment: &str, csv_header: &str, config: serde_json::Value) -> Self {
        Self {
            tool: "harqsim",
            version: env!("CARGO_PKG_VERSION"),
            experiment: experiment.to_string(),
            prng: PRNG_ALGORITHM,
            csv_header: csv_header.to_string(),
            notes: vec![PDSCH_CODEC_NOTE.to_string(), FADING_NOTE.to_string()],
            config,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serialises") + "\n"
    }
}

/// `<out>.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}
