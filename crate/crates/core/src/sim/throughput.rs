use rayon::prelude::*;

use crate::error::Result;
use crate::harq::{self, HarqPool, HarqScheme, SubframeOutcome};
use crate::rng::SeedTree;

use super::link::{FadingSpec, PdschLink};
use super::params::{throughput_ratio, Mcs, SimParams, TTI_SECONDS};
use super::report::{SweepReport, SweepRow};
use super::SinrGrid;

/// Per-step outcomes of one downlink run at one SINR point.
#[derive(Debug, Clone)]
pub struct DlTrace {
    pub sinr_db: f64,
    pub scheme: HarqScheme,
    pub mcs: Mcs,
    pub outcomes: Vec<SubframeOutcome>,
}

/// Runs `params.n_sf` engine steps of `scheme` at `sinr_db` with ideal feedback.
pub fn simulate_dl(
    scheme: HarqScheme,
    mcs: Mcs,
    fading: FadingSpec,
    sinr_db: f64,
    params: &SimParams,
    seed: u64,
) -> Result<DlTrace> {
    params.validate()?;
    let codec = PdschLink::build_codec(params.tb_size(mcs), params.g(), params.codec)?;
    let mut link = PdschLink::new(codec, sinr_db, fading, SeedTree::new(seed))?;
    let mut pool = HarqPool::for_scheme(scheme, params.n_harq, params.max_transmissions)?;
    let outcomes = (0..params.n_sf as u64)
        .map(|sf| harq::step(scheme, &mut pool, &mut link, sf))
        .collect::<Result<Vec<_>>>()?;
    Ok(DlTrace {
        sinr_db,
        scheme,
        mcs,
        outcomes,
    })
}

impl DlTrace {
    /// Summary row; `delivered[i]` overrides whether step `i` counts as a
    /// delivery (used to drop deliveries lost to feedback errors).
    pub fn row_with(&self, delivered: impl Fn(usize, &SubframeOutcome) -> bool, params: &SimParams, seed: u64) -> SweepRow {
        let n_steps = self.outcomes.len();
        let elapsed = (n_steps * self.scheme.subframes_per_step()) as f64 * TTI_SECONDS;
        let mut bits = 0usize;
        let mut latency_sum = 0.0;
        let mut latency_n = 0usize;
        let mut decodes = 0u64;
        let mut failures = 0u64;
        let mut hist = vec![0u64; params.max_transmissions.max(harq::BURST_LENGTH)];
        for (i, o) in self.outcomes.iter().enumerate() {
            decodes += o.decodes as u64;
            failures += (!o.crc_ok) as u64;
            if o.crc_ok || o.dropped {
                hist[o.attempts_used - 1] += 1;
            }
            if o.crc_ok && delivered(i, o) {
                bits += o.delivered_bits;
                latency_sum += params.latency.harq_latency(o.retransmissions());
                latency_n += 1;
            }
        }
        let th = bits as f64 / elapsed;
        let completed: u64 = hist.iter().sum();
        let attempts_mean = if completed == 0 {
            f64::NAN
        } else {
            hist.iter().enumerate().map(|(i, &c)| (i + 1) as f64 * c as f64).sum::<f64>() / completed as f64
        };
        let avg_latency = if self.scheme == HarqScheme::BurstChaseCombining {
            params.latency.burst_latency()
        } else if latency_n == 0 {
            f64::NAN
        } else {
            latency_sum / latency_n as f64
        };
        SweepRow {
            dl_sinr_db: self.sinr_db,
            scheme: self.scheme.label().to_string(),
            mcs: Some(self.mcs.index()),
            standard: "perfect".to_string(),
            throughput_bps: th,
            throughput_ratio_pct: throughput_ratio(th, self.mcs, params),
            bler: if decodes == 0 { f64::NAN } else { failures as f64 / decodes as f64 },
            avg_latency_ms: avg_latency,
            attempts_mean,
            attempts_histogram: hist,
            trials: decodes,
            errors: failures,
            ..SweepRow::empty(seed)
        }
    }

    pub fn row(&self, params: &SimParams, seed: u64) -> SweepRow {
        self.row_with(|_, _| true, params, seed)
    }
}

/// Downlink throughput sweep with ideal feedback. Sweep points run in
/// parallel on the current rayon pool and are returned in grid order.
pub fn run_dl_throughput(
    scheme: HarqScheme,
    mcs: Mcs,
    fading: FadingSpec,
    sweep: &SinrGrid,
    params: &SimParams,
    seed: u64,
) -> Result<SweepReport> {
    sweep.validate()?;
    params.validate()?;
    let rows = sweep
        .points()
        .into_par_iter()
        .map(|s| simulate_dl(scheme, mcs, fading, s, params, seed).map(|t| t.row(params, seed)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::new(rows))
}

/// Average delivery latency per SINR point (the `avg_latency_ms` column of
/// the same runs as [`run_dl_throughput`]).
pub fn run_latency_sweep(
    scheme: HarqScheme,
    mcs: Mcs,
    fading: FadingSpec,
    sweep: &SinrGrid,
    params: &SimParams,
    seed: u64,
) -> Result<SweepReport> {
    run_dl_throughput(scheme, mcs, fading, sweep, params, seed)
}

/// Closed-form latency rows: `k = 0..max_transmissions-1` retransmissions for
/// `scheme`, plus the burst constant. `attempts_mean` carries `k + 1`.
pub fn analytic_latency_rows(scheme: HarqScheme, params: &SimParams, seed: u64) -> SweepReport {
    let mut rows: Vec<SweepRow> = (0..params.max_transmissions)
        .map(|k| SweepRow {
            scheme: scheme.label().to_string(),
            standard: "analytic".to_string(),
            avg_latency_ms: params.latency.harq_latency(k),
            attempts_mean: (k + 1) as f64,
            ..SweepRow::empty(seed)
        })
        .collect();
    rows.push(SweepRow {
        scheme: HarqScheme::BurstChaseCombining.label().to_string(),
        standard: "analytic".to_string(),
        avg_latency_ms: params.latency.burst_latency(),
        attempts_mean: harq::BURST_LENGTH as f64,
        ..SweepRow::empty(seed)
    });
    SweepReport::new(rows)
}
