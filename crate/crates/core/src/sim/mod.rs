//! Experiment drivers: throughput sweeps with ideal feedback, the closed
//! loop with a degraded uplink, standalone BLER curves, channel-estimation
//! RMSE and latency, plus CSV/metadata output.

mod asymmetry;
mod bler;
mod grid;
mod latency;
mod link;
mod params;
mod report;
mod rmse;
mod throughput;

pub use asymmetry::{run_asymmetric, run_asymmetric_family, AsymmetryConfig, DEFAULT_OFFSETS_DB};
pub use bler::{
    bler_point, combining_bler_point, crossing_sinr, run_bler_suite, BlerConfig, BlerCurve,
};
pub use grid::SinrGrid;
pub use latency::{burst_latency, harq_latency, LatencyModel};
pub use link::{point_key, received_grid, unit_noise, FadingSpec, FeedbackLink, PdschLink};
pub use params::{throughput_ratio, Mcs, SimParams, CRC_BITS, QPSK_BITS, TTI_SECONDS};
pub use report::{
    average_gap, sidecar_path, RunMetadata, SweepReport, SweepRow, CSV_HEADER, FADING_NOTE,
    PDSCH_CODEC_NOTE,
};
pub use rmse::{chanest_rmse_point, rmse_csv, run_chanest_rmse, RmseRow, RMSE_CSV_HEADER};
pub use throughput::{
    analytic_latency_rows, run_dl_throughput, run_latency_sweep, simulate_dl, DlTrace,
};

/// Operating windows for averaging throughput gaps, dB.
pub const AWGN_GAP_WINDOW: (f64, f64) = (-5.0, 10.0);
pub const RAYLEIGH_GAP_WINDOW: (f64, f64) = (-5.0, 20.0);
