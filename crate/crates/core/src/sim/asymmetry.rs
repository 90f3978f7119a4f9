//! Closed-loop evaluation with a degraded uplink: every downlink subframe's
//! ACK/NACK crosses the PUCCH at `dl_sinr - offset`, and a delivery whose
//! feedback is misdetected (DTX included) is dropped from the throughput.
//! HARQ state keeps following the true CRC result.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::noise_var_from_sinr;
use crate::error::{Error, Result};
use crate::harq::HarqScheme;
use crate::phy::{NUM_SUBCARRIERS, NUM_SYMBOLS};
use crate::pucch::{AckNackDecision, FeedbackStandard};
use crate::rng::{Domain, SeedTree};

use super::link::{point_key, received_grid, unit_noise, FadingSpec, FeedbackLink};
use super::params::{Mcs, SimParams};
use super::report::{SweepReport, SweepRow};
use super::throughput::simulate_dl;
use super::SinrGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryConfig {
    pub ul_offset_db: f64,
    pub feedback_standard: FeedbackStandard,
    pub perfect_feedback: bool,
}

impl AsymmetryConfig {
    pub fn new(ul_offset_db: f64, feedback_standard: FeedbackStandard) -> Self {
        Self {
            ul_offset_db,
            feedback_standard,
            perfect_feedback: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ul_offset_db >= 0.0 && self.ul_offset_db.is_finite()) {
            return Err(Error::Config(format!(
                "UL offset must be finite and non-negative, got {}",
                self.ul_offset_db
            )));
        }
        Ok(())
    }
}

/// Default offsets swept by the asymmetry experiment.
pub const DEFAULT_OFFSETS_DB: [f64; 4] = [0.0, 5.0, 10.0, 15.0];

/// Single-configuration asymmetric run.
pub fn run_asymmetric(
    mcs: Mcs,
    scheme: HarqScheme,
    asym: &AsymmetryConfig,
    fading: FadingSpec,
    sweep: &SinrGrid,
    params: &SimParams,
    seed: u64,
) -> Result<SweepReport> {
    let mut reports = run_asymmetric_family(mcs, scheme, std::slice::from_ref(asym), fading, sweep, params, seed)?;
    Ok(reports.remove(0))
}

/// Several feedback configurations evaluated against one shared downlink run
/// per SINR point. Feedback noise is drawn once per subframe at unit variance
/// and scaled per offset, so offsets and standards are compared on the same
/// realisations. Returns one report per configuration, in input order.
pub fn run_asymmetric_family(
    mcs: Mcs,
    scheme: HarqScheme,
    configs: &[AsymmetryConfig],
    fading: FadingSpec,
    sweep: &SinrGrid,
    params: &SimParams,
    seed: u64,
) -> Result<Vec<SweepReport>> {
    sweep.validate()?;
    params.validate()?;
    for c in configs {
        c.validate()?;
    }
    let per_point: Vec<Vec<SweepRow>> = sweep
        .points()
        .into_par_iter()
        .map(|s| asymmetric_point(mcs, scheme, configs, fading, s, params, seed))
        .collect::<Result<_>>()?;
    Ok((0..configs.len())
        .map(|i| SweepReport::new(per_point.iter().map(|rows| rows[i].clone()).collect()))
        .collect())
}

fn asymmetric_point(
    mcs: Mcs,
    scheme: HarqScheme,
    configs: &[AsymmetryConfig],
    fading: FadingSpec,
    sinr_db: f64,
    params: &SimParams,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let trace = simulate_dl(scheme, mcs, fading, sinr_db, params, seed)?;
    let tree = SeedTree::new(seed);
    let key = point_key(sinr_db);
    let ul_channel = fading.channel(sinr_db, &tree, Domain::FeedbackFading, key)?;
    let links: Vec<Option<FeedbackLink>> = configs
        .iter()
        .map(|c| {
            (!c.perfect_feedback).then(|| {
                FeedbackLink::new(c.feedback_standard, &params.lte_pucch, &params.nr_pucch, &tree, key)
            })
        })
        .collect();
    let grids: Vec<Option<[crate::phy::ResourceGrid; 2]>> = links
        .iter()
        .map(|l| l.as_ref().map(|l| Ok::<_, Error>([l.encode(0)?, l.encode(1)?])).transpose())
        .collect::<Result<_>>()?;

    let n = trace.outcomes.len();
    let steps_per = scheme.subframes_per_step() as u64;
    let mut lost = vec![vec![false; n]; configs.len()];
    for (i, o) in trace.outcomes.iter().enumerate() {
        // Feedback for the step goes out in its (last) subframe.
        let subframe = (i as u64 + 1) * steps_per - 1;
        let h = ul_channel.gain_at(subframe);
        let noise = unit_noise(
            NUM_SUBCARRIERS * NUM_SYMBOLS,
            &mut tree.stream(Domain::FeedbackNoise, &[key, subframe]),
        );
        let sent = o.acknack_sent;
        let bit = sent.bit().expect("receiver feedback is ACK or NACK") as usize;
        for (c, cfg) in configs.iter().enumerate() {
            let (Some(link), Some(g)) = (&links[c], &grids[c]) else {
                continue;
            };
            let ul_var = noise_var_from_sinr(sinr_db - cfg.ul_offset_db);
            let rx = received_grid(&g[bit], h, &noise, ul_var);
            let decided: AckNackDecision = link.receive(&rx)?;
            lost[c][i] = decided != sent;
        }
    }
    Ok(configs
        .iter()
        .enumerate()
        .map(|(c, cfg)| {
            let mut row = trace.row_with(|i, _| !lost[c][i], params, seed);
            if !cfg.perfect_feedback {
                row.ul_sinr_db = sinr_db - cfg.ul_offset_db;
                row.standard = cfg.feedback_standard.label().to_string();
                row.offset_db = Some(cfg.ul_offset_db);
            }
            row
        })
        .collect())
}
