//! Channel-estimation error of the two PUCCH estimators.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::phy::{NUM_SUBCARRIERS, NUM_SYMBOLS};
use crate::pucch::FeedbackStandard;
use crate::rng::{Domain, SeedTree};

use super::link::{point_key, received_grid, unit_noise, FadingSpec, FeedbackLink};
use super::params::SimParams;
use super::SinrGrid;

pub const RMSE_CSV_HEADER: &str = "sinr_db,standard,rmse,trials,seed";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmseRow {
    pub sinr_db: f64,
    pub standard: FeedbackStandard,
    pub rmse: f64,
    pub trials: u64,
    pub seed: u64,
}

impl RmseRow {
    pub fn csv_line(&self) -> String {
        format!("{},{},{},{},{}", self.sinr_db, self.standard, self.rmse, self.trials, self.seed)
    }
}

pub fn rmse_csv(rows: &[RmseRow]) -> String {
    let mut s = String::from(RMSE_CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}

/// RMSE of the per-symbol estimates against the true gain over all 14
/// symbols and 12 subcarriers of `trials` subframes. Both standards see the
/// same channel gains and unit noise draws.
pub fn chanest_rmse_point(
    standard: FeedbackStandard,
    sinr_db: f64,
    trials: u64,
    fading: FadingSpec,
    params: &SimParams,
    seed: u64,
) -> Result<f64> {
    let tree = SeedTree::new(seed);
    let key = point_key(sinr_db);
    let link = FeedbackLink::new(standard, &params.lte_pucch, &params.nr_pucch, &tree, key);
    let grids = [link.encode(0)?, link.encode(1)?];
    let channel = fading.channel(sinr_db, &tree, Domain::FeedbackFading, key)?;
    let mut sum = 0.0;
    for t in 0..trials {
        let mut rng = tree.stream(Domain::ChannelEstimate, &[key, t]);
        let bit: usize = rng.random_range(0..2);
        let noise = unit_noise(NUM_SUBCARRIERS * NUM_SYMBOLS, &mut rng);
        let h = channel.gain_at(t);
        let rx = received_grid(&grids[bit], h, &noise, channel.noise_var());
        let est: Vec<Complex64> = link.estimate(&rx)?;
        // Flat fading: every subcarrier of a symbol shares the estimate and the truth.
        sum += est.iter().map(|e| (e - h).norm_sqr()).sum::<f64>() * NUM_SUBCARRIERS as f64;
    }
    let n = trials as f64 * (NUM_SYMBOLS * NUM_SUBCARRIERS) as f64;
    Ok((sum / n).sqrt())
}

/// RMSE curves of both standards over the grid, ordered by standard then SINR.
pub fn run_chanest_rmse(
    fading: FadingSpec,
    sweep: &SinrGrid,
    trials: u64,
    params: &SimParams,
    seed: u64,
) -> Result<Vec<RmseRow>> {
    sweep.validate()?;
    params.validate()?;
    let jobs: Vec<(FeedbackStandard, f64)> = [FeedbackStandard::Lte, FeedbackStandard::Nr]
        .into_iter()
        .flat_map(|st| sweep.points().into_iter().map(move |s| (st, s)))
        .collect();
    jobs.into_par_iter()
        .map(|(standard, s)| {
            Ok(RmseRow {
                sinr_db: s,
                standard,
                rmse: chanest_rmse_point(standard, s, trials, fading, params, seed)?,
                trials,
                seed,
            })
        })
        .collect()
}
