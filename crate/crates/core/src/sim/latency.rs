use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Latency components in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatencyModel {
    /// Layer-1/layer-2 processing at each end.
    pub t_l1l2_ms: f64,
    /// Waiting for the next TTI boundary.
    pub t_align_ms: f64,
    /// One transmission.
    pub t_tx_ms: f64,
    /// Decoding and feedback processing.
    pub t_proc_ms: f64,
}

impl Default for LatencyModel {
    fn default() -> Self {
        Self {
            t_l1l2_ms: 1.0,
            t_align_ms: 1.0,
            t_tx_ms: 1.0,
            t_proc_ms: 3.0,
        }
    }
}

impl LatencyModel {
    pub fn validate(&self) -> Result<()> {
        let all = [self.t_l1l2_ms, self.t_align_ms, self.t_tx_ms, self.t_proc_ms];
        if all.iter().all(|v| v.is_finite() && *v >= 0.0) {
            Ok(())
        } else {
            Err(Error::Config("latency components must be finite and non-negative".into()))
        }
    }

    /// Delivery after `k` retransmissions: every round trip pays transmission
    /// and processing in both directions.
    pub fn harq_latency(&self, k: usize) -> f64 {
        let rounds = 2.0 * (k as f64 + 1.0);
        2.0 * self.t_l1l2_ms + self.t_align_ms + rounds * self.t_proc_ms + rounds * self.t_tx_ms
    }

    /// Four back-to-back transmissions with a single processing stage.
    pub fn burst_latency(&self) -> f64 {
        2.0 * self.t_l1l2_ms + self.t_align_ms + 4.0 * self.t_tx_ms + self.t_proc_ms
    }
}

pub fn harq_latency(k: usize, model: &LatencyModel) -> f64 {
    model.harq_latency(k)
}

pub fn burst_latency(model: &LatencyModel) -> f64 {
    model.burst_latency()
}
