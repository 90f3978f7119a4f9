//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use harqsim_core::channel::ChannelModel;
use harqsim_core::pucch::FeedbackStandard;
use harqsim_core::sim::{BlerConfig, FadingSpec, SinrGrid, DEFAULT_OFFSETS_DB};
use harqsim_core::{HarqScheme, Mcs, SimParams};
use serde::{Deserialize, Serialize};

/// Contents of a `--config` file. Every key is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub scheme: Option<String>,
    pub mcs: Option<u8>,
    pub channel: Option<String>,
    pub sinr: Option<String>,
    pub offsets: Option<Vec<f64>>,
    pub standards: Option<Vec<String>>,
    pub trials: Option<u64>,
    pub params: Option<SimParams>,
    pub bler: Option<BlerConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Fully resolved and validated settings for one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub experiment: &'static str,
    pub seed: u64,
    pub scheme: HarqScheme,
    pub mcs: Mcs,
    pub channel: ChannelModel,
    pub sinr: Option<SinrGrid>,
    pub offsets: Vec<f64>,
    pub standards: Vec<FeedbackStandard>,
    pub trials: Option<u64>,
    pub params: SimParams,
    pub bler: BlerConfig,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn fading(&self) -> FadingSpec {
        match self.channel {
            ChannelModel::Awgn => FadingSpec::awgn(),
            ChannelModel::Rayleigh => FadingSpec::rayleigh(self.params.doppler_hz),
        }
    }

    /// The grid to use, falling back to `default`.
    pub fn grid_or(&self, default: &str) -> SinrGrid {
        self.sinr.unwrap_or_else(|| default.parse().expect("built-in grid parses"))
    }
}

/// Raw flag values before merging with the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub scheme: Option<String>,
    pub mcs: Option<String>,
    pub channel: Option<String>,
    pub sinr: Option<String>,
    pub offsets: Vec<f64>,
    pub standards: Vec<String>,
    pub trials: Option<u64>,
    pub subframes: Option<usize>,
}

pub fn resolve(
    experiment: &'static str,
    file: FileConfig,
    flags: Overrides,
    out: PathBuf,
) -> Result<RunConfig, String> {
    let e = |err: harqsim_core::Error| err.to_string();
    let scheme = match flags.scheme.or(file.scheme) {
        Some(s) => s.parse().map_err(e)?,
        None => HarqScheme::Type3IncrementalRedundancy,
    };
    let mcs = match (flags.mcs, file.mcs) {
        (Some(s), _) => s.parse().map_err(e)?,
        (None, Some(m)) => Mcs::try_from(m).map_err(e)?,
        (None, None) => Mcs::Mcs2,
    };
    let channel = match flags.channel.or(file.channel) {
        Some(s) => s.parse().map_err(e)?,
        None => ChannelModel::Awgn,
    };
    let sinr = flags.sinr.or(file.sinr).map(|s| s.parse::<SinrGrid>()).transpose().map_err(e)?;
    let offsets = if flags.offsets.is_empty() {
        file.offsets.unwrap_or_else(|| DEFAULT_OFFSETS_DB.to_vec())
    } else {
        flags.offsets
    };
    if let Some(bad) = offsets.iter().find(|o| !(o.is_finite() && **o >= 0.0)) {
        return Err(format!("UL offset must be finite and non-negative, got {bad}"));
    }
    let standards = if flags.standards.is_empty() {
        file.standards.unwrap_or_else(|| vec!["lte".into(), "nr".into()])
    } else {
        flags.standards
    };
    let standards = standards
        .iter()
        .map(|s| s.parse::<FeedbackStandard>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let mut params = file.params.unwrap_or_default();
    if let Some(n) = flags.subframes {
        params.n_sf = n;
    }
    params.validate().map_err(e)?;
    let trials = flags.trials.or(file.trials);
    if trials == Some(0) {
        return Err("trials must be positive".into());
    }
    Ok(RunConfig {
        experiment,
        seed: flags.seed.or(file.seed).unwrap_or(1),
        scheme,
        mcs,
        channel,
        sinr,
        offsets,
        standards,
        trials,
        params,
        bler: file.bler.unwrap_or_default(),
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str(
            r#"
            seed = 3
            scheme = "type1-cc"
            mcs = 1
            [params]
            n_sf = 20
            "#,
        )
        .unwrap();
        let flags = Overrides {
            mcs: Some("3".into()),
            ..Overrides::default()
        };
        let cfg = resolve("sweep", file, flags, "x.csv".into()).unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.scheme, HarqScheme::Type1ChaseCombining);
        assert_eq!(cfg.mcs, Mcs::Mcs3);
        assert_eq!(cfg.params.n_sf, 20);
        assert_eq!(cfg.params.n_harq, 8);
    }

    #[test]
    fn readme_example_parses() {
        let file: FileConfig = toml::from_str(
            r#"
            seed = 4
            scheme = "type1-cc"
            mcs = 1
            channel = "rayleigh"
            sinr = "-5:1:20"
            offsets = [0.0, 10.0]
            standards = ["lte", "nr"]
            trials = 20000

            [params]
            n_sf = 1000
            n_harq = 8
            max_transmissions = 4
            doppler_hz = 5.0

            [params.lte_pucch]
            interpolation = "cross-slot-line"

            [bler]
            curves = ["lte-pucch", "nr-pucch", "wifi-ack"]
            wifi_data_octets = 1500
            "#,
        )
        .unwrap();
        let cfg = resolve("bler", file, Overrides::default(), "x.csv".into()).unwrap();
        assert_eq!(cfg.channel, ChannelModel::Rayleigh);
        assert_eq!(cfg.bler.curves.len(), 3);
        assert_eq!(
            cfg.params.lte_pucch.interpolation,
            harqsim_core::pucch::LteInterpolation::CrossSlotLine
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("sede = 3").is_err());
        assert!(toml::from_str::<FileConfig>("[params]\nn_subframes = 3").is_err());
    }

    #[test]
    fn bad_values_rejected() {
        let bad = |o: Overrides| resolve("sweep", FileConfig::default(), o, "x".into()).is_err();
        assert!(bad(Overrides { scheme: Some("harq9".into()), ..Default::default() }));
        assert!(bad(Overrides { mcs: Some("7".into()), ..Default::default() }));
        assert!(bad(Overrides { sinr: Some("5:1:0".into()), ..Default::default() }));
        assert!(bad(Overrides { offsets: vec![-1.0], ..Default::default() }));
        assert!(bad(Overrides { subframes: Some(0), ..Default::default() }));
    }
}
