//! `harqsim`: run link-level experiments and write CSV plus a metadata sidecar.

mod config;

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use harqsim_core::sim::{
    analytic_latency_rows, run_asymmetric_family, run_bler_suite, run_chanest_rmse, run_dl_throughput,
    run_latency_sweep, sidecar_path, AsymmetryConfig, RunMetadata, SweepReport, CSV_HEADER, RMSE_CSV_HEADER,
};

use config::{FileConfig, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "harqsim", version, about = "Link-level HARQ and feedback-channel simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Throughput ratio vs DL SINR with ideal feedback.
    Sweep(Common),
    /// Throughput with ACK/NACK carried over a degraded uplink.
    Asymmetry(Common),
    /// Block error rate of the data and feedback channels.
    Bler(Common),
    /// HARQ latency: closed form by default, simulated with --sinr.
    Latency(Common),
    /// Channel-estimation RMSE of the two PUCCH designs.
    ChanestRmse(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// HARQ scheme: type1-nocomb, type1-cc, type3-ir, burst-cc.
    #[arg(long, env = "HARQSIM_SCHEME")]
    scheme: Option<String>,
    /// Modulation and coding scheme 1..3.
    #[arg(long, env = "HARQSIM_MCS")]
    mcs: Option<String>,
    /// awgn or rayleigh.
    #[arg(long, env = "HARQSIM_CHANNEL")]
    channel: Option<String>,
    /// SINR grid `lo:step:hi` in dB (inclusive), or a single value.
    #[arg(long, env = "HARQSIM_SINR", allow_hyphen_values = true)]
    sinr: Option<String>,
    /// UL offset(s) in dB below the DL SINR; repeat or comma-separate.
    #[arg(long, env = "HARQSIM_OFFSET", value_delimiter = ',', allow_hyphen_values = true)]
    offset: Vec<f64>,
    /// Feedback standard(s): lte, nr; repeat or comma-separate.
    #[arg(long, env = "HARQSIM_STANDARD", value_delimiter = ',')]
    standard: Vec<String>,
    /// Master seed.
    #[arg(long, env = "HARQSIM_SEED")]
    seed: Option<u64>,
    /// Subframes per sweep point.
    #[arg(long, env = "HARQSIM_SUBFRAMES")]
    subframes: Option<usize>,
    /// Monte Carlo trials per point (bler, chanest-rmse).
    #[arg(long, env = "HARQSIM_TRIALS")]
    trials: Option<u64>,
    /// TOML configuration file; flags override its values.
    #[arg(long, env = "HARQSIM_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "HARQSIM_JOBS")]
    jobs: Option<usize>,
    /// Overwrite an existing output file.
    #[arg(long, env = "HARQSIM_FORCE")]
    force: bool,
    /// Output CSV path; the sidecar is written to `<out>.meta.json`.
    #[arg(long, env = "HARQSIM_OUT")]
    out: PathBuf,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<harqsim_core::Error> for Failure {
    fn from(e: harqsim_core::Error) -> Self {
        match e {
            harqsim_core::Error::Config(_) | harqsim_core::Error::GridMismatch => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("harqsim: configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("harqsim: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (name, common) = match cli.command {
        Command::Sweep(c) => ("sweep", c),
        Command::Asymmetry(c) => ("asymmetry", c),
        Command::Bler(c) => ("bler", c),
        Command::Latency(c) => ("latency", c),
        Command::ChanestRmse(c) => ("chanest-rmse", c),
    };
    let file = match &common.config {
        Some(p) => FileConfig::load(p).map_err(Failure::Config)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        seed: common.seed,
        scheme: common.scheme,
        mcs: common.mcs,
        channel: common.channel,
        sinr: common.sinr,
        offsets: common.offset,
        standards: common.standard,
        trials: common.trials,
        subframes: common.subframes,
    };
    let cfg = config::resolve(name, file, flags, common.out).map_err(Failure::Config)?;
    if cfg.out.exists() && !common.force {
        return Err(Failure::Config(format!(
            "{} exists; pass --force to overwrite",
            cfg.out.display()
        )));
    }
    if common.jobs == Some(0) {
        return Err(Failure::Config("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let (csv, header) = pool.install(|| execute(&cfg))?;
    write_outputs(&cfg, &csv, header)
}

fn execute(cfg: &RunConfig) -> Result<(String, &'static str), Failure> {
    let p = &cfg.params;
    let fading = cfg.fading();
    let report = match cfg.experiment {
        "sweep" => run_dl_throughput(cfg.scheme, cfg.mcs, fading, &cfg.grid_or("-10:1:15"), p, cfg.seed)?,
        "asymmetry" => {
            let default_grid = match cfg.channel {
                harqsim_core::channel::ChannelModel::Awgn => "-5:1:10",
                harqsim_core::channel::ChannelModel::Rayleigh => "-5:1:20",
            };
            let grid = cfg.grid_or(default_grid);
            let mut report: SweepReport = run_dl_throughput(cfg.scheme, cfg.mcs, fading, &grid, p, cfg.seed)?;
            let configs: Vec<AsymmetryConfig> = cfg
                .standards
                .iter()
                .flat_map(|&s| cfg.offsets.iter().map(move |&o| AsymmetryConfig::new(o, s)))
                .collect();
            for r in run_asymmetric_family(cfg.mcs, cfg.scheme, &configs, fading, &grid, p, cfg.seed)? {
                report.extend(r);
            }
            report
        }
        "bler" => {
            let mut bler = cfg.bler.clone();
            if let Some(t) = cfg.trials {
                bler.trials = t;
                bler.pdsch_trials = t;
                bler.wifi_data_trials = t;
            }
            run_bler_suite(fading, &cfg.grid_or("-10:1:10"), &bler, p, cfg.seed)?
        }
        "latency" => match cfg.sinr {
            Some(grid) => run_latency_sweep(cfg.scheme, cfg.mcs, fading, &grid, p, cfg.seed)?,
            None => analytic_latency_rows(cfg.scheme, p, cfg.seed),
        },
        "chanest-rmse" => {
            let rows = run_chanest_rmse(fading, &cfg.grid_or("-20:2:10"), cfg.trials.unwrap_or(10_000), p, cfg.seed)?;
            return Ok((harqsim_core::sim::rmse_csv(&rows), RMSE_CSV_HEADER));
        }
        other => return Err(Failure::Config(format!("unknown experiment `{other}`"))),
    };
    Ok((report.to_csv(), CSV_HEADER))
}

fn write_outputs(cfg: &RunConfig, csv: &str, header: &str) -> Result<(), Failure> {
    let config_json = serde_json::to_value(cfg).map_err(|e| Failure::Runtime(e.to_string()))?;
    let meta = RunMetadata::new(cfg.experiment, header, config_json);
    write_file(&cfg.out, csv)?;
    write_file(&sidecar_path(&cfg.out), &meta.to_json())
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Runtime(format!("{}: {e}", path.display()));
    let mut f = OpenOptions::new()
        .write(true)
        .create(true)
        .truncate(true)
        .open(path)
        .map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)
}
