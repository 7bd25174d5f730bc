//! Command-line front end: single-shot SINR maps, secrecy-rate sweeps, the
//! self-check suite, and assignment / waveform dumps, all seeded and
//! reproducible. Exit codes: 0 success, 1 configuration or validation
//! error, 2 output I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use rscs_dm::csvio::{provenance_line, write_csv_file};
use rscs_dm::precoder::phase_alignment;
use rscs_dm::rscs::SubcarrierSelection;
use rscs_dm::scalar::db_to_linear;
use rscs_dm::simkit::curve_to_csv;
use rscs_dm::simkit::figures::{
    run_secrecy_vs_power_split, run_secrecy_vs_snr, ExperimentSpec, SweepAxis,
};
use rscs_dm::simkit::validation::run_validation;
use rscs_dm::sinr::{default_range_axis, default_theta_axis, sinr_map};
use rscs_dm::waveform::synthesize_from_coefficients;
use rscs_dm::{CombineMode, Error, FileConfig, Position64, Result, SystemConfig64};

#[derive(Parser)]
#[command(name = "rscs-dm", version, about = "Directional-modulation link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form SINR map over angle and range; prints the peak.
    SinrMap(SinrMapArgs),
    /// Secrecy-rate curve against SNR or against the data power share.
    SecrecyRate(SecrecyRateArgs),
    /// Run the self-check suite and print its report.
    Validate(ValidateArgs),
    /// Write one drawn antenna-to-subcarrier assignment.
    SelectionDump(DumpArgs),
    /// Write the time samples of one noiseless data symbol.
    WaveformDump(DumpArgs),
}

/// Options shared by every subcommand. Precedence: built-in defaults, then
/// the config file, then explicit flags.
#[derive(Args)]
struct CommonArgs {
    /// Configuration file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory CSV outputs are written into.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Master seed (overrides the config file's seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Bandwidth in Hz (scientific notation accepted).
    #[arg(long)]
    bandwidth_hz: Option<f64>,
    /// Number of transmit antennas.
    #[arg(long)]
    ntx: Option<usize>,
    /// Desired receiver angle in degrees.
    #[arg(long, default_value_t = 60.0)]
    theta_deg: f64,
    /// Desired receiver range in meters.
    #[arg(long, default_value_t = 500.0)]
    range_m: f64,
}

#[derive(Args)]
struct SinrMapArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    /// Sweep the SNR in dB at the configured power split.
    Snr,
    /// Sweep the data power share at a fixed SNR.
    Beta1,
}

#[derive(Args)]
struct SecrecyRateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which axis to sweep.
    #[arg(long, value_enum)]
    sweep: SweepKind,
    /// Fixed SNR in dB for the power-share sweep.
    #[arg(long, default_value_t = 10.0)]
    snr_db: f64,
    /// Assignment draws averaged per sweep point.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Skip the wiretap grid search; empirical columns become NaN.
    #[arg(long)]
    theory_only: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = cap_workers() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Applies the RSCS_THREADS cap to the global worker pool.
fn cap_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var("RSCS_THREADS") else { return Ok(()) };
    let n: usize = raw
        .parse()
        .map_err(|_| format!("RSCS_THREADS must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err("RSCS_THREADS must be a positive integer, got 0".to_string());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("worker pool: {e}"))
}

/// Configuration, seed, and target position after applying precedence.
struct Resolved {
    cfg: SystemConfig64,
    seed: u64,
    desired: Position64,
}

fn resolve(common: &CommonArgs) -> Result<Resolved> {
    let (mut builder, file_seed) = match &common.config {
        Some(path) => {
            let file = FileConfig::load(path)?;
            (file.to_builder::<f64>()?, Some(file.seed))
        }
        None => (SystemConfig64::baseline().to_builder(), None),
    };
    if let Some(bw) = common.bandwidth_hz {
        builder = builder.bandwidth_hz(bw);
    }
    if let Some(n) = common.ntx {
        builder = builder.n_antennas(n);
    }
    Ok(Resolved {
        cfg: builder.build()?,
        seed: common.seed.or(file_seed).unwrap_or(0),
        desired: Position64::from_degrees(common.theta_deg, common.range_m)?,
    })
}

fn provenance(r: &Resolved, subcommand: &str) -> String {
    provenance_line(
        &r.cfg,
        &[("seed", r.seed.to_string()), ("subcommand", subcommand.to_string())],
    )
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SinrMap(args) => cmd_sinr_map(&args),
        Command::SecrecyRate(args) => cmd_secrecy_rate(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::SelectionDump(args) => cmd_selection_dump(&args),
        Command::WaveformDump(args) => cmd_waveform_dump(&args),
    }
}

fn cmd_sinr_map(args: &SinrMapArgs) -> Result<()> {
    let r = resolve(&args.common)?;
    let sel = SubcarrierSelection::draw_seeded(&r.cfg, r.seed);
    let map = sinr_map(
        &r.desired,
        &sel,
        &r.cfg,
        &default_theta_axis(),
        &default_range_axis(),
        CombineMode::ActiveOnly,
    )?;
    let path = args.common.out_dir.join("sinr_map.csv");
    write_csv_file(&path, &map.to_csv(&provenance(&r, "sinr-map")))?;
    let (theta, range, value) = map.peak();
    println!("peak: {theta:.1} deg, {range:.1} m");
    println!("peak sinr (linear): {value:.6}");
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_secrecy_rate(args: &SecrecyRateArgs) -> Result<()> {
    if args.trials == 0 {
        return Err(Error::Domain("trials must be at least 1".to_string()));
    }
    let r = resolve(&args.common)?;
    let empirical = !args.theory_only;
    let path = args.common.out_dir.join("secrecy_rate.csv");
    match args.sweep {
        SweepKind::Snr => {
            let snrs: Vec<f64> = (-2..=4).map(|k| k as f64 * 5.0).collect();
            let spec =
                ExperimentSpec::new(r.cfg.clone(), SweepAxis::SnrDb(snrs), args.trials, r.seed)?;
            let points = run_secrecy_vs_snr(&spec, &r.desired, empirical)?;
            write_csv_file(&path, &curve_to_csv(&points, &provenance(&r, "secrecy-rate")))?;
        }
        SweepKind::Beta1 => {
            let cfg = r
                .cfg
                .to_builder()
                .noise_variance(r.cfg.power_watts() / db_to_linear(args.snr_db))
                .build()?;
            let betas: Vec<f64> = (1..=19).map(|k| k as f64 / 20.0).collect();
            let spec = ExperimentSpec::new(cfg, SweepAxis::Beta1Sq(betas), args.trials, r.seed)?;
            let study = run_secrecy_vs_power_split(&spec, &r.desired, empirical)?;
            let mut csv = curve_to_csv(&study.points, &provenance(&r, "secrecy-rate"));
            csv.push_str(&format!("# argmax_beta1_sq={}\n", study.argmax_beta1_sq));
            write_csv_file(&path, &csv)?;
            println!("argmax beta1_sq: {}", study.argmax_beta1_sq);
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<()> {
    let r = resolve(&args.common)?;
    let report = run_validation::<f64>(r.seed)?;
    print!("{}", report.render());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Error::Domain("one or more checks failed".to_string()))
    }
}

fn cmd_selection_dump(args: &DumpArgs) -> Result<()> {
    let r = resolve(&args.common)?;
    let sel = SubcarrierSelection::draw_seeded(&r.cfg, r.seed);
    let path = args.common.out_dir.join("selection.csv");
    write_csv_file(&path, &sel.to_csv(&provenance(&r, "selection-dump")))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_waveform_dump(args: &DumpArgs) -> Result<()> {
    let r = resolve(&args.common)?;
    let sel = SubcarrierSelection::draw_seeded(&r.cfg, r.seed);
    let bf = phase_alignment(&r.desired, &sel, &r.cfg);
    let scale = r.cfg.power_watts().sqrt() * r.cfg.beta1();
    let coeffs: Vec<_> = bf.v().iter().map(|v| v.scale(scale)).collect();
    let ts = synthesize_from_coefficients(&coeffs, &r.desired, &sel, &r.cfg, 1.0)?;
    let path = args.common.out_dir.join("waveform.csv");
    write_csv_file(&path, &ts.to_csv(&provenance(&r, "waveform-dump")))?;
    println!("wrote {}", path.display());
    Ok(())
}
