//! `rkbeam` — scenario runs, verification suites, and single-shot
//! beam-pattern dumps for the reproducing-kernel beamforming library.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on
//! configuration/usage errors, 3 on numerical failure (e.g. a singular
//! sampling matrix without regularization).

use clap::{Args, Parser, Subcommand};
use rkbeam_core::beamformer::{beam_pattern, general_weights, simple_weights};
use rkbeam_core::directivity::from_flat_record;
use rkbeam_core::error::Error;
use rkbeam_core::kernelfield::build_c;
use rkbeam_core::simharness::{
    gen_array, pattern_csv, run_beamforming, run_extraction, run_reconstruction, write_atomic,
    write_beamforming, write_extraction, write_reconstruction, LambdaMode, PatternSample,
    ScenarioConfig,
};
use rkbeam_core::{UnitVec, VecD};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "rkbeam",
    version,
    about = "Reproducing-kernel-domain beamforming simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frequency sweep of sound-field reconstruction, with an
    /// omni-assumption baseline
    Reconstruct(ScenarioArgs),
    /// Frequency sweep of the simple beamformer: directivity index and
    /// beam patterns
    Beamform(ScenarioArgs),
    /// Frequency sweep of directional-field extraction from the kernel
    /// test field
    Extract(ScenarioArgs),
    /// Run the built-in verification suites and report per-suite errors
    Selftest,
    /// Dump a single-frequency beam pattern
    Pattern(PatternArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Flat key-value config file; flags below override its entries
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated frequencies in Hz (replaces the sweep)
    #[arg(long, value_name = "HZ,HZ,...")]
    freq_list: Option<String>,
    /// Regularization parameter λ
    #[arg(long)]
    lambda: Option<f64>,
    /// λ interpretation: `relative` scales by the sampling matrix's largest
    /// singular value, `absolute` uses λ as-is
    #[arg(long, value_name = "absolute|relative")]
    lambda_mode: Option<String>,
    /// Signal-to-noise ratio in dB, or `inf` for noiseless
    #[arg(long, value_name = "DB|inf")]
    snr: Option<String>,
    /// Output directory for CSV and metadata files
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args)]
struct PatternArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Frequency in Hz
    #[arg(long, default_value_t = 1000.0)]
    freq: f64,
    /// Beam shape as a flat directivity record `d,nu_max,re,im,...`;
    /// defaults to the simple beam at the configured look angle
    #[arg(long, value_name = "RECORD")]
    zeta: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("RKBEAM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        } else {
            eprintln!("error: RKBEAM_THREADS must be an integer, got {threads:?}");
            std::process::exit(2);
        }
    }
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Io(_) => 2,
                _ => 3,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Reconstruct(args) => {
            let cfg = load_config(&args)?;
            let result = run_reconstruction(&cfg)?;
            for r in &result.records {
                println!(
                    "reconstruct f={:.1} Hz: proposed {:.2} dB, omni {:.2} dB, cond {:.3e}",
                    r.freq_hz, r.mne_proposed_db, r.mne_omni_db, r.cond_c
                );
            }
            let paths = write_reconstruction(&result, &args.out)?;
            report_files(&paths);
            Ok(0)
        }
        Command::Beamform(args) => {
            let cfg = load_config(&args)?;
            let result = run_beamforming(&cfg)?;
            for r in &result.records {
                println!(
                    "beamform f={:.1} Hz: DI {:.2} dB, peak {:.0} deg",
                    r.freq_hz, r.di_db, r.peak_angle_deg
                );
            }
            let paths = write_beamforming(&result, &args.out)?;
            report_files(&paths);
            Ok(0)
        }
        Command::Extract(args) => {
            let cfg = load_config(&args)?;
            let result = run_extraction(&cfg)?;
            for r in &result.records {
                println!(
                    "extract f={:.1} Hz: MNE {:.2} dB, amplitude {:.4}, phase {:.4} rad",
                    r.freq_hz, r.mne_db, r.amplitude, r.phase_rad
                );
            }
            let paths = write_extraction(&result, &args.out)?;
            report_files(&paths);
            Ok(0)
        }
        Command::Selftest => {
            let mut ok = true;
            for report in rkbeam_core::verify::run_all() {
                let status = if report.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{}: {status} (max err {:.3e}, tol {:.0e}, {} cases)",
                    report.name, report.max_err, report.tolerance, report.cases
                );
                ok &= report.passed();
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Pattern(args) => pattern_command(args),
    }
}

fn pattern_command(args: PatternArgs) -> Result<i32, Error> {
    let cfg = load_config(&args.scenario)?;
    let array = gen_array(&cfg);
    let k = cfg.wavenumber(args.freq)?;
    let c = build_c(&array, k, cfg.nu_max);
    let phi = cfg.look_direction();
    let origin = VecD::zero(rkbeam_core::Dim::Two);
    let lambda = cfg.effective_lambda(&c);
    let weights = match &args.zeta {
        None => simple_weights(&c, &array, k, &phi, &origin, lambda)?,
        Some(record) => {
            let zeta = from_flat_record(record)?;
            general_weights(&c, &array, k, &zeta, &origin, lambda)?
        }
    };
    let angles: Vec<UnitVec> = (0..360)
        .map(|deg| UnitVec::from_angle((deg as f64).to_radians()))
        .collect();
    let values = beam_pattern(&weights, &array, k, &angles);
    let y_look = beam_pattern(&weights, &array, k, &[phi])[0];
    let samples: Vec<PatternSample> = values
        .iter()
        .enumerate()
        .map(|(deg, y)| PatternSample {
            angle_deg: deg as f64,
            value: *y,
            magnitude_db: if y.norm() > 0.0 && y_look.norm() > 0.0 {
                20.0 * (y.norm() / y_look.norm()).log10()
            } else {
                f64::NEG_INFINITY
            },
        })
        .collect();

    let csv_path = args.scenario.out.join("pattern.csv");
    write_atomic(&csv_path, &pattern_csv(&samples))?;
    let meta_path = args.scenario.out.join("pattern.meta");
    let meta = format!(
        "# rkbeam {} scenario=pattern freq_hz={}\n# wavenumber convention: k = 2*pi*f / c_sound\n{}",
        env!("CARGO_PKG_VERSION"),
        args.freq,
        cfg.to_key_values()
    );
    write_atomic(&meta_path, &meta)?;

    let peak = samples
        .iter()
        .max_by(|a, b| a.value.norm().partial_cmp(&b.value.norm()).unwrap())
        .unwrap();
    println!(
        "pattern f={:.1} Hz: peak {:.0} deg at {:+.2} dB relative to look direction",
        args.freq, peak.angle_deg, peak.magnitude_db
    );
    report_files(&[csv_path, meta_path]);
    Ok(0)
}

fn report_files(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

/// Reads the config file (when given) and applies flag overrides.
fn load_config(args: &ScenarioArgs) -> Result<ScenarioConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Parse(format!("cannot read config file {}: {e}", path.display()))
            })?;
            ScenarioConfig::from_key_values(&text)
                .map_err(|e| Error::Parse(format!("in {}: {e}", path.display())))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(freqs) = &args.freq_list {
        cfg.frequencies = freqs
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad frequency {f:?} in --freq-list")))
            })
            .collect::<Result<Vec<f64>, Error>>()?;
        if cfg.frequencies.is_empty() {
            return Err(Error::Parse("--freq-list is empty".into()));
        }
    }
    if let Some(lambda) = args.lambda {
        cfg.lambda = lambda;
    }
    if let Some(mode) = &args.lambda_mode {
        cfg.lambda_mode = match mode.as_str() {
            "absolute" => LambdaMode::Absolute,
            "relative" => LambdaMode::RelativeSpectral,
            other => {
                return Err(Error::Parse(format!(
                    "--lambda-mode must be `absolute` or `relative`, got {other:?}"
                )))
            }
        };
    }
    if let Some(snr) = &args.snr {
        cfg.snr_db = match snr.as_str() {
            "inf" => f64::INFINITY,
            v => v
                .parse()
                .map_err(|_| Error::Parse(format!("bad --snr value {v:?} (number or `inf`)")))?,
        };
    }
    Ok(cfg)
}
