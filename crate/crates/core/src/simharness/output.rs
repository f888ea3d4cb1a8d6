//! Scenario serialization: CSV files, the `.meta` sidecar carrying the
//! effective config, and the flat key-value config format itself.
//!
//! Every float is emitted with 17 significant digits so a value survives a
//! text round trip bit-exactly, and files are written atomically (temp file
//! plus rename). The `.meta` sidecar is itself a valid config file: feeding
//! it back reproduces the run byte for byte.

use super::{
    BeamformingRecord, ExtractionRecord, LambdaMode, PatternSample, ReconstructionRecord,
    ScenarioConfig, ScenarioResult,
};
use crate::error::{Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Which scenario a result belongs to; fixes the output file basename.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Reconstruction,
    Beamforming,
    Extraction,
}

impl ScenarioKind {
    pub fn basename(self) -> &'static str {
        match self {
            ScenarioKind::Reconstruction => "reconstruction",
            ScenarioKind::Beamforming => "beamforming",
            ScenarioKind::Extraction => "extraction",
        }
    }
}

/// 17-significant-digit float formatting (lossless text round trip).
pub(crate) fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn parse_float(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s
            .parse()
            .map_err(|_| Error::Parse(format!("bad float {s:?}"))),
    }
}

/// Atomically writes `contents` to `path` (temp file in the same directory,
/// then rename).
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| Error::Io(format!("rename into {}: {e}", path.display())))?;
    Ok(())
}

impl ScenarioConfig {
    /// Serializes to the flat `key = value` format. Keys mirror the config
    /// field names; `frequencies` is a comma-separated list and `snr_db`
    /// accepts `inf`.
    pub fn to_key_values(&self) -> String {
        let freqs: Vec<String> = self.frequencies.iter().map(|f| fmt_float(*f)).collect();
        format!(
            "seed = {}\n\
             n_mics = {}\n\
             side = {}\n\
             nu_max = {}\n\
             snr_db = {}\n\
             lambda = {}\n\
             lambda_mode = {}\n\
             c_sound = {}\n\
             frequencies = {}\n\
             eval_side = {}\n\
             eval_grid_n = {}\n\
             look_angle = {}\n",
            self.seed,
            self.n_mics,
            fmt_float(self.side),
            self.nu_max,
            fmt_float(self.snr_db),
            fmt_float(self.lambda),
            match self.lambda_mode {
                LambdaMode::Absolute => "absolute",
                LambdaMode::RelativeSpectral => "relative",
            },
            fmt_float(self.c_sound),
            freqs.join(","),
            fmt_float(self.eval_side),
            self.eval_grid_n,
            fmt_float(self.look_angle),
        )
    }

    /// Parses the flat key-value format produced by [`Self::to_key_values`].
    /// Unknown keys are rejected; `#` starts a comment; missing keys keep
    /// their defaults.
    pub fn from_key_values(text: &str) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad_int = |k: &str| Error::Parse(format!("bad integer for {k}: {value:?}"));
            match key {
                "seed" => cfg.seed = value.parse().map_err(|_| bad_int("seed"))?,
                "n_mics" => cfg.n_mics = value.parse().map_err(|_| bad_int("n_mics"))?,
                "side" => cfg.side = parse_float(value)?,
                "nu_max" => cfg.nu_max = value.parse().map_err(|_| bad_int("nu_max"))?,
                "snr_db" => cfg.snr_db = parse_float(value)?,
                "lambda" => cfg.lambda = parse_float(value)?,
                "lambda_mode" => {
                    cfg.lambda_mode = match value {
                        "absolute" => LambdaMode::Absolute,
                        "relative" => LambdaMode::RelativeSpectral,
                        other => {
                            return Err(Error::Parse(format!(
                                "lambda_mode must be `absolute` or `relative`, got {other:?}"
                            )))
                        }
                    }
                }
                "c_sound" => cfg.c_sound = parse_float(value)?,
                "frequencies" => {
                    cfg.frequencies = value
                        .split(',')
                        .map(|f| parse_float(f.trim()))
                        .collect::<Result<Vec<f64>>>()?;
                    if cfg.frequencies.is_empty() {
                        return Err(Error::Parse("frequencies list is empty".into()));
                    }
                }
                "eval_side" => cfg.eval_side = parse_float(value)?,
                "eval_grid_n" => {
                    cfg.eval_grid_n = value.parse().map_err(|_| bad_int("eval_grid_n"))?
                }
                "look_angle" => cfg.look_angle = parse_float(value)?,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown config key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }
}

/// Metadata sidecar: a comment header (version, scenario, the
/// frequency-to-wavenumber convention) followed by the effective config.
fn meta_contents(kind: ScenarioKind, cfg: &ScenarioConfig) -> String {
    format!(
        "# rkbeam {} scenario={}\n\
         # wavenumber convention: k = 2*pi*f / c_sound\n\
         {}",
        env!("CARGO_PKG_VERSION"),
        kind.basename(),
        cfg.to_key_values()
    )
}

fn write_with_meta(
    dir: &Path,
    kind: ScenarioKind,
    cfg: &ScenarioConfig,
    csv: String,
) -> Result<Vec<PathBuf>> {
    let csv_path = dir.join(format!("{}.csv", kind.basename()));
    let meta_path = dir.join(format!("{}.meta", kind.basename()));
    write_atomic(&csv_path, &csv)?;
    write_atomic(&meta_path, &meta_contents(kind, cfg))?;
    Ok(vec![csv_path, meta_path])
}

/// Writes `reconstruction.csv` (+ `.meta`) into `dir`. Columns:
/// `freq_hz, mne_proposed_db, mne_omni_db, cond_c, excluded_proposed,
/// excluded_omni`.
pub fn write_reconstruction(
    result: &ScenarioResult<ReconstructionRecord>,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut csv = String::from(
        "freq_hz,mne_proposed_db,mne_omni_db,cond_c,excluded_proposed,excluded_omni\n",
    );
    for r in &result.records {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(r.freq_hz),
            fmt_float(r.mne_proposed_db),
            fmt_float(r.mne_omni_db),
            fmt_float(r.cond_c),
            r.excluded_proposed,
            r.excluded_omni,
        ));
    }
    write_with_meta(dir, ScenarioKind::Reconstruction, &result.config, csv)
}

/// Renders beam-pattern rows `angle_deg, re, im, magnitude_db` (magnitude
/// normalized to the look direction).
pub fn pattern_csv(samples: &[PatternSample]) -> String {
    let mut csv = String::from("angle_deg,re,im,magnitude_db\n");
    for s in samples {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(s.angle_deg),
            fmt_float(s.value.re),
            fmt_float(s.value.im),
            fmt_float(s.magnitude_db),
        ));
    }
    csv
}

/// Writes `beamforming.csv` (per-frequency DI and peak angle),
/// `beamforming_pattern.csv` (the 360-point normalized pattern rows with a
/// leading `freq_hz` column), and the `.meta` sidecar.
pub fn write_beamforming(
    result: &ScenarioResult<BeamformingRecord>,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut csv = String::from("freq_hz,di_db,peak_angle_deg\n");
    let mut pattern = String::from("freq_hz,angle_deg,re,im,magnitude_db\n");
    for r in &result.records {
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt_float(r.freq_hz),
            fmt_float(r.di_db),
            fmt_float(r.peak_angle_deg),
        ));
        for s in &r.pattern {
            pattern.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_float(r.freq_hz),
                fmt_float(s.angle_deg),
                fmt_float(s.value.re),
                fmt_float(s.value.im),
                fmt_float(s.magnitude_db),
            ));
        }
    }
    let mut paths = write_with_meta(dir, ScenarioKind::Beamforming, &result.config, csv)?;
    let pattern_path = dir.join("beamforming_pattern.csv");
    write_atomic(&pattern_path, &pattern)?;
    paths.push(pattern_path);
    Ok(paths)
}

/// Writes `extraction.csv` (+ `.meta`). Columns:
/// `freq_hz, mne_db, amplitude, phase_rad, excluded`.
pub fn write_extraction(
    result: &ScenarioResult<ExtractionRecord>,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut csv = String::from("freq_hz,mne_db,amplitude,phase_rad,excluded\n");
    for r in &result.records {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(r.freq_hz),
            fmt_float(r.mne_db),
            fmt_float(r.amplitude),
            fmt_float(r.phase_rad),
            r.excluded,
        ));
    }
    write_with_meta(dir, ScenarioKind::Extraction, &result.config, csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_is_exact() {
        let cfg = ScenarioConfig {
            seed: 42,
            n_mics: 7,
            side: 0.123456789012345,
            nu_max: 3,
            snr_db: f64::INFINITY,
            lambda: 1e-7,
            lambda_mode: LambdaMode::RelativeSpectral,
            c_sound: 340.29,
            frequencies: vec![101.5, 999.25, 8000.0],
            eval_side: 0.61,
            eval_grid_n: 13,
            look_angle: std::f64::consts::PI / 3.0,
        };
        let text = cfg.to_key_values();
        let back = ScenarioConfig::from_key_values(&text).unwrap();
        assert_eq!(cfg, back);
        // The meta sidecar parses as a config too.
        let meta = meta_contents(ScenarioKind::Extraction, &cfg);
        let back = ScenarioConfig::from_key_values(&meta).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn meta_records_wavenumber_convention() {
        let cfg = ScenarioConfig::default();
        let meta = meta_contents(ScenarioKind::Reconstruction, &cfg);
        assert!(meta.contains("k = 2*pi*f / c_sound"));
        assert!(meta.contains("c_sound = 3.4300000000000000e2"));
        assert!(meta.contains("scenario=reconstruction"));
    }

    #[test]
    fn config_parser_rejects_garbage() {
        assert!(ScenarioConfig::from_key_values("seed 1").is_err());
        assert!(ScenarioConfig::from_key_values("not_a_key = 3").is_err());
        assert!(ScenarioConfig::from_key_values("seed = x").is_err());
        assert!(ScenarioConfig::from_key_values("frequencies = ").is_err());
        // Defaults survive an empty file.
        let cfg = ScenarioConfig::from_key_values("# nothing\n\n").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
    }

    #[test]
    fn float_format_round_trips() {
        for &x in &[
            0.4,
            1e-300,
            -std::f64::consts::PI,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ] {
            let s = fmt_float(x);
            let back = parse_float(&s).unwrap();
            assert_eq!(x.to_bits(), back.to_bits(), "{x} -> {s} -> {back}");
        }
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_atomic(&path, "a\n").unwrap();
        write_atomic(&path, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
    }
}
