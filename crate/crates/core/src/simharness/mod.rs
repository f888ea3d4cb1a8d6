//! Deterministic simulation scenarios at desk scale: random directional
//! arrays in a square region, plane-wave and kernel test fields,
//! SNR-calibrated noise, reconstruction/beamforming/extraction sweeps over
//! frequency, and CSV output.
//!
//! Everything is a pure function of [`ScenarioConfig`] — the seed fixes the
//! array, and noise streams are split per frequency index so a sweep can be
//! evaluated in parallel without changing a single output byte.
//!
//! All scenarios are planar (d = 2).

mod output;

pub use output::{
    pattern_csv, write_atomic, write_beamforming, write_extraction, write_reconstruction,
    ScenarioKind,
};

use crate::beamformer::{di_from_samples, plane_wave_inputs, simple_weights, BeamTarget};
use crate::directivity::{i_pow, plane_wave_response, rk_directional_derivative};
use crate::error::{Error, Result};
use crate::geom::{Dim, UnitVec, VecD, Wavenumber};
use crate::harmonics::{dim_y, project_directivity, synthesize, HarmonicCoeffs};
use crate::kernelfield::{build_c, CSolver, KernelField, Mic, MicArray};
use crate::specialfn::big_j;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Points with a reference magnitude below this are excluded from the mean
/// normalized error and counted separately.
const MNE_EXCLUSION_FLOOR: f64 = 1e-12;

/// Per-point floor for the error ratio in dB (an exact match would be -∞).
const MNE_POINT_FLOOR_DB: f64 = -300.0;

/// How the scenario turns its λ into the absolute Tikhonov parameter of a
/// given sampling matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    /// Use λ as-is.
    Absolute,
    /// Scale by the matrix: `λ_eff = λ·σ_max(C)`. Useful when sweeping
    /// across frequencies whose sampling matrices differ wildly in scale;
    /// the absolute mode is the default.
    RelativeSpectral,
}

/// Full description of one simulation scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub n_mics: usize,
    /// Side length of the square microphone region, meters.
    pub side: f64,
    /// Maximum directivity order of the generated sensors.
    pub nu_max: u32,
    /// Signal-to-noise ratio in dB; `f64::INFINITY` disables noise.
    pub snr_db: f64,
    /// Tikhonov regularization parameter; interpreted per `lambda_mode`.
    pub lambda: f64,
    /// Interpretation of `lambda`.
    pub lambda_mode: LambdaMode,
    /// Speed of sound, m/s.
    pub c_sound: f64,
    /// Frequencies to sweep, Hz.
    pub frequencies: Vec<f64>,
    /// Side length of the square evaluation region, meters.
    pub eval_side: f64,
    /// Evaluation grid resolution per axis.
    pub eval_grid_n: usize,
    /// Look direction (and plane-wave incidence) angle, radians.
    pub look_angle: f64,
}

impl Default for ScenarioConfig {
    /// The common desk-scale parameter set: 30 sensors of order 2 in a
    /// 0.4 m square, 30 dB SNR, λ = 0.001, 45° look direction, 40
    /// log-spaced frequencies over [100, 8000] Hz, and a 51×51 grid over a
    /// 0.5 m evaluation square.
    fn default() -> ScenarioConfig {
        ScenarioConfig {
            seed: 1,
            n_mics: 30,
            side: 0.4,
            nu_max: 2,
            snr_db: 30.0,
            lambda: 0.001,
            lambda_mode: LambdaMode::Absolute,
            c_sound: 343.0,
            frequencies: default_frequencies(),
            eval_side: 0.5,
            eval_grid_n: 51,
            look_angle: PI / 4.0,
        }
    }
}

/// 40 log-spaced frequencies covering 100 Hz to 8 kHz.
pub fn default_frequencies() -> Vec<f64> {
    (0..40)
        .map(|i| 100.0 * 80.0f64.powf(i as f64 / 39.0))
        .collect()
}

impl ScenarioConfig {
    pub fn wavenumber(&self, freq_hz: f64) -> Result<Wavenumber> {
        Wavenumber::from_frequency(freq_hz, self.c_sound)
    }

    pub fn look_direction(&self) -> UnitVec {
        UnitVec::from_angle(self.look_angle)
    }

    /// Noise stream for one frequency index: same seed, distinct ChaCha
    /// stream (stream 0 is reserved for array generation).
    pub fn noise_rng(&self, freq_index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(freq_index as u64 + 1);
        rng
    }

    /// Absolute Tikhonov parameter for a concrete sampling matrix.
    pub fn effective_lambda(&self, c: &crate::kernelfield::CMatrix) -> f64 {
        match self.lambda_mode {
            LambdaMode::Absolute => self.lambda,
            LambdaMode::RelativeSpectral => self.lambda * c.spectral_norm_estimate(),
        }
    }
}

/// A test field to sample with an array.
#[derive(Debug, Clone)]
pub enum FieldSpec {
    /// `A e^{iθ₀} e^{-ik ϑ·r}`.
    PlaneWave {
        direction: UnitVec,
        amplitude: f64,
        phase: f64,
    },
    /// The kernel centered at the origin: an equal-amplitude, equal-phase
    /// superposition of plane waves from every direction.
    KernelAtOrigin,
    /// Interior mode expansion with the given coefficients.
    ModeField { modes: HarmonicCoeffs },
}

/// Generates the random directional array for a config: positions uniform
/// in the centered square, directivity coefficients with independent
/// real/imaginary parts uniform in [-1, 1], and the ν = 0 coefficient
/// redrawn with magnitude uniform in `[0.5·√(2π), 1.5·√(2π)]` at zero
/// phase. The magnitude floor keeps the sampling matrix invertible at low
/// frequency, where the higher radial terms vanish and the omnidirectional
/// component carries the row; the common phase is what lets an
/// omni-assumption baseline coherently average the array there at all —
/// with uniformly random ν = 0 phases that baseline would sit near 0 dB
/// error at every frequency instead of degrading only with rising
/// frequency.
pub fn gen_array(cfg: &ScenarioConfig) -> MicArray {
    let dim = Dim::Two;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let half = cfg.side / 2.0;
    let mics: Vec<Mic> = (0..cfg.n_mics)
        .map(|_| {
            let x = rng.gen_range(-half..half);
            let y = rng.gen_range(-half..half);
            let mut zeta = HarmonicCoeffs::zeros(dim, cfg.nu_max);
            for nu in 0..=cfg.nu_max {
                for mu in 0..dim_y(dim, nu) {
                    let re = rng.gen_range(-1.0..1.0);
                    let im = rng.gen_range(-1.0..1.0);
                    zeta.set(nu, mu, Complex64::new(re, im));
                }
            }
            let sqrt_area = (2.0 * PI).sqrt();
            let mag = rng.gen_range(0.5 * sqrt_area..1.5 * sqrt_area);
            zeta.set(0, 0, Complex64::new(mag, 0.0));
            Mic {
                position: VecD::new2(x, y),
                zeta,
            }
        })
        .collect();
    MicArray::new(mics).expect("generated array is well formed")
}

/// Samples a field with every sensor of an array: the directional input
/// `ŝ_n = ζ́_n(D) p̂(r_n)`, evaluated analytically per field type.
pub fn sample_field(spec: &FieldSpec, array: &MicArray, k: Wavenumber) -> Vec<Complex64> {
    match spec {
        FieldSpec::PlaneWave {
            direction,
            amplitude,
            phase,
        } => {
            let scale = Complex64::from_polar(*amplitude, *phase);
            array
                .mics()
                .iter()
                .map(|m| scale * plane_wave_response(&m.zeta, direction, k, &m.position))
                .collect()
        }
        FieldSpec::KernelAtOrigin => {
            // ζ́_n(∂) κ_k(·, 0) evaluated at r_n.
            let origin = VecD::zero(array.dim());
            array
                .mics()
                .iter()
                .map(|m| rk_directional_derivative(&m.zeta, k, &m.position, &origin))
                .collect()
        }
        FieldSpec::ModeField { modes } => array
            .mics()
            .iter()
            .map(|m| sample_mode_field(modes, &m.zeta, k, &m.position))
            .collect(),
    }
}

/// Directional sample of a mode field.
///
/// The field's angular spectrum is band-limited with harmonic coefficients
/// `P̃_ν^μ = i^ν p̂_ν^μ`; multiplying by the sensor directivity stays
/// band-limited at the sum of the truncation orders, so the reception
/// integral reduces term by term through
/// `∫ Y_ν^μ(ϑ) e^{-ikϑ·r} dϑ = (-i)^ν Ĵ_{d,ν}(k|r|) Y_ν^μ(r̂)`.
fn sample_mode_field(
    modes: &HarmonicCoeffs,
    zeta: &HarmonicCoeffs,
    k: Wavenumber,
    r: &VecD,
) -> Complex64 {
    let dim = modes.dim();
    // Angular spectrum of the field.
    let mut spectrum = HarmonicCoeffs::zeros(dim, modes.nu_max());
    for (nu, mu, c) in modes.iter() {
        spectrum.set(nu, mu, i_pow(nu) * c);
    }
    // Band-limited product P̃·ζ, projected exactly.
    let combined_order = modes.nu_max() + zeta.nu_max();
    let product = project_directivity(
        dim,
        |d| synthesize(&spectrum, d) * synthesize(zeta, d),
        combined_order,
        4 * combined_order as usize + 6,
    );

    let dist = r.norm();
    if dist == 0.0 {
        return product.coeffs.get(0, 0) * dim.sphere_area().sqrt();
    }
    let dir = UnitVec::new(*r).expect("nonzero radius");
    let z = k.get() * dist;
    let mut acc = Complex64::new(0.0, 0.0);
    for (nu, mu, h) in product.coeffs.iter() {
        if h.norm() > 0.0 {
            acc += h
                * i_pow(nu).conj()
                * big_j(dim, nu, z)
                * crate::harmonics::sph_harm_unchecked(dim, nu, mu, &dir);
        }
    }
    acc
}

/// Adds i.i.d. circular complex Gaussian noise calibrated so that
/// `10·log10(mean|ŝ|² / σ²)` equals the requested SNR. An infinite SNR
/// returns the signal unchanged; an all-zero signal is an error.
pub fn add_noise<R: Rng>(s_hat: &[Complex64], snr_db: f64, rng: &mut R) -> Result<Vec<Complex64>> {
    if snr_db.is_infinite() && snr_db > 0.0 {
        return Ok(s_hat.to_vec());
    }
    let power: f64 = s_hat.iter().map(|z| z.norm_sqr()).sum::<f64>() / s_hat.len() as f64;
    if power == 0.0 {
        return Err(Error::Degenerate(
            "cannot calibrate noise against an all-zero signal".into(),
        ));
    }
    let sigma2 = power * 10.0f64.powf(-snr_db / 10.0);
    let scale = (sigma2 / 2.0).sqrt();
    Ok(s_hat
        .iter()
        .map(|z| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            z + Complex64::new(scale * re, scale * im)
        })
        .collect())
}

/// Mean normalized error between a reference and an estimate.
#[derive(Debug, Clone, Copy)]
pub struct MneResult {
    pub db: f64,
    /// Points excluded because the reference magnitude was below 1e-12.
    pub excluded: usize,
}

/// `MNE = (1/M) Σ 20·log10(|ref_m - est_m| / |ref_m|)` with per-point values
/// clamped at -300 dB and near-zero references excluded (and counted).
pub fn mne(reference: &[Complex64], estimate: &[Complex64]) -> Result<MneResult> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            context: "mne",
            expected: reference.len(),
            got: estimate.len(),
        });
    }
    let mut acc = 0.0;
    let mut used = 0usize;
    let mut excluded = 0usize;
    for (r, e) in reference.iter().zip(estimate) {
        let rn = r.norm();
        if rn < MNE_EXCLUSION_FLOOR {
            excluded += 1;
            continue;
        }
        let ratio = (r - e).norm() / rn;
        let db = if ratio > 0.0 {
            (20.0 * ratio.log10()).max(MNE_POINT_FLOOR_DB)
        } else {
            MNE_POINT_FLOOR_DB
        };
        acc += db;
        used += 1;
    }
    if used == 0 {
        return Err(Error::Degenerate(
            "every evaluation point was excluded from the MNE".into(),
        ));
    }
    Ok(MneResult {
        db: acc / used as f64,
        excluded,
    })
}

/// The square evaluation grid of a config, row-major.
pub fn eval_grid(cfg: &ScenarioConfig) -> Vec<VecD> {
    let n = cfg.eval_grid_n;
    let half = cfg.eval_side / 2.0;
    let coord = |j: usize| {
        if n == 1 {
            0.0
        } else {
            -half + cfg.eval_side * j as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            out.push(VecD::new2(coord(ix), coord(iy)));
        }
    }
    out
}

/// Result of one scenario run: the effective config plus per-frequency
/// records.
#[derive(Debug, Clone)]
pub struct ScenarioResult<R> {
    pub config: ScenarioConfig,
    pub records: Vec<R>,
}

#[derive(Debug, Clone)]
pub struct ReconstructionRecord {
    pub freq_hz: f64,
    /// MNE of the directivity-aware reconstruction.
    pub mne_proposed_db: f64,
    /// MNE when the same inputs are inverted as if every sensor were omni.
    pub mne_omni_db: f64,
    /// 1-norm condition estimate of the directivity-aware sampling matrix.
    pub cond_c: f64,
    pub excluded_proposed: usize,
    pub excluded_omni: usize,
}

#[derive(Debug, Clone)]
pub struct PatternSample {
    pub angle_deg: f64,
    pub value: Complex64,
    /// Magnitude normalized to the look direction, dB.
    pub magnitude_db: f64,
}

#[derive(Debug, Clone)]
pub struct BeamformingRecord {
    pub freq_hz: f64,
    pub di_db: f64,
    /// Angle of the emitted pattern's magnitude peak, degrees.
    pub peak_angle_deg: f64,
    /// 360 one-degree samples.
    pub pattern: Vec<PatternSample>,
}

#[derive(Debug, Clone)]
pub struct ExtractionRecord {
    pub freq_hz: f64,
    /// MNE of the extracted field against the desired plane wave.
    pub mne_db: f64,
    pub excluded: usize,
    /// Estimated angular-spectrum amplitude at the look direction (the true
    /// kernel field has amplitude exactly 1).
    pub amplitude: f64,
    /// Estimated phase, radians (true value 0).
    pub phase_rad: f64,
}

/// Reconstruction sweep: a unit plane wave from the look angle is sampled
/// by the directional array (plus noise), then inverted twice per frequency
/// — once with the true directivities and once assuming omni sensors —
/// and both reconstructions are scored on the evaluation grid.
pub fn run_reconstruction(cfg: &ScenarioConfig) -> Result<ScenarioResult<ReconstructionRecord>> {
    let array = gen_array(cfg);
    let omni_array = array.as_omni();
    let grid = eval_grid(cfg);
    let incidence = cfg.look_direction();
    let spec = FieldSpec::PlaneWave {
        direction: incidence,
        amplitude: 1.0,
        phase: 0.0,
    };

    let records: Result<Vec<ReconstructionRecord>> = cfg
        .frequencies
        .par_iter()
        .enumerate()
        .map(|(idx, &freq)| {
            let k = cfg.wavenumber(freq)?;
            let clean = sample_field(&spec, &array, k);
            let mut rng = cfg.noise_rng(idx);
            let noisy = add_noise(&clean, cfg.snr_db, &mut rng)?;

            let reference: Vec<Complex64> = grid
                .iter()
                .map(|r| Complex64::new(0.0, -k.get() * incidence.dot(r)).exp())
                .collect();

            let c_prop = build_c(&array, k, cfg.nu_max);
            let cond_c = c_prop.condition_estimate();
            let a = CSolver::new(&c_prop, cfg.effective_lambda(&c_prop))?.solve_coeffs(&noisy)?;
            let field = KernelField::new(a, array.positions().copied().collect(), k)?;
            let est = crate::kernelfield::reconstruct(&field, &grid);
            let proposed = mne(&reference, &est)?;

            let c_omni = build_c(&omni_array, k, 0);
            let a = CSolver::new(&c_omni, cfg.effective_lambda(&c_omni))?.solve_coeffs(&noisy)?;
            let field = KernelField::new(a, array.positions().copied().collect(), k)?;
            let est = crate::kernelfield::reconstruct(&field, &grid);
            let omni = mne(&reference, &est)?;

            Ok(ReconstructionRecord {
                freq_hz: freq,
                mne_proposed_db: proposed.db,
                mne_omni_db: omni.db,
                cond_c,
                excluded_proposed: proposed.excluded,
                excluded_omni: omni.excluded,
            })
        })
        .collect();

    Ok(ScenarioResult {
        config: cfg.clone(),
        records: records?,
    })
}

/// Number of pattern samples used for the DI quadrature; the emitted
/// pattern is this decimated to 360 one-degree samples.
const PATTERN_QUAD: usize = 3600;

/// Beamforming sweep: a simple beamformer at the origin steered to the look
/// angle; per frequency the (noisy) plane-wave response over 3600 angles
/// gives the directivity index, and a 360-point normalized pattern is
/// emitted.
pub fn run_beamforming(cfg: &ScenarioConfig) -> Result<ScenarioResult<BeamformingRecord>> {
    let array = gen_array(cfg);
    let phi = cfg.look_direction();
    let origin = VecD::zero(Dim::Two);

    let records: Result<Vec<BeamformingRecord>> = cfg
        .frequencies
        .par_iter()
        .enumerate()
        .map(|(idx, &freq)| {
            let k = cfg.wavenumber(freq)?;
            let c = build_c(&array, k, cfg.nu_max);
            let w = simple_weights(&c, &array, k, &phi, &origin, cfg.effective_lambda(&c))?;

            let mut rng = cfg.noise_rng(idx);
            let mut samples = Vec::with_capacity(PATTERN_QUAD);
            for i in 0..PATTERN_QUAD {
                let dir = UnitVec::from_angle(2.0 * PI * i as f64 / PATTERN_QUAD as f64);
                let inputs = plane_wave_inputs(&array, k, &dir);
                let noisy = add_noise(&inputs, cfg.snr_db, &mut rng)?;
                samples.push(crate::beamformer::apply(&w, &noisy)?);
            }

            let look_idx = ((cfg.look_angle.rem_euclid(2.0 * PI)) / (2.0 * PI)
                * PATTERN_QUAD as f64)
                .round() as usize
                % PATTERN_QUAD;
            let y_look = samples[look_idx];
            let di_db = di_from_samples(&samples, y_look)?;

            let step = PATTERN_QUAD / 360;
            let pattern: Vec<PatternSample> = (0..360)
                .map(|deg| {
                    let y = samples[deg * step];
                    let magnitude_db = if y.norm() > 0.0 && y_look.norm() > 0.0 {
                        20.0 * (y.norm() / y_look.norm()).log10()
                    } else {
                        f64::NEG_INFINITY
                    };
                    PatternSample {
                        angle_deg: deg as f64,
                        value: y,
                        magnitude_db,
                    }
                })
                .collect();
            let peak_angle_deg = pattern
                .iter()
                .max_by(|a, b| a.value.norm().partial_cmp(&b.value.norm()).unwrap())
                .map(|s| s.angle_deg)
                .unwrap_or(0.0);

            Ok(BeamformingRecord {
                freq_hz: freq,
                di_db,
                peak_angle_deg,
                pattern,
            })
        })
        .collect();

    Ok(ScenarioResult {
        config: cfg.clone(),
        records: records?,
    })
}

/// Extraction sweep: the field is the kernel at the origin (plane waves of
/// equal amplitude and phase from every direction); the simple beam at the
/// look angle extracts the matching plane-wave component over the
/// evaluation grid, scored against `e^{-ikφ·r}`, alongside the estimated
/// amplitude and phase of the angular spectrum at the look direction.
pub fn run_extraction(cfg: &ScenarioConfig) -> Result<ScenarioResult<ExtractionRecord>> {
    let array = gen_array(cfg);
    let phi = cfg.look_direction();
    let grid = eval_grid(cfg);

    let records: Result<Vec<ExtractionRecord>> = cfg
        .frequencies
        .par_iter()
        .enumerate()
        .map(|(idx, &freq)| {
            let k = cfg.wavenumber(freq)?;
            let clean = sample_field(&FieldSpec::KernelAtOrigin, &array, k);
            let mut rng = cfg.noise_rng(idx);
            let noisy = add_noise(&clean, cfg.snr_db, &mut rng)?;

            let c = build_c(&array, k, cfg.nu_max);
            let lambda = cfg.effective_lambda(&c);
            let solver = CSolver::new(&c, lambda)?;
            let a = solver.solve_coeffs(&noisy)?;
            let field = KernelField::new(a, array.positions().copied().collect(), k)?;
            let spectrum = crate::kernelfield::estimate_spectrum(&field, &phi);

            let ex = crate::beamformer::extraction_matrix(
                &c,
                &array,
                k,
                |r| BeamTarget::Look { phi, r },
                &grid,
                lambda,
            )?;
            let extracted = ex.extract(&noisy)?;
            let desired: Vec<Complex64> = grid
                .iter()
                .map(|r| Complex64::new(0.0, -k.get() * phi.dot(r)).exp())
                .collect();
            let score = mne(&desired, &extracted)?;

            Ok(ExtractionRecord {
                freq_hz: freq,
                mne_db: score.db,
                excluded: score.excluded,
                amplitude: spectrum.norm(),
                phase_rad: spectrum.arg(),
            })
        })
        .collect();

    Ok(ScenarioResult {
        config: cfg.clone(),
        records: records?,
    })
}
