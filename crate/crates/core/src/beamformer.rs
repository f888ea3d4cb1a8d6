//! Simple, general, and extraction beamformers in the reproducing-kernel
//! domain, beam-pattern and directivity-index evaluation, and the
//! spherical-harmonic-domain weight construction they generalize.
//!
//! A beamformer here is a precomputed weight vector `w` applied to the
//! frequency-domain array inputs as `wᴴ ŝ`. The weights satisfy
//! `w* = Rᵀ v`, where `R` is the (regularized) inverse used for coefficient
//! estimation and `v` is the steering vector: plain plane-wave phases for
//! the simple beamformer, kernel-derivative samples for the general one.
//! Consequently `wᴴ ŝ = vᵀ a` with `a = R ŝ` — the functional applied to
//! the reconstructed field.

use crate::directivity::{i_pow, rk_directional_derivative, Directivity};
use crate::error::{Error, Result};
use crate::geom::{Dim, UnitVec, VecD, Wavenumber};
use crate::harmonics::{dim_y, sph_harm_unchecked, sphere_quadrature, HarmonicCoeffs};
use crate::kernelfield::{CMatrix, CSolver, MicArray};
use num_complex::Complex64;

/// What a beamformer is steered at: a bare look direction (simple
/// beamformer) or a full beam shape (general beamformer), at a position.
#[derive(Debug, Clone)]
pub enum BeamTarget {
    Look { phi: UnitVec, r: VecD },
    Shape { zeta: Directivity, r: VecD },
}

/// Precomputed beamformer weights for one wavenumber.
#[derive(Debug, Clone)]
pub struct BeamWeights {
    w: Vec<Complex64>,
    k: Wavenumber,
    target: BeamTarget,
}

impl BeamWeights {
    pub fn weights(&self) -> &[Complex64] {
        &self.w
    }

    pub fn k(&self) -> Wavenumber {
        self.k
    }

    pub fn target(&self) -> &BeamTarget {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Steering vector for a target: `v_n = exp(ik φ·(r_n - r))` for a look
/// direction, `v_n = ζ́(∂₁)κ_k(r, r_n)` for a beam shape.
fn steering_vector(array: &MicArray, k: Wavenumber, target: &BeamTarget) -> Vec<Complex64> {
    match target {
        BeamTarget::Look { phi, r } => array
            .positions()
            .map(|rn| Complex64::new(0.0, k.get() * phi.dot(&rn.sub(r))).exp())
            .collect(),
        BeamTarget::Shape { zeta, r } => array
            .positions()
            .map(|rn| rk_directional_derivative(zeta, k, r, rn))
            .collect(),
    }
}

/// Builds weights from a prepared solver, asserting the output contract
/// `wᴴ ŝ = vᵀ a` on one probe input.
fn build_weights(
    solver: &CSolver,
    array: &MicArray,
    k: Wavenumber,
    target: BeamTarget,
) -> Result<BeamWeights> {
    let v = steering_vector(array, k, &target);
    let w = solver.solve_weights(&v)?;

    // Probe check: the two evaluation routes of the functional must agree.
    let probe: Vec<Complex64> = (0..v.len())
        .map(|n| {
            let t = 0.7 * n as f64 + 0.3;
            Complex64::new(t.cos(), (1.3 * t).sin())
        })
        .collect();
    let via_weights = apply_unchecked(&w, &probe);
    let a = solver.solve_coeffs(&probe)?;
    let via_coeffs: Complex64 = v.iter().zip(&a).map(|(vi, ai)| vi * ai).sum();
    let scale = via_weights.norm().max(via_coeffs.norm()).max(1.0);
    assert!(
        (via_weights - via_coeffs).norm() <= 1e-8 * scale,
        "beamformer weight contract violated: {via_weights} vs {via_coeffs}"
    );

    Ok(BeamWeights { w, k, target })
}

/// Simple beamformer: extracts the plane-wave component from look direction
/// `phi` at position `r`.
pub fn simple_weights(
    c: &CMatrix,
    array: &MicArray,
    k: Wavenumber,
    phi: &UnitVec,
    r: &VecD,
    lambda: f64,
) -> Result<BeamWeights> {
    let solver = CSolver::new(c, lambda)?;
    build_weights(&solver, array, k, BeamTarget::Look { phi: *phi, r: *r })
}

/// General beamformer: returns the virtual directional input with beam shape
/// ζ at position `r`.
pub fn general_weights(
    c: &CMatrix,
    array: &MicArray,
    k: Wavenumber,
    zeta: &Directivity,
    r: &VecD,
    lambda: f64,
) -> Result<BeamWeights> {
    let solver = CSolver::new(c, lambda)?;
    build_weights(
        &solver,
        array,
        k,
        BeamTarget::Shape {
            zeta: zeta.clone(),
            r: *r,
        },
    )
}

/// Beamformer output `wᴴ ŝ`.
pub fn apply(w: &BeamWeights, s_hat: &[Complex64]) -> Result<Complex64> {
    if s_hat.len() != w.w.len() {
        return Err(Error::LengthMismatch {
            context: "beamformer apply",
            expected: w.w.len(),
            got: s_hat.len(),
        });
    }
    Ok(apply_unchecked(&w.w, s_hat))
}

fn apply_unchecked(w: &[Complex64], s: &[Complex64]) -> Complex64 {
    w.iter().zip(s).map(|(wi, si)| wi.conj() * si).sum()
}

/// Weight vectors for a fixed target stacked over multiple extraction
/// points; `Wᴴ ŝ` yields the directional field sample at each point.
#[derive(Debug, Clone)]
pub struct ExtractionMatrix {
    columns: Vec<BeamWeights>,
    points: Vec<VecD>,
}

impl ExtractionMatrix {
    pub fn points(&self) -> &[VecD] {
        &self.points
    }

    pub fn columns(&self) -> &[BeamWeights] {
        &self.columns
    }

    /// Applies every column: the extracted directional field over the
    /// point set.
    pub fn extract(&self, s_hat: &[Complex64]) -> Result<Vec<Complex64>> {
        self.columns.iter().map(|w| apply(w, s_hat)).collect()
    }
}

/// Builds the extraction matrix: one weight column per evaluation point,
/// sharing a single factorization. `target_at` gives the beam target at a
/// point (the look direction or beam shape stays fixed, the position moves).
pub fn extraction_matrix(
    c: &CMatrix,
    array: &MicArray,
    k: Wavenumber,
    target_at: impl Fn(VecD) -> BeamTarget,
    points: &[VecD],
    lambda: f64,
) -> Result<ExtractionMatrix> {
    if points.is_empty() {
        return Err(Error::Domain("extraction needs at least one point".into()));
    }
    let solver = CSolver::new(c, lambda)?;
    let columns = points
        .iter()
        .map(|&p| build_weights(&solver, array, k, target_at(p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtractionMatrix {
        columns,
        points: points.to_vec(),
    })
}

/// Array response `ŝ(ϑ)` to a unit plane wave from ϑ: each sensor applies
/// its own directivity and propagation phase.
pub fn plane_wave_inputs(array: &MicArray, k: Wavenumber, incidence: &UnitVec) -> Vec<Complex64> {
    array
        .mics()
        .iter()
        .map(|m| crate::directivity::plane_wave_response(&m.zeta, incidence, k, &m.position))
        .collect()
}

/// Beam pattern: `y(ϑ) = wᴴ ŝ(ϑ)` over a list of incidence directions,
/// with ŝ the analytic plane-wave array response.
pub fn beam_pattern(
    w: &BeamWeights,
    array: &MicArray,
    k: Wavenumber,
    angles: &[UnitVec],
) -> Vec<Complex64> {
    angles
        .iter()
        .map(|dir| apply_unchecked(&w.w, &plane_wave_inputs(array, k, dir)))
        .collect()
}

/// Directivity index in dB:
/// `10·log10(|S^{d-1}|·|y(φ)|² / ∫|y(ϑ)|² dϑ)` with the integral taken by
/// sphere quadrature (uniform angles for d = 2). Returns the -∞ sentinel
/// when the look-direction response vanishes against a nonzero pattern, and
/// a degenerate error when the whole pattern is numerically zero.
pub fn directivity_index(
    w: &BeamWeights,
    array: &MicArray,
    k: Wavenumber,
    phi: &UnitVec,
    n_quad: usize,
) -> Result<f64> {
    let grid = sphere_quadrature(array.dim(), n_quad);
    let mut integral = 0.0;
    for s in &grid {
        let y = apply_unchecked(&w.w, &plane_wave_inputs(array, k, &s.direction));
        integral += y.norm_sqr() * s.weight;
    }
    let y_look = apply_unchecked(&w.w, &plane_wave_inputs(array, k, phi));
    di_from_power(array.dim(), y_look.norm_sqr(), integral)
}

/// DI from a look-direction power and an already-integrated pattern power.
/// Shared by [`directivity_index`] and sample-based evaluation in the
/// simulation harness.
pub fn di_from_power(dim: Dim, look_power: f64, integral: f64) -> Result<f64> {
    if integral < 1e-300 {
        return Err(Error::Degenerate(
            "beam pattern is numerically zero over the sphere".into(),
        ));
    }
    if look_power == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(10.0 * (dim.sphere_area() * look_power / integral).log10())
}

/// DI from uniformly spaced pattern samples (d = 2): the quadrature weight
/// `2π/n` cancels against `|S^1| = 2π`.
pub fn di_from_samples(samples: &[Complex64], look_value: Complex64) -> Result<f64> {
    let integral: f64 =
        samples.iter().map(|y| y.norm_sqr()).sum::<f64>() * 2.0 * std::f64::consts::PI
            / samples.len() as f64;
    di_from_power(Dim::Two, look_value.norm_sqr(), integral)
}

/// Mode of a spherical-harmonic-domain beamformer.
pub enum ShBeamMode<'a> {
    /// Axisymmetric: per-degree weights `d_ν` steered to a look direction,
    /// `w_ν^μ = i^ν d_ν Y_ν^μ(φ) / b_ν`.
    Axisymmetric {
        degree_weights: &'a [f64],
        look: &'a UnitVec,
    },
    /// General beam shape, `w_ν^μ = i^ν c_ν^μ / b_ν`.
    General { coeffs: &'a HarmonicCoeffs },
}

/// Spherical-harmonic-domain weights. `b` holds the caller-supplied radial
/// values `b_ν(ka)` per degree, which must all be nonzero. The output is a
/// flat coefficient vector in the documented basis order; it pairs with
/// mode-domain signals through [`apply_sh_weights`].
pub fn sh_domain_weights(dim: Dim, mode: &ShBeamMode, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let nu_max = match mode {
        ShBeamMode::Axisymmetric { degree_weights, .. } => degree_weights.len() as u32 - 1,
        ShBeamMode::General { coeffs } => coeffs.nu_max(),
    };
    if b.len() < (nu_max + 1) as usize {
        return Err(Error::LengthMismatch {
            context: "sh_domain_weights radial values",
            expected: (nu_max + 1) as usize,
            got: b.len(),
        });
    }
    if let Some(nu) = b
        .iter()
        .take((nu_max + 1) as usize)
        .position(|v| v.norm() == 0.0)
    {
        return Err(Error::Domain(format!(
            "radial value b_{nu} is zero; the mode-domain inversion requires zero-free radial functions"
        )));
    }
    let mut out = Vec::new();
    for nu in 0..=nu_max {
        for mu in 0..dim_y(dim, nu) {
            let num = match mode {
                ShBeamMode::Axisymmetric {
                    degree_weights,
                    look,
                } => Complex64::new(
                    degree_weights[nu as usize] * sph_harm_unchecked(dim, nu, mu, look),
                    0.0,
                ),
                ShBeamMode::General { coeffs } => coeffs.get(nu, mu),
            };
            out.push(i_pow(nu) * num / b[nu as usize]);
        }
    }
    Ok(out)
}

/// Pairs spherical-harmonic-domain weights with mode-domain signals. The
/// conjugation bookkeeping of `wᴴ ŝ` is absorbed in the weight definition,
/// so in the mode domain the output is the plain product sum
/// `Σ w_ν^μ ŝ_ν^μ`.
pub fn apply_sh_weights(w: &[Complex64], mode_signals: &[Complex64]) -> Result<Complex64> {
    if w.len() != mode_signals.len() {
        return Err(Error::LengthMismatch {
            context: "apply_sh_weights",
            expected: w.len(),
            got: mode_signals.len(),
        });
    }
    Ok(w.iter().zip(mode_signals).map(|(a, b)| a * b).sum())
}

/// Axisymmetric pattern value `Σ_ν d_ν (2ν+1)/(4π) P_ν(cos Θ)` — the
/// addition-theorem closed form of a steered axisymmetric beam (d = 3).
pub fn axisymmetric_pattern(degree_weights: &[f64], big_theta: f64) -> f64 {
    let ct = big_theta.cos().clamp(-1.0, 1.0);
    degree_weights
        .iter()
        .enumerate()
        .map(|(nu, d)| {
            d * (2.0 * nu as f64 + 1.0) / (4.0 * std::f64::consts::PI)
                * crate::specialfn::legendre_p(nu as u32, ct).expect("clamped cosine")
        })
        .sum()
}
