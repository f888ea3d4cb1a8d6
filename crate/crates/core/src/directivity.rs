//! Directivity functions as harmonic coefficient vectors, the differential
//! operator each one induces, plane-wave responses, and the analytic action
//! of the induced operator on the reproducing kernel.
//!
//! A directivity `ζ(ϑ) = Σ c_ν^μ Y_ν^μ(ϑ)` corresponds one-to-one with the
//! constant-coefficient operator `ζ́(D) = Σ ć_ν^μ y_ν^μ(∂)` where
//! `ć_ν^μ = (-ik)^{-ν} c_ν^μ`. Applying that operator to the reproducing
//! kernel collapses, degree by degree, to
//!
//! ```text
//! ζ́(∂₁) κ_k(r, r') = Σ i^{-ν} c_ν^μ Ĵ_{d,ν}(k|r-r'|) Y_ν^μ((r-r')/|r-r'|)
//! ```
//!
//! with only the ν = 0 term surviving at coincident points.

use crate::error::{Error, Result};
use crate::geom::{UnitVec, VecD, Wavenumber};
use crate::harmonics::{synthesize, HarmonicCoeffs};
use crate::specialfn::big_j;
use num_complex::Complex64;

/// A receiver directivity or desired beam shape: complex coefficients over
/// the real harmonic basis. See [`HarmonicCoeffs`] for the layout.
pub type Directivity = HarmonicCoeffs;

/// Coefficients `ć_ν^μ = (-ik)^{-ν} c_ν^μ` of the induced differential
/// operator, tied to the wavenumber they were built with.
#[derive(Debug, Clone)]
pub struct InducedCoeffs {
    coeffs: HarmonicCoeffs,
    k: Wavenumber,
}

impl InducedCoeffs {
    pub fn coeffs(&self) -> &HarmonicCoeffs {
        &self.coeffs
    }

    pub fn k(&self) -> Wavenumber {
        self.k
    }
}

/// `i^{-ν}` on the four-cycle {1, -i, -1, i}.
pub(crate) fn i_pow_neg(nu: u32) -> Complex64 {
    match nu % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `i^{ν}`.
pub(crate) fn i_pow(nu: u32) -> Complex64 {
    i_pow_neg(nu).conj()
}

/// Builds the induced-operator coefficients `ć_ν^μ = (-ik)^{-ν} c_ν^μ`.
pub fn induce(zeta: &Directivity, k: Wavenumber) -> InducedCoeffs {
    let mut out = HarmonicCoeffs::zeros(zeta.dim(), zeta.nu_max());
    for (nu, mu, c) in zeta.iter() {
        // (-ik)^{-ν} = i^ν k^{-ν}
        let factor = i_pow(nu) * k.get().powi(-(nu as i32));
        out.set(nu, mu, factor * c);
    }
    InducedCoeffs { coeffs: out, k }
}

/// Evaluates the directivity `ζ(ϑ) = Σ c_ν^μ Y_ν^μ(ϑ)`.
pub fn evaluate(zeta: &Directivity, dir: &UnitVec) -> Complex64 {
    synthesize(zeta, dir)
}

/// Output of a sensor with directivity ζ at position `r` for a unit plane
/// wave incident from direction ϑ: `ζ(ϑ)·exp(-i k ϑ·r)`.
pub fn plane_wave_response(
    zeta: &Directivity,
    incidence: &UnitVec,
    k: Wavenumber,
    r: &VecD,
) -> Complex64 {
    let phase = -k.get() * incidence.dot(r);
    evaluate(zeta, incidence) * Complex64::new(0.0, phase).exp()
}

/// Analytic action of the induced operator on the reproducing kernel,
/// differentiating with respect to the first argument:
/// `ζ́(∂₁) κ_k(r, r')`.
///
/// At `r = r'` only the ν = 0 term survives and the value is
/// `c_0^0·|S^{d-1}|^{1/2}`.
pub fn rk_directional_derivative(
    zeta: &Directivity,
    k: Wavenumber,
    r: &VecD,
    r_prime: &VecD,
) -> Complex64 {
    let dim = zeta.dim();
    let sep = r.sub(r_prime);
    let dist = sep.norm();
    if dist == 0.0 {
        return zeta.get(0, 0) * dim.sphere_area().sqrt();
    }
    let dir = UnitVec::new(sep).expect("nonzero separation");
    let z = k.get() * dist;
    let mut acc = Complex64::new(0.0, 0.0);
    for nu in 0..=zeta.nu_max() {
        let radial = big_j(dim, nu, z);
        if radial == 0.0 {
            continue;
        }
        let mut angular = Complex64::new(0.0, 0.0);
        for mu in 0..crate::harmonics::dim_y(dim, nu) {
            let c = zeta.get(nu, mu);
            if c.re != 0.0 || c.im != 0.0 {
                angular += c * crate::harmonics::sph_harm_unchecked(dim, nu, mu, &dir);
            }
        }
        acc += i_pow_neg(nu) * radial * angular;
    }
    acc
}

/// Serializes to the flat text record
/// `d,nu_max,re_0,im_0,re_1,im_1,...` with coefficients in the documented
/// basis order. Floats carry 17 significant digits.
pub fn to_flat_record(zeta: &Directivity) -> String {
    let mut parts = vec![zeta.dim().as_usize().to_string(), zeta.nu_max().to_string()];
    for c in zeta.coeffs() {
        parts.push(format!("{:.16e}", c.re));
        parts.push(format!("{:.16e}", c.im));
    }
    parts.join(",")
}

/// Parses the flat record produced by [`to_flat_record`].
pub fn from_flat_record(record: &str) -> Result<Directivity> {
    let fields: Vec<&str> = record.split(',').map(str::trim).collect();
    if fields.len() < 2 {
        return Err(Error::Parse(
            "directivity record needs at least d and nu_max".into(),
        ));
    }
    let d: usize = fields[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension field {:?}", fields[0])))?;
    let dim = crate::geom::Dim::new(d)?;
    let nu_max: u32 = fields[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad nu_max field {:?}", fields[1])))?;
    let expected = crate::harmonics::coeff_len(dim, nu_max);
    if fields.len() != 2 + 2 * expected {
        return Err(Error::Parse(format!(
            "directivity record for d={d}, nu_max={nu_max} needs {} coefficient fields, got {}",
            2 * expected,
            fields.len() - 2
        )));
    }
    let mut c = Vec::with_capacity(expected);
    for pair in fields[2..].chunks(2) {
        let re: f64 = pair[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad float {:?}", pair[0])))?;
        let im: f64 = pair[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad float {:?}", pair[1])))?;
        c.push(Complex64::new(re, im));
    }
    HarmonicCoeffs::from_vec(dim, nu_max, c)
}
