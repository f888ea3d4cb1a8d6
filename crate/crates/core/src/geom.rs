//! Basic geometric types: spatial dimension, points, unit directions,
//! and wavenumbers.
//!
//! All field and array code in this crate works in dimension 2 or 3 at
//! runtime. Vectors are stored as a fixed `[f64; 3]` with a [`Dim`] tag;
//! the third component is zero in the planar case.

use crate::error::{Error, Result};

/// Spatial dimension of the ambient space. Only 2 and 3 are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    /// Validates a raw integer dimension.
    pub fn new(d: usize) -> Result<Dim> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::Domain(format!(
                "spatial dimension must be 2 or 3, got {d}"
            ))),
        }
    }

    pub fn as_usize(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    /// Surface area of the unit sphere `S^{d-1}`: `2π` for d=2, `4π` for d=3.
    pub fn sphere_area(self) -> f64 {
        crate::specialfn::surface_area(self.as_usize())
    }
}

/// A point (or displacement) in 2- or 3-dimensional real space. Lengths are
/// in meters wherever the physics cares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecD {
    dim: Dim,
    xyz: [f64; 3],
}

impl VecD {
    pub fn new2(x: f64, y: f64) -> VecD {
        VecD {
            dim: Dim::Two,
            xyz: [x, y, 0.0],
        }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> VecD {
        VecD {
            dim: Dim::Three,
            xyz: [x, y, z],
        }
    }

    /// Origin of the given dimension.
    pub fn zero(dim: Dim) -> VecD {
        VecD { dim, xyz: [0.0; 3] }
    }

    /// Builds a vector from the first `dim` entries of a slice.
    pub fn from_slice(dim: Dim, coords: &[f64]) -> Result<VecD> {
        if coords.len() != dim.as_usize() {
            return Err(Error::LengthMismatch {
                context: "VecD::from_slice",
                expected: dim.as_usize(),
                got: coords.len(),
            });
        }
        let mut xyz = [0.0; 3];
        xyz[..coords.len()].copy_from_slice(coords);
        Ok(VecD { dim, xyz })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.xyz[..self.dim.as_usize()]
    }

    pub fn x(&self) -> f64 {
        self.xyz[0]
    }

    pub fn y(&self) -> f64 {
        self.xyz[1]
    }

    pub fn z(&self) -> f64 {
        self.xyz[2]
    }

    pub fn dot(&self, other: &VecD) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.xyz[0] * other.xyz[0] + self.xyz[1] * other.xyz[1] + self.xyz[2] * other.xyz[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sub(&self, other: &VecD) -> VecD {
        debug_assert_eq!(self.dim, other.dim);
        VecD {
            dim: self.dim,
            xyz: [
                self.xyz[0] - other.xyz[0],
                self.xyz[1] - other.xyz[1],
                self.xyz[2] - other.xyz[2],
            ],
        }
    }

    pub fn add(&self, other: &VecD) -> VecD {
        debug_assert_eq!(self.dim, other.dim);
        VecD {
            dim: self.dim,
            xyz: [
                self.xyz[0] + other.xyz[0],
                self.xyz[1] + other.xyz[1],
                self.xyz[2] + other.xyz[2],
            ],
        }
    }

    pub fn scale(&self, t: f64) -> VecD {
        VecD {
            dim: self.dim,
            xyz: [self.xyz[0] * t, self.xyz[1] * t, self.xyz[2] * t],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }

    /// Normalizes to a unit direction. Fails on the zero vector.
    pub fn normalize(&self) -> Result<UnitVec> {
        UnitVec::new(*self)
    }
}

/// A direction: a vector carrying the unit-norm invariant (`|v| = 1` within
/// 1e-12). Constructed by normalization, never by raw fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec(VecD);

impl UnitVec {
    /// Normalizes `v`; errors on (near-)zero input.
    pub fn new(v: VecD) -> Result<UnitVec> {
        let n = v.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::Domain(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(UnitVec(v.scale(1.0 / n)))
    }

    /// Planar direction at polar angle `theta` (radians, from the x-axis).
    pub fn from_angle(theta: f64) -> UnitVec {
        UnitVec(VecD::new2(theta.cos(), theta.sin()))
    }

    /// 3-D direction from polar angle `theta` (from the z-axis) and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> UnitVec {
        let st = theta.sin();
        UnitVec(VecD::new3(st * phi.cos(), st * phi.sin(), theta.cos()))
    }

    /// Polar angle in `(-π, π]` (d=2 only).
    pub fn angle(&self) -> f64 {
        debug_assert_eq!(self.0.dim, Dim::Two);
        self.0.y().atan2(self.0.x())
    }

    pub fn as_vec(&self) -> &VecD {
        &self.0
    }

    pub fn dim(&self) -> Dim {
        self.0.dim
    }

    pub fn dot(&self, other: &VecD) -> f64 {
        self.0.dot(other)
    }

    /// Antipodal direction.
    pub fn neg(&self) -> UnitVec {
        UnitVec(self.0.scale(-1.0))
    }
}

/// Wavenumber `k = 2πf / c` in rad/m, guaranteed positive and finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber(f64);

impl Wavenumber {
    pub fn new(k: f64) -> Result<Wavenumber> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Domain(format!(
                "wavenumber must be finite and positive, got {k}"
            )));
        }
        Ok(Wavenumber(k))
    }

    /// Converts a frequency in Hz to a wavenumber given the sound speed in m/s.
    pub fn from_frequency(freq_hz: f64, c_sound: f64) -> Result<Wavenumber> {
        if !(c_sound.is_finite() && c_sound > 0.0) {
            return Err(Error::Domain(format!(
                "sound speed must be positive, got {c_sound}"
            )));
        }
        Wavenumber::new(2.0 * std::f64::consts::PI * freq_hz / c_sound)
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}
