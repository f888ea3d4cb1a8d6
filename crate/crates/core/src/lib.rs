//! Sound-field reconstruction and beamforming for arbitrarily directional
//! sensor arrays, built on the reproducing kernel of interior (source-free)
//! wave fields.
//!
//! A sensor's directional response is modeled as a constant-coefficient
//! polynomial differential operator acting on the field. Because the
//! reproducing kernel of the wavenumber-limited field space turns those
//! operators into closed-form radial-times-angular factors, an array of
//! sensors with arbitrary directivities yields a dense linear system whose
//! solution reconstructs the field — and beamformers with arbitrary beam
//! shapes, steered anywhere in space, become precomputed weight vectors.
//!
//! Module map:
//!
//! * [`specialfn`] — Bessel/radial special functions and Legendre values.
//! * [`harmonics`] — real orthonormal circular/spherical harmonics,
//!   quadrature, and projection.
//! * [`directivity`] — directivity functions, induced operators, and the
//!   analytic kernel derivative.
//! * [`kernelfield`] — kernel, Gram/C matrices, regularized solves, field
//!   reconstruction, angular spectra.
//! * [`beamformer`] — simple/general/extraction beamformers, beam patterns,
//!   directivity index, mode-domain weights.
//! * [`simharness`] — deterministic desk-scale simulation scenarios with
//!   CSV output.
//! * [`verify`] — finite-difference self-verification suites.
//!
//! # Example
//!
//! Steer a simple beam at the origin toward 45° and apply it to a random
//! directional array's response to a plane wave from 10°:
//!
//! ```
//! use num_complex::Complex64;
//! use rkbeam_core::beamformer::{apply, simple_weights};
//! use rkbeam_core::kernelfield::build_c;
//! use rkbeam_core::simharness::{gen_array, sample_field, FieldSpec, ScenarioConfig};
//! use rkbeam_core::{Dim, UnitVec, VecD};
//!
//! let cfg = ScenarioConfig::default();
//! let array = gen_array(&cfg);
//! let k = cfg.wavenumber(1000.0)?;
//!
//! let c = build_c(&array, k, cfg.nu_max);
//! let phi = UnitVec::from_angle(std::f64::consts::FRAC_PI_4);
//! let w = simple_weights(&c, &array, k, &phi, &VecD::zero(Dim::Two), 1e-3)?;
//! let s: Vec<Complex64> = sample_field(
//!     &FieldSpec::PlaneWave {
//!         direction: UnitVec::from_angle(10f64.to_radians()),
//!         amplitude: 1.0,
//!         phase: 0.0,
//!     },
//!     &array,
//!     k,
//! );
//! let y = apply(&w, &s)?;
//! assert!(y.norm().is_finite());
//! # Ok::<(), rkbeam_core::Error>(())
//! ```

pub mod beamformer;
pub mod directivity;
pub mod error;
pub mod geom;
pub mod harmonics;
pub mod kernelfield;
pub mod simharness;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{Dim, UnitVec, VecD, Wavenumber};
pub use harmonics::{HarmonicCoeffs, HarmonicIndex};
pub use kernelfield::{CMatrix, KernelField, Mic, MicArray};
