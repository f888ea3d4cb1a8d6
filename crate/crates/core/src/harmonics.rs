//! Real orthonormal spherical harmonics on S¹ and S², their solid-harmonic
//! extensions, dimension formulas, zonal (addition-theorem) kernels, and
//! quadrature projection of directivity functions onto the harmonic basis.
//!
//! # Basis convention
//!
//! The basis is real and orthonormal in `L²(S^{d-1})` throughout. Expansion
//! coefficients stay complex.
//!
//! * d = 2, angle `θ = atan2(y, x)`:
//!   degree 0 is `1/√(2π)`; degree ν ≥ 1 has two members ordered
//!   `[cos(νθ)/√π, sin(νθ)/√π]`.
//! * d = 3: real spherical harmonics of unit L²(S²) norm, built from
//!   associated Legendre recurrences without the Condon–Shortley phase
//!   (the phase is absorbed into the normalization so every basis function
//!   is sign-stable). Within degree ν the 2ν+1 members are ordered by the
//!   signed order `μ = -ν..ν` mapped to index `μ + ν`; negative μ are the
//!   `sin(|μ|φ)` members, positive μ the `cos(μφ)` members.
//!
//! Coefficient vectors over all degrees `ν ≤ ν_max` are flattened degree by
//! degree in this order.

use crate::error::{Error, Result};
use crate::geom::{Dim, UnitVec, VecD};
use crate::specialfn::{legendre_p, legendre_pair};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Index of one basis function: degree ν and the flat in-degree order
/// `0 <= μ < dim_y(d, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicIndex {
    pub degree: u32,
    pub order: u32,
}

impl HarmonicIndex {
    pub fn new(degree: u32, order: u32) -> HarmonicIndex {
        HarmonicIndex { degree, order }
    }
}

/// Dimension of the space of degree-ν spherical harmonics:
/// `(d + 2ν - 2)(d + ν - 3)! / ((d - 2)! ν!)`, with the ν = 0 case equal to 1.
pub fn dim_y(dim: Dim, nu: u32) -> u32 {
    if nu == 0 {
        return 1;
    }
    match dim {
        Dim::Two => 2,
        Dim::Three => 2 * nu + 1,
    }
}

/// Dimension of the space of homogeneous polynomials of degree ν:
/// `(d + ν - 1)! / (ν! (d - 1)!)`.
pub fn dim_p(dim: Dim, nu: u32) -> u32 {
    match dim {
        Dim::Two => nu + 1,
        Dim::Three => (nu + 1) * (nu + 2) / 2,
    }
}

/// Total length of a coefficient vector truncated at `nu_max`.
pub fn coeff_len(dim: Dim, nu_max: u32) -> usize {
    (0..=nu_max).map(|nu| dim_y(dim, nu) as usize).sum()
}

/// Offset of degree ν within a flattened coefficient vector.
pub fn degree_offset(dim: Dim, nu: u32) -> usize {
    (0..nu).map(|m| dim_y(dim, m) as usize).sum()
}

/// Normalization of the d = 3 real harmonics:
/// `sqrt((2ν+1)(ν-μ)! / (4π(ν+μ)!))` for μ ≥ 0.
fn sh3_norm(nu: u32, mu: u32) -> f64 {
    let mut ratio = 1.0; // (ν-μ)!/(ν+μ)!
    for k in (nu - mu + 1)..=(nu + mu) {
        ratio /= k as f64;
    }
    ((2.0 * nu as f64 + 1.0) / (4.0 * PI) * ratio).sqrt()
}

/// Associated Legendre `P_ν^μ(x)` without the Condon–Shortley phase
/// (`P_μ^μ = (2μ-1)!! (1-x²)^{μ/2}`), via the standard degree recurrence.
fn assoc_legendre(nu: u32, mu: u32, x: f64) -> f64 {
    debug_assert!(mu <= nu);
    let somx2 = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 1..=mu {
        pmm *= (2 * i - 1) as f64 * somx2;
    }
    if nu == mu {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p_cur = x * (2 * mu + 1) as f64 * pmm; // P_{μ+1}^μ
    for m in (mu + 2)..=nu {
        let mf = m as f64;
        let muf = mu as f64;
        let p_next = ((2.0 * mf - 1.0) * x * p_cur - (mf + muf - 1.0) * p_prev) / (mf - muf);
        p_prev = p_cur;
        p_cur = p_next;
    }
    p_cur
}

/// Real orthonormal spherical harmonic `Y_ν^μ(ϑ)`.
pub fn sph_harm(dim: Dim, idx: HarmonicIndex, dir: &UnitVec) -> Result<f64> {
    let HarmonicIndex {
        degree: nu,
        order: mu,
    } = idx;
    if mu >= dim_y(dim, nu) {
        return Err(Error::Domain(format!(
            "harmonic order {mu} out of range for degree {nu} in d={}",
            dim.as_usize()
        )));
    }
    debug_assert_eq!(dir.dim(), dim);
    Ok(sph_harm_unchecked(dim, nu, mu, dir))
}

pub(crate) fn sph_harm_unchecked(dim: Dim, nu: u32, mu: u32, dir: &UnitVec) -> f64 {
    match dim {
        Dim::Two => {
            if nu == 0 {
                1.0 / (2.0 * PI).sqrt()
            } else {
                let theta = dir.angle();
                let arg = nu as f64 * theta;
                let v = if mu == 0 { arg.cos() } else { arg.sin() };
                v / PI.sqrt()
            }
        }
        Dim::Three => {
            let v = dir.as_vec();
            let ct = v.z().clamp(-1.0, 1.0);
            let m_signed = mu as i64 - nu as i64;
            if m_signed == 0 {
                return sh3_norm(nu, 0) * legendre_pair(nu, ct).0;
            }
            let m_abs = m_signed.unsigned_abs() as u32;
            let phi = v.y().atan2(v.x());
            let azim = if m_signed > 0 {
                (m_abs as f64 * phi).cos()
            } else {
                (m_abs as f64 * phi).sin()
            };
            std::f64::consts::SQRT_2 * sh3_norm(nu, m_abs) * assoc_legendre(nu, m_abs, ct) * azim
        }
    }
}

/// Solid harmonic `y_ν^μ(r) = |r|^ν Y_ν^μ(r/|r|)`; the homogeneous harmonic
/// polynomial extension. At the origin it is 0 for ν > 0 and the constant
/// basis value for ν = 0.
pub fn solid_harm(dim: Dim, idx: HarmonicIndex, r: &VecD) -> Result<f64> {
    let n = r.norm();
    if n == 0.0 {
        if idx.degree > 0 {
            // Validate the index even on the zero branch.
            if idx.order >= dim_y(dim, idx.degree) {
                return Err(Error::Domain(format!(
                    "harmonic order {} out of range for degree {}",
                    idx.order, idx.degree
                )));
            }
            return Ok(0.0);
        }
        return Ok(1.0 / dim.sphere_area().sqrt());
    }
    let dir = UnitVec::new(*r)?;
    Ok(n.powi(idx.degree as i32) * sph_harm(dim, idx, &dir)?)
}

/// Zonal kernel `Ψ_ν(ϑ, φ) = Σ_μ Y_ν^μ(ϑ) Y_ν^μ(φ)`, evaluated by its
/// rotation-invariant closed form: `(2ν+1)/(4π)·P_ν(ϑ·φ)` for d = 3 and
/// `cos(νΔθ)/π` for d = 2 (`1/(2π)` at ν = 0).
pub fn zonal_kernel(dim: Dim, nu: u32, a: &UnitVec, b: &UnitVec) -> f64 {
    match dim {
        Dim::Two => {
            if nu == 0 {
                1.0 / (2.0 * PI)
            } else {
                (nu as f64 * (a.angle() - b.angle())).cos() / PI
            }
        }
        Dim::Three => {
            let ct = a.as_vec().dot(b.as_vec()).clamp(-1.0, 1.0);
            (2.0 * nu as f64 + 1.0) / (4.0 * PI) * legendre_p(nu, ct).expect("clamped cosine")
        }
    }
}

/// One node of a sphere quadrature rule: a unit direction and a positive
/// weight. Weights over a rule sum to `|S^{d-1}|`.
#[derive(Debug, Clone, Copy)]
pub struct DirectionSample {
    pub direction: UnitVec,
    pub weight: f64,
}

/// Quadrature rule on `S^{d-1}`.
///
/// * d = 2: `n` uniform angles with weight `2π/n` (trapezoid on the periodic
///   circle; exact for trigonometric polynomials of degree < n).
/// * d = 3: Gauss–Legendre in the polar cosine (`n` nodes) crossed with
///   `2n + 1` uniform azimuths; exact for spherical polynomials of degree
///   up to min(2n-1, n) in the polar part and 2n in azimuth.
///
/// Passing `n ≥ 4·ν_max + 2` makes products of two degree-ν_max harmonics
/// integrate exactly in both dimensions.
pub fn sphere_quadrature(dim: Dim, n: usize) -> Vec<DirectionSample> {
    assert!(n >= 1);
    match dim {
        Dim::Two => {
            let w = 2.0 * PI / n as f64;
            (0..n)
                .map(|i| DirectionSample {
                    direction: UnitVec::from_angle(2.0 * PI * i as f64 / n as f64),
                    weight: w,
                })
                .collect()
        }
        Dim::Three => {
            let (nodes, weights) = gauss_legendre(n);
            let n_az = 2 * n + 1;
            let w_az = 2.0 * PI / n_az as f64;
            let mut out = Vec::with_capacity(n * n_az);
            for (ct, w_polar) in nodes.iter().zip(&weights) {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for j in 0..n_az {
                    let phi = 2.0 * PI * j as f64 / n_az as f64;
                    let v = VecD::new3(st * phi.cos(), st * phi.sin(), *ct);
                    out.push(DirectionSample {
                        // Unit by construction; renormalize to pin the invariant.
                        direction: UnitVec::new(v).expect("nonzero"),
                        weight: w_polar * w_az,
                    });
                }
            }
            out
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration from the
/// Chebyshev initial guess.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n as u32, x);
            dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Complex coefficients `c_ν^μ` over all degrees `ν ≤ ν_max`, flattened in
/// the documented basis order. Houses both sensor directivities and desired
/// beam shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCoeffs {
    dim: Dim,
    nu_max: u32,
    c: Vec<Complex64>,
}

impl HarmonicCoeffs {
    /// All-zero coefficient set.
    pub fn zeros(dim: Dim, nu_max: u32) -> HarmonicCoeffs {
        HarmonicCoeffs {
            dim,
            nu_max,
            c: vec![Complex64::new(0.0, 0.0); coeff_len(dim, nu_max)],
        }
    }

    /// Builds from a flat coefficient vector; the length must match the
    /// truncation and every entry must be finite.
    pub fn from_vec(dim: Dim, nu_max: u32, c: Vec<Complex64>) -> Result<HarmonicCoeffs> {
        let expected = coeff_len(dim, nu_max);
        if c.len() != expected {
            return Err(Error::LengthMismatch {
                context: "HarmonicCoeffs::from_vec",
                expected,
                got: c.len(),
            });
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite harmonic coefficient".into()));
        }
        Ok(HarmonicCoeffs { dim, nu_max, c })
    }

    /// Omnidirectional unit response: `c_0^0 = |S^{d-1}|^{1/2}` so that
    /// `ζ(ϑ) ≡ 1`.
    pub fn omni(dim: Dim) -> HarmonicCoeffs {
        let mut h = HarmonicCoeffs::zeros(dim, 0);
        h.c[0] = Complex64::new(dim.sphere_area().sqrt(), 0.0);
        h
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn nu_max(&self) -> u32 {
        self.nu_max
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    pub fn get(&self, nu: u32, mu: u32) -> Complex64 {
        debug_assert!(nu <= self.nu_max && mu < dim_y(self.dim, nu));
        self.c[degree_offset(self.dim, nu) + mu as usize]
    }

    pub fn set(&mut self, nu: u32, mu: u32, v: Complex64) {
        assert!(nu <= self.nu_max && mu < dim_y(self.dim, nu));
        self.c[degree_offset(self.dim, nu) + mu as usize] = v;
    }

    /// Iterates `(ν, μ, c_ν^μ)` in flattening order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        let dim = self.dim;
        (0..=self.nu_max)
            .flat_map(move |nu| (0..dim_y(dim, nu)).map(move |mu| (nu, mu, self.get(nu, mu))))
    }

    /// Re-truncates to a (possibly larger) maximum degree, zero-padding.
    pub fn resized(&self, nu_max: u32) -> HarmonicCoeffs {
        let mut out = HarmonicCoeffs::zeros(self.dim, nu_max);
        for (nu, mu, v) in self.iter() {
            if nu <= nu_max {
                out.set(nu, mu, v);
            }
        }
        out
    }
}

/// Result of projecting a function on the sphere onto the truncated basis.
#[derive(Debug, Clone)]
pub struct Projection {
    pub coeffs: HarmonicCoeffs,
    /// L² norm of the part of the function not captured by the truncation,
    /// measured on the quadrature grid.
    pub residual: f64,
}

/// Projects a directivity function onto the harmonic basis by quadrature:
/// `c_ν^μ = ∫ ζ(ϑ) Y_ν^μ(ϑ) dϑ`. Exact for band-limited ζ when `n_quad` is
/// at least `4·ν_max + 2`.
pub fn project_directivity<F>(dim: Dim, zeta: F, nu_max: u32, n_quad: usize) -> Projection
where
    F: Fn(&UnitVec) -> Complex64,
{
    let grid = sphere_quadrature(dim, n_quad);
    let samples: Vec<Complex64> = grid.iter().map(|s| zeta(&s.direction)).collect();
    let mut coeffs = HarmonicCoeffs::zeros(dim, nu_max);
    for nu in 0..=nu_max {
        for mu in 0..dim_y(dim, nu) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, f) in grid.iter().zip(&samples) {
                acc += f * sph_harm_unchecked(dim, nu, mu, &s.direction) * s.weight;
            }
            coeffs.set(nu, mu, acc);
        }
    }
    // Residual: quadrature L² norm of ζ minus its truncated synthesis.
    let mut res2 = 0.0;
    for (s, f) in grid.iter().zip(&samples) {
        let synth = synthesize(&coeffs, &s.direction);
        res2 += (f - synth).norm_sqr() * s.weight;
    }
    Projection {
        coeffs,
        residual: res2.max(0.0).sqrt(),
    }
}

/// Evaluates `Σ c_ν^μ Y_ν^μ(ϑ)`.
pub fn synthesize(coeffs: &HarmonicCoeffs, dir: &UnitVec) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (nu, mu, c) in coeffs.iter() {
        if c.re != 0.0 || c.im != 0.0 {
            acc += c * sph_harm_unchecked(coeffs.dim(), nu, mu, dir);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_dir<R: Rng>(dim: Dim, rng: &mut R) -> UnitVec {
        match dim {
            Dim::Two => UnitVec::from_angle(rng.gen_range(0.0..2.0 * PI)),
            Dim::Three => {
                let ct: f64 = rng.gen_range(-1.0..1.0);
                UnitVec::from_spherical(ct.acos(), rng.gen_range(0.0..2.0 * PI))
            }
        }
    }

    #[test]
    fn dimension_formulas() {
        // d = 3 values from the classical table.
        assert_eq!(dim_y(Dim::Three, 2), 5);
        assert_eq!(dim_y(Dim::Three, 4), 9);
        assert_eq!(dim_y(Dim::Two, 3), 2);
        assert_eq!(dim_y(Dim::Two, 0), 1);
        assert_eq!(dim_p(Dim::Three, 2), 6);
        assert_eq!(dim_p(Dim::Three, 0), 1);
        // Monomials x^a y^b with a+b = 4.
        assert_eq!(dim_p(Dim::Two, 4), 5);
    }

    #[test]
    fn sph_harm_reference_values() {
        let any = UnitVec::from_angle(1.234);
        let got = sph_harm(Dim::Two, HarmonicIndex::new(0, 0), &any).unwrap();
        assert!((got - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);

        let east = UnitVec::from_angle(0.0);
        let got = sph_harm(Dim::Two, HarmonicIndex::new(1, 0), &east).unwrap();
        assert!((got - 1.0 / PI.sqrt()).abs() < 1e-15);

        let d3 = UnitVec::from_spherical(0.7, 2.1);
        let got = sph_harm(Dim::Three, HarmonicIndex::new(0, 0), &d3).unwrap();
        assert!((got - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);

        assert!(sph_harm(Dim::Two, HarmonicIndex::new(1, 2), &east).is_err());
    }

    #[test]
    fn orthonormality_by_quadrature() {
        for dim in [Dim::Two, Dim::Three] {
            let nu_max = 4;
            let grid = sphere_quadrature(dim, 4 * nu_max as usize + 2);
            let total_w: f64 = grid.iter().map(|s| s.weight).sum();
            assert!((total_w - dim.sphere_area()).abs() < 1e-9);
            for s in &grid {
                assert!((s.direction.as_vec().norm() - 1.0).abs() < 1e-12);
                assert!(s.weight > 0.0);
            }
            let mut indices = Vec::new();
            for nu in 0..=nu_max {
                for mu in 0..dim_y(dim, nu) {
                    indices.push((nu, mu));
                }
            }
            for &(nu1, mu1) in &indices {
                for &(nu2, mu2) in &indices {
                    let mut acc = 0.0;
                    for s in &grid {
                        acc += sph_harm_unchecked(dim, nu1, mu1, &s.direction)
                            * sph_harm_unchecked(dim, nu2, mu2, &s.direction)
                            * s.weight;
                    }
                    let want = if (nu1, mu1) == (nu2, mu2) { 1.0 } else { 0.0 };
                    assert!(
                        (acc - want).abs() < 1e-10,
                        "d={dim:?} <Y_{nu1}^{mu1}, Y_{nu2}^{mu2}> = {acc}"
                    );
                }
            }
        }
    }

    #[test]
    fn solid_harm_values() {
        // |r| cos θ / √π at θ = 0, |r| = 2.
        let got = solid_harm(Dim::Two, HarmonicIndex::new(1, 0), &VecD::new2(2.0, 0.0)).unwrap();
        assert!((got - 2.0 / PI.sqrt()).abs() < 1e-14);

        let got = solid_harm(Dim::Two, HarmonicIndex::new(2, 1), &VecD::zero(Dim::Two)).unwrap();
        assert_eq!(got, 0.0);

        // |r| = √2, sin(π/4)/√π, product 1/√π.
        let got = solid_harm(Dim::Two, HarmonicIndex::new(1, 1), &VecD::new2(1.0, 1.0)).unwrap();
        assert!((got - 1.0 / PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn solid_harm_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [Dim::Two, Dim::Three] {
            for nu in 0..=3u32 {
                for mu in 0..dim_y(dim, nu) {
                    let idx = HarmonicIndex::new(nu, mu);
                    for _ in 0..5 {
                        let r = match dim {
                            Dim::Two => {
                                VecD::new2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                            }
                            Dim::Three => VecD::new3(
                                rng.gen_range(-1.0..1.0),
                                rng.gen_range(-1.0..1.0),
                                rng.gen_range(-1.0..1.0),
                            ),
                        };
                        let base = solid_harm(dim, idx, &r).unwrap();
                        for &t in &[0.5, 2.0] {
                            let scaled = solid_harm(dim, idx, &r.scale(t)).unwrap();
                            let want = t.powi(nu as i32) * base;
                            assert!(
                                (scaled - want).abs() <= 1e-12 * (1.0 + want.abs()),
                                "homogeneity d={dim:?} nu={nu} mu={mu}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn solid_harm_is_harmonic() {
        // Central-difference Laplacian vanishes for ν ≤ 3.
        let h = 1e-3;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [Dim::Two, Dim::Three] {
            for nu in 0..=3u32 {
                for mu in 0..dim_y(dim, nu) {
                    let idx = HarmonicIndex::new(nu, mu);
                    for _ in 0..20 {
                        let mut coords = [0.0; 3];
                        for c in coords.iter_mut().take(dim.as_usize()) {
                            *c = rng.gen_range(-0.6..0.6);
                        }
                        let r = VecD::from_slice(dim, &coords[..dim.as_usize()]).unwrap();
                        let f = |p: &VecD| solid_harm(dim, idx, p).unwrap();
                        let mut lap = 0.0;
                        for axis in 0..dim.as_usize() {
                            let mut step = [0.0; 3];
                            step[axis] = h;
                            let dv = VecD::from_slice(dim, &step[..dim.as_usize()]).unwrap();
                            lap += (f(&r.add(&dv)) - 2.0 * f(&r) + f(&r.sub(&dv))) / (h * h);
                        }
                        assert!(
                            lap.abs() <= 1e-4,
                            "laplacian d={dim:?} nu={nu} mu={mu}: {lap}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn zonal_kernel_values() {
        let a = UnitVec::from_spherical(0.4, 1.1);
        assert!((zonal_kernel(Dim::Three, 1, &a, &a) - 3.0 / (4.0 * PI)).abs() < 1e-14);

        let t0 = UnitVec::from_angle(0.0);
        let t1 = UnitVec::from_angle(PI / 2.0);
        assert!((zonal_kernel(Dim::Two, 2, &t0, &t1) + 1.0 / PI).abs() < 1e-14);
        assert!((zonal_kernel(Dim::Two, 0, &t0, &t1) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn zonal_kernel_matches_mu_sum() {
        // Addition-theorem consistency against the explicit basis sum.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [Dim::Two, Dim::Three] {
            for _ in 0..100 {
                let a = rand_dir(dim, &mut rng);
                let b = rand_dir(dim, &mut rng);
                for nu in 0..=4u32 {
                    let mut acc = 0.0;
                    for mu in 0..dim_y(dim, nu) {
                        acc += sph_harm_unchecked(dim, nu, mu, &a)
                            * sph_harm_unchecked(dim, nu, mu, &b);
                    }
                    let closed = zonal_kernel(dim, nu, &a, &b);
                    assert!(
                        (acc - closed).abs() < 1e-12,
                        "addition theorem d={dim:?} nu={nu}: {acc} vs {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn projection_of_constant_and_cosine() {
        let p = project_directivity(Dim::Two, |_| Complex64::new(1.0, 0.0), 3, 32);
        assert!((p.coeffs.get(0, 0).re - (2.0 * PI).sqrt()).abs() < 1e-12);
        for (nu, _, c) in p.coeffs.iter() {
            if nu > 0 {
                assert!(c.norm() < 1e-12);
            }
        }
        assert!(p.residual < 1e-10);

        let p = project_directivity(Dim::Two, |d| Complex64::new(d.angle().cos(), 0.0), 3, 32);
        assert!((p.coeffs.get(1, 0).re - PI.sqrt()).abs() < 1e-12);
        assert!(p.coeffs.get(0, 0).norm() < 1e-12);
        assert!(p.coeffs.get(1, 1).norm() < 1e-12);
    }

    #[test]
    fn projection_of_monomial() {
        // ζ(ϑ) = ϑ_x² = cos²θ = 1/2 + cos(2θ)/2.
        let p = project_directivity(
            Dim::Two,
            |d| Complex64::new(d.as_vec().x() * d.as_vec().x(), 0.0),
            2,
            32,
        );
        assert!((p.coeffs.get(0, 0).re - (2.0 * PI).sqrt() / 2.0).abs() < 1e-12);
        assert!((p.coeffs.get(2, 0).re - PI.sqrt() / 2.0).abs() < 1e-12);
        assert!(p.coeffs.get(1, 0).norm() < 1e-12);
        assert!(p.coeffs.get(2, 1).norm() < 1e-12);
    }

    #[test]
    fn projection_left_inverse_of_synthesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for dim in [Dim::Two, Dim::Three] {
            for _ in 0..5 {
                let nu_max = 3;
                let mut coeffs = HarmonicCoeffs::zeros(dim, nu_max);
                for nu in 0..=nu_max {
                    for mu in 0..dim_y(dim, nu) {
                        coeffs.set(
                            nu,
                            mu,
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        );
                    }
                }
                let back = project_directivity(
                    dim,
                    |d| synthesize(&coeffs, d),
                    nu_max,
                    4 * nu_max as usize + 2,
                );
                for ((_, _, a), (_, _, b)) in coeffs.iter().zip(back.coeffs.iter()) {
                    assert!((a - b).norm() < 1e-10, "d={dim:?}: {a} vs {b}");
                }
                assert!(back.residual < 1e-9);
            }
        }
    }

    #[test]
    fn coeff_vector_layout() {
        assert_eq!(coeff_len(Dim::Two, 2), 5);
        assert_eq!(coeff_len(Dim::Three, 2), 9);
        assert_eq!(degree_offset(Dim::Two, 2), 3);
        assert_eq!(degree_offset(Dim::Three, 2), 4);
        let c = HarmonicCoeffs::from_vec(Dim::Two, 1, vec![Complex64::new(1.0, 0.0); 3]).unwrap();
        assert_eq!(c.coeffs().len(), 3);
        assert!(HarmonicCoeffs::from_vec(Dim::Two, 1, vec![]).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let int: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(6)).sum();
        assert!((int - 2.0 / 7.0).abs() < 1e-13);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }
}
