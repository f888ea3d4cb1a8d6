//! Self-verification suites: finite-difference checks of the operator
//! identities the analytic paths rely on.
//!
//! Each suite pits an analytic formula against an independent evaluation
//! route — nested finite differences of explicitly expanded polynomial
//! operators, or explicit basis sums — and reports the worst relative error
//! observed. The suites are deterministic (fixed seeds) and cheap enough to
//! run on every build via the `selftest` subcommand.
//!
//! The finite-difference side never touches the closed-form kernel
//! derivative: solid harmonics are expanded into monomials numerically (by
//! interpolation, not by the analytic basis recurrences under test), and
//! mixed partial derivatives are taken with central stencils.

use crate::directivity::{evaluate, induce, rk_directional_derivative, Directivity};
use crate::geom::{Dim, UnitVec, VecD, Wavenumber};
use crate::harmonics::sph_harm_unchecked;
use crate::harmonics::{dim_p, dim_y, solid_harm, zonal_kernel, HarmonicCoeffs, HarmonicIndex};
use crate::kernelfield::{kernel, mode_field_eval};
use crate::specialfn::big_j;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Outcome of one verification suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    /// Worst relative error across all cases.
    pub max_err: f64,
    /// Pass threshold for `max_err`.
    pub tolerance: f64,
    pub cases: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.max_err.is_finite() && self.max_err <= self.tolerance
    }
}

/// Runs every suite in a fixed order.
pub fn run_all() -> Vec<SuiteReport> {
    vec![
        appendix_a_suite(),
        appendix_b_suite(),
        appendix_c_suite(),
        hobson_corollary_suite(),
        addition_theorem_suite(),
    ]
}

// ── polynomial differential operators applied by finite differences ────────

/// A constant-coefficient polynomial differential operator in monomial form:
/// `Σ c_α D^α` with multi-index exponents stored per axis.
pub struct PolyOp {
    dim: Dim,
    terms: Vec<([u32; 3], Complex64)>,
}

impl PolyOp {
    /// Expands the degree-ν solid harmonic `y_ν^μ` into monomials by
    /// sampling the polynomial at an overdetermined spread point set and
    /// solving the least-squares system. The polynomial lies in the span,
    /// so the fit is exact up to roundoff. Independent of any analytic
    /// expansion.
    pub fn from_harmonic(dim: Dim, idx: HarmonicIndex) -> PolyOp {
        let nu = idx.degree;
        let monos = monomials(dim, nu);
        let n = monos.len();
        debug_assert_eq!(n, dim_p(dim, nu) as usize);

        let n_points = 4 * n + 8;
        let points = spread_points(dim, n_points);
        let mut vand = nalgebra::DMatrix::<f64>::zeros(n_points, n);
        let mut rhs = nalgebra::DVector::<f64>::zeros(n_points);
        for (i, p) in points.iter().enumerate() {
            for (j, m) in monos.iter().enumerate() {
                vand[(i, j)] = monomial_eval(m, p);
            }
            rhs[i] = solid_harm(dim, idx, p).expect("valid index");
        }
        let sol = vand
            .svd(true, true)
            .solve(&rhs, 1e-13)
            .expect("least-squares fit of a polynomial in the span");

        let terms = monos
            .into_iter()
            .zip(sol.iter())
            .filter(|(_, c)| c.abs() > 1e-11)
            .map(|(m, &c)| (m, Complex64::new(c, 0.0)))
            .collect();
        PolyOp { dim, terms }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(mut self, c: Complex64) -> PolyOp {
        for t in &mut self.terms {
            t.1 *= c;
        }
        self
    }

    /// Merges another operator into this one.
    pub fn add(&mut self, other: PolyOp) {
        debug_assert_eq!(self.dim, other.dim);
        for (exps, c) in other.terms {
            if let Some(t) = self.terms.iter_mut().find(|t| t.0 == exps) {
                t.1 += c;
            } else {
                self.terms.push((exps, c));
            }
        }
    }

    /// Applies the operator to `f` at `r` by nested central differences with
    /// step `h` (tensor-product stencils per axis, one per monomial term).
    pub fn apply_fd<F>(&self, f: &F, r: &VecD, h: f64) -> Complex64
    where
        F: Fn(&VecD) -> Complex64,
    {
        let d = self.dim.as_usize();
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, coeff) in &self.terms {
            let stencils: Vec<&[(i32, f64)]> = (0..d).map(|axis| stencil(exps[axis])).collect();
            let total_order: u32 = exps[..d].iter().sum();
            let mut term = Complex64::new(0.0, 0.0);
            // Iterate the tensor product of per-axis stencils.
            let mut counters = vec![0usize; d];
            loop {
                let mut weight = 1.0;
                let mut coords = [0.0f64; 3];
                coords[..d].copy_from_slice(&r.coords()[..d]);
                for axis in 0..d {
                    let (offset, w) = stencils[axis][counters[axis]];
                    weight *= w;
                    coords[axis] += offset as f64 * h;
                }
                let p = VecD::from_slice(self.dim, &coords[..d]).unwrap();
                term += f(&p) * weight;

                // advance the multi-counter
                let mut axis = 0;
                loop {
                    counters[axis] += 1;
                    if counters[axis] < stencils[axis].len() {
                        break;
                    }
                    counters[axis] = 0;
                    axis += 1;
                    if axis == d {
                        break;
                    }
                }
                if axis == d {
                    break;
                }
            }
            acc += coeff * term / h.powi(total_order as i32);
        }
        acc
    }
}

/// Central-difference stencil `(offset, weight)` for the m-th derivative.
fn stencil(order: u32) -> &'static [(i32, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        _ => panic!("stencil order {order} not supported"),
    }
}

/// Exponent tuples of all monomials of total degree `nu` in `dim` variables.
fn monomials(dim: Dim, nu: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    match dim {
        Dim::Two => {
            for a in 0..=nu {
                out.push([a, nu - a, 0]);
            }
        }
        Dim::Three => {
            for a in 0..=nu {
                for b in 0..=(nu - a) {
                    out.push([a, b, nu - a - b]);
                }
            }
        }
    }
    out
}

fn monomial_eval(exps: &[u32; 3], p: &VecD) -> f64 {
    p.x().powi(exps[0] as i32) * p.y().powi(exps[1] as i32) * p.z().powi(exps[2] as i32)
}

/// Deterministic well-spread interpolation points on varied radii.
fn spread_points(dim: Dim, n: usize) -> Vec<VecD> {
    let golden = PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let radius = 0.6 + 0.8 * (i as f64 + 0.5) / n as f64;
            match dim {
                Dim::Two => {
                    let t = golden * i as f64 + 0.35;
                    VecD::new2(radius * t.cos(), radius * t.sin())
                }
                Dim::Three => {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let s = (1.0 - z * z).max(0.0).sqrt();
                    let t = golden * i as f64 + 0.35;
                    VecD::new3(radius * s * t.cos(), radius * s * t.sin(), radius * z)
                }
            }
        })
        .collect()
}

/// The full induced operator `ζ́(D) = Σ ć_ν^μ y_ν^μ(∂)` in monomial form.
pub fn induced_poly_op(zeta: &Directivity, k: Wavenumber) -> PolyOp {
    let induced = induce(zeta, k);
    let dim = zeta.dim();
    let mut op = PolyOp {
        dim,
        terms: Vec::new(),
    };
    for (nu, mu, c) in induced.coeffs().iter() {
        if c.norm() > 0.0 {
            op.add(PolyOp::from_harmonic(dim, HarmonicIndex::new(nu, mu)).scaled(c));
        }
    }
    op
}

// ── helpers shared by the suites ────────────────────────────────────────────

fn rand_dir(dim: Dim, rng: &mut ChaCha8Rng) -> UnitVec {
    match dim {
        Dim::Two => UnitVec::from_angle(rng.gen_range(0.0..2.0 * PI)),
        Dim::Three => {
            let ct: f64 = rng.gen_range(-1.0f64..1.0);
            UnitVec::from_spherical(ct.acos(), rng.gen_range(0.0..2.0 * PI))
        }
    }
}

fn rand_point(dim: Dim, rng: &mut ChaCha8Rng, scale: f64) -> VecD {
    let mut coords = [0.0; 3];
    for c in coords.iter_mut().take(dim.as_usize()) {
        *c = rng.gen_range(-scale..scale);
    }
    VecD::from_slice(dim, &coords[..dim.as_usize()]).unwrap()
}

/// Random coefficients with magnitudes bounded away from zero.
fn rand_coeffs(dim: Dim, nu_max: u32, rng: &mut ChaCha8Rng) -> HarmonicCoeffs {
    let mut c = HarmonicCoeffs::zeros(dim, nu_max);
    for nu in 0..=nu_max {
        for mu in 0..dim_y(dim, nu) {
            let mag = rng.gen_range(0.5..1.5);
            let phase = rng.gen_range(0.0..2.0 * PI);
            c.set(nu, mu, Complex64::from_polar(mag, phase));
        }
    }
    c
}

fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

// ── suites ──────────────────────────────────────────────────────────────────

/// Applying the induced operator to a plane wave reproduces multiplication
/// by the directivity value: `ζ́(∂) e^{-ikϑ·r} = ζ(ϑ) e^{-ikϑ·r}`.
pub fn appendix_a_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let mut max_err = 0.0f64;
    let mut cases = 0;
    for dim in [Dim::Two, Dim::Three] {
        for &kval in &[1.0, 10.0] {
            let k = Wavenumber::new(kval).unwrap();
            for _ in 0..2 {
                let zeta = rand_coeffs(dim, 2, &mut rng);
                let op = induced_poly_op(&zeta, k);
                for _ in 0..10 {
                    let theta = rand_dir(dim, &mut rng);
                    let r = rand_point(dim, &mut rng, 1.0);
                    let f = |p: &VecD| Complex64::new(0.0, -kval * theta.dot(p)).exp();
                    let got = op.apply_fd(&f, &r, 1e-4 / kval);
                    let want = evaluate(&zeta, &theta) * f(&r);
                    max_err = max_err.max(rel_err(got, want));
                    cases += 1;
                }
            }
        }
    }
    SuiteReport {
        name: "appendix_a",
        max_err,
        tolerance: 1e-5,
        cases,
    }
}

/// Radial differentiation identity of the kernel radial factor:
/// `(z⁻¹ d/dz)^ν Ĵ_{d,0}(z) = (-1)^ν z^{-ν} Ĵ_{d,ν}(z)`, with the left side
/// evaluated by nested central differences.
pub fn appendix_b_suite() -> SuiteReport {
    fn radial_op(dim: Dim, order: u32, z: f64, h: f64) -> f64 {
        if order == 0 {
            return big_j(dim, 0, z);
        }
        let up = radial_op(dim, order - 1, z + h, h);
        let dn = radial_op(dim, order - 1, z - h, h);
        (up - dn) / (2.0 * h * z)
    }
    let mut max_err = 0.0f64;
    let mut cases = 0;
    for dim in [Dim::Two, Dim::Three] {
        for nu in 1..=2u32 {
            for &z in &[0.5, 1.0, 2.0] {
                let fd = radial_op(dim, nu, z, 1e-4);
                let want = (-1.0f64).powi(nu as i32) * big_j(dim, nu, z) / z.powi(nu as i32);
                max_err = max_err.max((fd - want).abs() / want.abs());
                cases += 1;
            }
        }
    }
    SuiteReport {
        name: "appendix_b",
        max_err,
        tolerance: 1e-4,
        cases,
    }
}

/// The operator induced by the (conjugate) degree-ν harmonic, applied at the
/// origin of a synthetic interior mode field, recovers `k^ν p̂_ν^μ`.
pub fn appendix_c_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut max_err = 0.0f64;
    let mut cases = 0;
    for dim in [Dim::Two, Dim::Three] {
        for &kval in &[1.0, 5.0] {
            let k = Wavenumber::new(kval).unwrap();
            let modes = rand_coeffs(dim, 2, &mut rng);
            let f = |p: &VecD| mode_field_eval(&modes, k, p);
            let origin = VecD::zero(dim);
            for nu in 0..=2u32 {
                for mu in 0..dim_y(dim, nu) {
                    let op = PolyOp::from_harmonic(dim, HarmonicIndex::new(nu, mu));
                    let got = op.apply_fd(&f, &origin, 1e-3 / kval);
                    let want = kval.powi(nu as i32) * modes.get(nu, mu);
                    max_err = max_err.max(rel_err(got, want));
                    cases += 1;
                }
            }
        }
    }
    SuiteReport {
        name: "appendix_c",
        max_err,
        tolerance: 1e-4,
        cases,
    }
}

/// The analytic kernel derivative (closed form through the radial identity)
/// matches the finite-difference application of `ć_ν^μ y_ν^μ(∂)` to the
/// kernel, over random geometries with `k|r-r'|` spanning [0.5, 20].
pub fn hobson_corollary_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x40B);
    let mut max_err = 0.0f64;
    let mut cases = 0;
    let k = Wavenumber::new(1.0).unwrap();
    for dim in [Dim::Two, Dim::Three] {
        for _ in 0..20 {
            let r_prime = rand_point(dim, &mut rng, 0.5);
            let radius = rng.gen_range(0.5..20.0);
            let dir = rand_dir(dim, &mut rng);
            let r = r_prime.add(&dir.as_vec().scale(radius));
            for nu in 0..=2u32 {
                for mu in 0..dim_y(dim, nu) {
                    let mut zeta = HarmonicCoeffs::zeros(dim, nu);
                    zeta.set(nu, mu, Complex64::new(1.0, 0.0));
                    let analytic = rk_directional_derivative(&zeta, k, &r, &r_prime);
                    let op = induced_poly_op(&zeta, k);
                    let f = |p: &VecD| Complex64::new(kernel(dim, k, p, &r_prime), 0.0);
                    let fd = op.apply_fd(&f, &r, 1e-3);
                    max_err = max_err.max(rel_err(fd, analytic));
                    cases += 1;
                }
            }
        }
    }
    SuiteReport {
        name: "hobson_corollary",
        max_err,
        tolerance: 1e-4,
        cases,
    }
}

/// Zonal kernels by explicit basis sum against the rotation-invariant
/// closed forms.
pub fn addition_theorem_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xADD);
    let mut max_err = 0.0f64;
    let mut cases = 0;
    for dim in [Dim::Two, Dim::Three] {
        for _ in 0..100 {
            let a = rand_dir(dim, &mut rng);
            let b = rand_dir(dim, &mut rng);
            for nu in 0..=4u32 {
                let mut sum = 0.0;
                for mu in 0..dim_y(dim, nu) {
                    sum +=
                        sph_harm_unchecked(dim, nu, mu, &a) * sph_harm_unchecked(dim, nu, mu, &b);
                }
                let closed = zonal_kernel(dim, nu, &a, &b);
                max_err = max_err.max((sum - closed).abs());
                cases += 1;
            }
        }
    }
    SuiteReport {
        name: "addition_theorem",
        max_err,
        tolerance: 1e-12,
        cases,
    }
}
