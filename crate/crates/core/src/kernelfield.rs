//! The reproducing kernel of the interior field space, Gram and C matrix
//! assembly, regularized coefficient solves, field reconstruction, and
//! angular-spectrum estimation.
//!
//! The kernel is `κ_k(r, r') = Ĵ_{d,0}(k|r - r'|)`. A field estimate is the
//! kernel expansion `p̂_est = Σ a_n κ_k(·, r_n)` whose coefficients come from
//! solving `ŝ = C a`, where row i of C applies sensor i's induced operator
//! to the kernel centered at each r_j.
//!
//! The regularized solve uses the conjugate transpose,
//! `a = (CᴴC + λI)^{-1} Cᴴ ŝ`: C is complex whenever any sensor carries
//! odd-degree directivity terms, and the plain-transpose normal equations
//! would not be positive definite. This reduces to the plain-transpose form
//! for real C.

use crate::directivity::{rk_directional_derivative, Directivity};
use crate::error::{Error, Result};
use crate::geom::{Dim, UnitVec, VecD, Wavenumber};
use crate::specialfn::big_j;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative pivot threshold below which an unregularized factorization is
/// declared rank deficient.
const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// One directional sensor: a position and its directivity.
#[derive(Debug, Clone)]
pub struct Mic {
    pub position: VecD,
    pub zeta: Directivity,
}

/// An ordered directional sensor array. All sensors share the dimension and
/// a common truncation order.
#[derive(Debug, Clone)]
pub struct MicArray {
    dim: Dim,
    nu_max: u32,
    mics: Vec<Mic>,
}

impl MicArray {
    pub fn new(mics: Vec<Mic>) -> Result<MicArray> {
        let first = mics
            .first()
            .ok_or_else(|| Error::Domain("array needs at least one sensor".into()))?;
        let dim = first.zeta.dim();
        let nu_max = mics.iter().map(|m| m.zeta.nu_max()).max().unwrap();
        for m in &mics {
            if m.zeta.dim() != dim || m.position.dim() != dim {
                return Err(Error::Domain("mixed dimensions in array".into()));
            }
            if !m.position.is_finite() {
                return Err(Error::Domain("non-finite sensor position".into()));
            }
        }
        // Pad every directivity to the common truncation so row assembly is
        // uniform.
        let mics = mics
            .into_iter()
            .map(|m| Mic {
                position: m.position,
                zeta: m.zeta.resized(nu_max),
            })
            .collect();
        Ok(MicArray { dim, nu_max, mics })
    }

    /// Same positions with every sensor replaced by the unit omni response.
    /// This is the baseline that ignores directional behavior.
    pub fn as_omni(&self) -> MicArray {
        let omni = Directivity::omni(self.dim);
        MicArray {
            dim: self.dim,
            nu_max: 0,
            mics: self
                .mics
                .iter()
                .map(|m| Mic {
                    position: m.position,
                    zeta: omni.clone(),
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn nu_max(&self) -> u32 {
        self.nu_max
    }

    pub fn len(&self) -> usize {
        self.mics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mics.is_empty()
    }

    pub fn mics(&self) -> &[Mic] {
        &self.mics
    }

    pub fn positions(&self) -> impl Iterator<Item = &VecD> {
        self.mics.iter().map(|m| &m.position)
    }
}

/// Reproducing kernel `κ_k(r, r') = Ĵ_{d,0}(k|r - r'|)`.
pub fn kernel(dim: Dim, k: Wavenumber, r: &VecD, r_prime: &VecD) -> f64 {
    big_j(dim, 0, k.get() * r.sub(r_prime).norm())
}

/// Gram matrix of the kernel over a point set: real, symmetric, with
/// `|S^{d-1}|` on the diagonal.
pub fn gram(positions: &[VecD], dim: Dim, k: Wavenumber) -> DMatrix<f64> {
    let n = positions.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = dim.sphere_area();
        for j in 0..i {
            let v = kernel(dim, k, &positions[i], &positions[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// The sampling matrix C: entry (i, j) is sensor i's induced operator
/// applied to the kernel centered at r_j, evaluated at r_i.
#[derive(Debug, Clone)]
pub struct CMatrix {
    entries: DMatrix<Complex64>,
    k: Wavenumber,
    nu_max: u32,
}

impl CMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn k(&self) -> Wavenumber {
        self.k
    }

    pub fn nu_max(&self) -> u32 {
        self.nu_max
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// 1-norm condition estimate `‖C‖₁·‖C⁻¹‖₁`; infinite when C is not
    /// invertible.
    pub fn condition_estimate(&self) -> f64 {
        fn norm1(m: &DMatrix<Complex64>) -> f64 {
            (0..m.ncols())
                .map(|j| m.column(j).iter().map(|z| z.norm()).sum())
                .fold(0.0, f64::max)
        }
        match self.entries.clone().try_inverse() {
            Some(inv) => norm1(&self.entries) * norm1(&inv),
            None => f64::INFINITY,
        }
    }

    /// Largest-singular-value estimate by power iteration on `CᴴC`
    /// (deterministic start vector).
    pub fn spectral_norm_estimate(&self) -> f64 {
        let n = self.entries.nrows();
        let normal = self.entries.adjoint() * &self.entries;
        let mut v = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
        let mut sigma2 = 0.0;
        for _ in 0..30 {
            let w = &normal * &v;
            let norm = w.norm();
            if norm == 0.0 {
                return 0.0;
            }
            sigma2 = norm;
            v = w / Complex64::new(norm, 0.0);
        }
        sigma2.sqrt()
    }
}

/// Assembles the C matrix for an array: a thin loop over
/// [`rk_directional_derivative`]. `nu_max` must cover the array's
/// directivity orders.
pub fn build_c(array: &MicArray, k: Wavenumber, nu_max: u32) -> CMatrix {
    assert!(
        nu_max >= array.nu_max(),
        "truncation order {nu_max} below the array's directivity order {}",
        array.nu_max()
    );
    let n = array.len();
    let mut entries = DMatrix::zeros(n, n);
    for (i, mic) in array.mics().iter().enumerate() {
        let zeta = mic.zeta.resized(nu_max);
        for j in 0..n {
            entries[(i, j)] =
                rk_directional_derivative(&zeta, k, &mic.position, &array.mics()[j].position);
        }
    }
    CMatrix { entries, k, nu_max }
}

/// A reusable factorization of the (regularized) inverse `R`, where
/// `a = R ŝ`: `R = C⁻¹` for λ = 0 and `R = (CᴴC + λI)⁻¹Cᴴ` for λ > 0.
pub struct CSolver {
    kind: SolverKind,
}

enum SolverKind {
    /// λ = 0: LU of C (for coefficient solves) and of Cᴴ (for weight solves).
    Direct {
        lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
        lu_adj: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    },
    /// λ > 0: Cholesky of the Hermitian normal matrix plus C itself.
    Tikhonov {
        chol: nalgebra::Cholesky<Complex64, nalgebra::Dyn>,
        c: DMatrix<Complex64>,
    },
}

impl CSolver {
    pub fn new(c: &CMatrix, lambda: f64) -> Result<CSolver> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Domain(format!(
                "regularization parameter must be >= 0, got {lambda}"
            )));
        }
        let m = c.entries.clone();
        if lambda == 0.0 {
            let lu = m.clone().lu();
            // Relative pivot test on the U diagonal.
            let u = lu.u();
            let diag: Vec<f64> = (0..u.nrows()).map(|i| u[(i, i)].norm()).collect();
            let max = diag.iter().cloned().fold(0.0, f64::max);
            let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
            if max == 0.0 || min <= SINGULARITY_THRESHOLD * max {
                return Err(Error::Singular(format!(
                    "relative pivot {:.3e} below threshold {SINGULARITY_THRESHOLD:.0e}; \
                     regularize or change the array",
                    if max == 0.0 { 0.0 } else { min / max }
                )));
            }
            let lu_adj = m.adjoint().lu();
            Ok(CSolver {
                kind: SolverKind::Direct { lu, lu_adj },
            })
        } else {
            let n = m.nrows();
            let normal = m.adjoint() * &m
                + DMatrix::<Complex64>::identity(n, n) * Complex64::new(lambda, 0.0);
            let chol = normal.cholesky().ok_or_else(|| {
                Error::Singular("regularized normal matrix failed Cholesky".into())
            })?;
            Ok(CSolver {
                kind: SolverKind::Tikhonov { chol, c: m },
            })
        }
    }

    /// Kernel coefficients `a = R ŝ`.
    pub fn solve_coeffs(&self, s_hat: &[Complex64]) -> Result<Vec<Complex64>> {
        let b = DVector::from_column_slice(s_hat);
        let a = match &self.kind {
            SolverKind::Direct { lu, .. } => {
                self.check_len(s_hat.len(), lu.u().nrows())?;
                lu.solve(&b)
                    .ok_or_else(|| Error::Singular("LU solve failed".into()))?
            }
            SolverKind::Tikhonov { chol, c } => {
                self.check_len(s_hat.len(), c.nrows())?;
                chol.solve(&(c.adjoint() * b))
            }
        };
        Ok(a.iter().copied().collect())
    }

    /// Weight vector `w = Rᴴ v*`, i.e. the solution of `w* = Rᵀ v`, so that
    /// `wᴴ ŝ = vᵀ (R ŝ)` for every ŝ.
    pub fn solve_weights(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let v_conj = DVector::from_iterator(v.len(), v.iter().map(|z| z.conj()));
        let w = match &self.kind {
            SolverKind::Direct { lu_adj, .. } => {
                self.check_len(v.len(), lu_adj.u().nrows())?;
                lu_adj
                    .solve(&v_conj)
                    .ok_or_else(|| Error::Singular("adjoint LU solve failed".into()))?
            }
            SolverKind::Tikhonov { chol, c } => {
                self.check_len(v.len(), c.nrows())?;
                c * chol.solve(&v_conj)
            }
        };
        Ok(w.iter().copied().collect())
    }

    fn check_len(&self, got: usize, expected: usize) -> Result<()> {
        if got != expected {
            return Err(Error::LengthMismatch {
                context: "CSolver",
                expected,
                got,
            });
        }
        Ok(())
    }
}

/// One-shot regularized solve `ŝ → a` (see [`CSolver`] for the reusable
/// form). λ = 0 is a direct factorization with a rank-deficiency check;
/// λ > 0 is the conjugate-transpose Tikhonov estimator.
pub fn solve_coeffs(c: &CMatrix, s_hat: &[Complex64], lambda: f64) -> Result<Vec<Complex64>> {
    CSolver::new(c, lambda)?.solve_coeffs(s_hat)
}

/// A reconstructed field: kernel-expansion coefficients over the array
/// centers at one wavenumber.
#[derive(Debug, Clone)]
pub struct KernelField {
    pub a: Vec<Complex64>,
    pub centers: Vec<VecD>,
    pub k: Wavenumber,
}

impl KernelField {
    pub fn new(a: Vec<Complex64>, centers: Vec<VecD>, k: Wavenumber) -> Result<KernelField> {
        if a.len() != centers.len() {
            return Err(Error::LengthMismatch {
                context: "KernelField",
                expected: centers.len(),
                got: a.len(),
            });
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite kernel coefficient".into()));
        }
        Ok(KernelField { a, centers, k })
    }

    fn dim(&self) -> Dim {
        self.centers[0].dim()
    }
}

/// Evaluates `p̂_est(r) = Σ a_n κ_k(r, r_n)` over a set of points.
pub fn reconstruct(field: &KernelField, eval_points: &[VecD]) -> Vec<Complex64> {
    let dim = field.dim();
    eval_points
        .iter()
        .map(|r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, c) in field.a.iter().zip(&field.centers) {
                acc += a * kernel(dim, field.k, r, c);
            }
            acc
        })
        .collect()
}

/// Angular-spectrum estimate `P̃_b(kϑ) ≈ Σ a_n exp(i k ϑ·r_n)`.
pub fn estimate_spectrum(field: &KernelField, dir: &UnitVec) -> Complex64 {
    let k = field.k.get();
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, c) in field.a.iter().zip(&field.centers) {
        acc += a * Complex64::new(0.0, k * dir.dot(c)).exp();
    }
    acc
}

/// Evaluates the interior mode expansion
/// `p̂(r) = Σ_{ν,μ} p̂_ν^μ Ĵ_{d,ν}(k|r|) Y_ν^μ(r/|r|)`.
///
/// At the origin only the ν = 0 mode contributes:
/// `p̂(0) = p̂_0^0 |S^{d-1}|^{1/2}`.
pub fn mode_field_eval(
    modes: &crate::harmonics::HarmonicCoeffs,
    k: Wavenumber,
    r: &VecD,
) -> Complex64 {
    let dim = modes.dim();
    let dist = r.norm();
    if dist == 0.0 {
        return modes.get(0, 0) * dim.sphere_area().sqrt();
    }
    let dir = UnitVec::new(*r).expect("nonzero radius");
    let z = k.get() * dist;
    let mut acc = Complex64::new(0.0, 0.0);
    for nu in 0..=modes.nu_max() {
        let radial = big_j(dim, nu, z);
        if radial == 0.0 {
            continue;
        }
        let mut angular = Complex64::new(0.0, 0.0);
        for mu in 0..crate::harmonics::dim_y(dim, nu) {
            let c = modes.get(nu, mu);
            if c.re != 0.0 || c.im != 0.0 {
                angular += c * crate::harmonics::sph_harm_unchecked(dim, nu, mu, &dir);
            }
        }
        acc += radial * angular;
    }
    acc
}
