//! Dimension-generic special functions: Bessel functions of integer and
//! half-integer order, the radial kernel function `Ĵ_{d,ν}`, unit-sphere
//! surface areas, and Legendre polynomials.
//!
//! The radial kernel is
//!
//! ```text
//! Ĵ_{d,ν}(z) = (2π)^{d/2} · J_{ν + d/2 - 1}(z) / z^{d/2 - 1}
//! ```
//!
//! which reduces to `2π·J_ν(z)` for d = 2 and `4π·j_ν(z)` (spherical Bessel)
//! for d = 3. Its value at z = 0 is the unit-sphere area for ν = 0 and zero
//! otherwise; that branch is taken explicitly rather than as a 0/0 limit.
//!
//! Evaluation strategy for `J_n(z)`, n integer:
//! * `z < 10`: ascending power series (largest term is small enough there
//!   that cancellation stays below ~1e-13 absolute);
//! * `z ≥ 10`: backward (Miller) recurrence normalized by
//!   `J_0 + 2·J_2 + 2·J_4 + ... = 1`, which is stable for every order and
//!   argument at the cost of O(z) steps.
//!
//! Half-integer orders go through the spherical Bessel functions and their
//! closed trigonometric forms.

use crate::error::{Error, Result};
use crate::geom::Dim;
use std::f64::consts::PI;

/// Bessel function of the first kind `J_order(z)` for non-negative integer
/// or half-integer order and `z ≥ 0`.
///
/// Absolute accuracy is ~1e-13 for `z` up to 1e4.
pub fn bessel_j(order: f64, z: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!(
            "bessel_j requires finite z >= 0, got {z}"
        )));
    }
    if !order.is_finite() || order < 0.0 || (2.0 * order).fract() != 0.0 {
        return Err(Error::Domain(format!(
            "bessel_j supports orders 0, 1/2, 1, 3/2, ..., got {order}"
        )));
    }
    if order.fract() == 0.0 {
        Ok(bessel_jn(order as u32, z))
    } else {
        // J_{ν+1/2}(z) = sqrt(2z/π) j_ν(z)
        let nu = (order - 0.5) as u32;
        if z == 0.0 {
            return Ok(0.0);
        }
        Ok((2.0 * z / PI).sqrt() * sph_bessel_j(nu, z))
    }
}

/// Integer-order `J_n(z)` for `z ≥ 0`. Internal total version of [`bessel_j`].
pub(crate) fn bessel_jn(n: u32, z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if z < 10.0 {
        bessel_jn_series(n, z)
    } else {
        bessel_jn_miller(n, z)
    }
}

/// Ascending series `Σ_m (-1)^m (z/2)^{n+2m} / (m! (n+m)!)`.
fn bessel_jn_series(n: u32, z: f64) -> f64 {
    let half = 0.5 * z;
    // t = (z/2)^n / n!; underflows harmlessly to 0 for very large n.
    let mut t = 1.0_f64;
    for i in 1..=n {
        t *= half / i as f64;
    }
    let q = half * half;
    let mut sum = t;
    for m in 1..250u32 {
        t *= -q / (m as f64 * (m + n) as f64);
        sum += t;
        if t.abs() <= 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Backward-recurrence (Miller) evaluation, normalized by the even-order sum
/// rule. Valid for any order; used for `z ≥ 10`.
fn bessel_jn_miller(n: u32, z: f64) -> f64 {
    // Start far enough above both the order and the turning point m ≈ z that
    // the seeded minimal solution is washed out to below 1e-16 relative.
    let m_start = n.max(z.ceil() as u32) + 20 + (10.0 * z.cbrt()) as u32;

    let mut jp = 0.0_f64; // J_{m+1}, arbitrary scale
    let mut jc = 1e-30_f64; // J_m
    let mut result = if n == m_start { jc } else { 0.0 };
    let mut sum = if m_start % 2 == 0 { 2.0 * jc } else { 0.0 };

    for m in (1..=m_start).rev() {
        let jm1 = (2.0 * m as f64 / z) * jc - jp;
        jp = jc;
        jc = jm1; // jc = J_{m-1}
        let cur = m - 1;
        if cur == n {
            result = jc;
        }
        if cur % 2 == 0 {
            sum += if cur == 0 { jc } else { 2.0 * jc };
        }
        if jc.abs() > 1e250 {
            jc *= 1e-250;
            jp *= 1e-250;
            sum *= 1e-250;
            result *= 1e-250;
        }
    }
    result / sum
}

/// Spherical Bessel function `j_ν(z)` for `z ≥ 0`, via the closed
/// trigonometric forms with upward recurrence for `z ≥ ν` and normalized
/// downward recurrence otherwise.
pub(crate) fn sph_bessel_j(nu: u32, z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z == 0.0 {
        return if nu == 0 { 1.0 } else { 0.0 };
    }
    let (s, c) = z.sin_cos();
    let j0 = s / z;
    if nu == 0 {
        return j0;
    }
    let j1 = s / (z * z) - c / z;
    if nu == 1 {
        return j1;
    }
    if z >= nu as f64 {
        // Upward recurrence is stable in the oscillatory regime.
        let mut prev = j0;
        let mut cur = j1;
        for m in 1..nu {
            let next = (2 * m + 1) as f64 / z * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        // Downward recurrence from ν + 55, rescaled on overflow and
        // normalized against whichever of j0, j1 is away from a zero.
        let m_start = nu + 55;
        let mut up = 0.0_f64; // u_{m+1}
        let mut uc = 1e-30_f64; // u_m
        let mut u_target = 0.0_f64;
        for m in (1..=m_start).rev() {
            let um1 = (2 * m + 1) as f64 / z * uc - up;
            up = uc;
            uc = um1; // uc = u_{m-1}
            if m - 1 == nu {
                u_target = uc;
            }
            if uc.abs() > 1e250 {
                uc *= 1e-250;
                up *= 1e-250;
                u_target *= 1e-250;
            }
        }
        // uc = u_0, up = u_1
        if j0.abs() >= 0.1 * j1.abs() {
            u_target * (j0 / uc)
        } else {
            u_target * (j1 / up)
        }
    }
}

/// Radial kernel `Ĵ_{d,ν}(z) = (2π)^{d/2} J_{ν+d/2-1}(z) / z^{d/2-1}`.
///
/// At `z = 0` this equals the unit-sphere area `|S^{d-1}|` for ν = 0 and 0
/// for ν > 0 (explicit branch, no 0/0).
pub fn big_j(dim: Dim, nu: u32, z: f64) -> f64 {
    assert!(z >= 0.0 && z.is_finite(), "big_j requires finite z >= 0");
    if z == 0.0 {
        return if nu == 0 { dim.sphere_area() } else { 0.0 };
    }
    match dim {
        Dim::Two => 2.0 * PI * bessel_jn(nu, z),
        Dim::Three => 4.0 * PI * sph_bessel_j(nu, z),
    }
}

/// Surface area of the unit sphere `S^{d-1}`: `2π^{d/2} / Γ(d/2)`, evaluated
/// exactly through the integer/half-integer Gamma values.
pub fn surface_area(d: usize) -> f64 {
    assert!(d >= 2, "surface_area requires d >= 2");
    if d % 2 == 0 {
        // Γ(d/2) = (d/2 - 1)!
        let m = d / 2;
        let mut fact = 1.0;
        for i in 2..m {
            fact *= i as f64;
        }
        2.0 * PI.powi(m as i32) / fact
    } else {
        // d = 2m+1: Γ(m + 1/2) = (2m-1)!! √π / 2^m
        let m = d / 2;
        let mut odd_fact = 1.0;
        for i in 1..=m {
            odd_fact *= (2 * i - 1) as f64;
        }
        2f64.powi(m as i32 + 1) * PI.powi(m as i32) / odd_fact
    }
}

/// Legendre polynomial `P_ν(x)` for `|x| ≤ 1` by the three-term recurrence.
pub fn legendre_p(nu: u32, x: f64) -> Result<f64> {
    if !(x.is_finite() && x.abs() <= 1.0) {
        return Err(Error::Domain(format!(
            "legendre_p requires |x| <= 1, got {x}"
        )));
    }
    Ok(legendre_pair(nu, x).0)
}

/// `(P_ν(x), P_{ν-1}(x))`; the second entry is 0 for ν = 0. Shared with the
/// Gauss–Legendre node solver, which needs the derivative
/// `P'_ν = ν (x P_ν - P_{ν-1}) / (x² - 1)`.
pub(crate) fn legendre_pair(nu: u32, x: f64) -> (f64, f64) {
    if nu == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0; // P_0
    let mut cur = x; // P_1
    for m in 2..=nu {
        let mf = m as f64;
        let next = ((2.0 * mf - 1.0) * x * cur - (mf - 1.0) * prev) / mf;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

#[cfg(test)]
// Reference values below intentionally carry more digits than f64 resolves.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    /// Direct-formula series oracle, written independently of the
    /// implementation: Σ (-1)^m (z/2)^{n+2m} / (m! (n+m)!) in explicit
    /// factorial form, summed to machine convergence.
    fn series_oracle(n: u32, z: f64) -> f64 {
        fn fact(k: u32) -> f64 {
            (1..=k).map(|i| i as f64).product()
        }
        let mut sum = 0.0;
        for m in 0..60u32 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * (z / 2.0).powi((n + 2 * m) as i32) / (fact(m) * fact(n + m));
        }
        sum
    }

    #[test]
    fn bessel_j_trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(2.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bessel_j_matches_series_oracle() {
        // J_1(1) per the oracle: 0.44005058574493351...
        let want = series_oracle(1, 1.0);
        assert!((bessel_j(1.0, 1.0).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.4400505857449335).abs() < 1e-15);
        for n in 0..8u32 {
            for &z in &[0.1, 0.5, 1.0, 2.5, 5.0, 9.0] {
                let got = bessel_j(n as f64, z).unwrap();
                assert!(
                    (got - series_oracle(n, z)).abs() < 1e-13,
                    "J_{n}({z}): {got} vs oracle {}",
                    series_oracle(n, z)
                );
            }
        }
    }

    #[test]
    fn bessel_j_large_arguments() {
        // Reference values: mpmath besselj at 30 digits.
        let cases = [
            (0u32, 15.0, -0.0142244728267807732338642706118),
            (3, 15.0, -0.194018257820122634555097609707),
            (0, 100.0, 0.0199858503042231224242283909508),
            (1, 100.0, -0.0771453520141121580326854949272),
            (5, 100.0, -0.074195736964513920834135049813),
            (8, 1000.0, 0.0246235059711322293504018868591),
            (0, 10000.0, -0.00709616035338880147726516417094),
            (2, 10000.0, 0.00709688984353990739333398762321),
        ];
        for (n, z, want) in cases {
            let got = bessel_j(n as f64, z).unwrap();
            assert!(
                (got - want).abs() < 1e-12,
                "J_{n}({z}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn bessel_j_tiny_order_large_gap() {
        // Deep in the decaying regime (order far above argument).
        // mpmath: besselj(10, 3) = 1.29283516457158837775345308026e-5
        let got = bessel_j(10.0, 3.0).unwrap();
        assert!((got - 1.29283516457158837775e-5).abs() < 1e-15);
    }

    #[test]
    fn bessel_j_half_integer_orders() {
        // mpmath: besselj(1/2, 1) and besselj(3/2, 2), 30 digits.
        let got = bessel_j(0.5, 1.0).unwrap();
        assert!((got - 0.67139670714180309041636401204).abs() < 1e-14);
        let got = bessel_j(1.5, 2.0).unwrap();
        assert!((got - 0.491293778687162345006880608107).abs() < 1e-14);
    }

    #[test]
    fn sph_bessel_matches_references() {
        // mpmath: sqrt(pi/(2z)) besselj(n+1/2, z), 30 digits.
        let cases = [
            (0u32, 0.1, 0.998334166468281523068141984106),
            (0, 1.0, 0.84147098480789650665250232163),
            (1, 1.0, 0.301168678939756789251565714187),
            (2, 0.5, 0.0163711066079934126169555834966),
            (2, 5.0, 0.134731210085125218789198474902),
            (3, 0.1, 9.51851972086556704536691511266e-6),
            (4, 0.5, 6.53896061523897085860468646778e-5),
            (5, 0.1, 9.61631023291644604405162530736e-10),
            (5, 1.0, 9.2561158611258163566820818136e-5),
            (4, 20.0, 0.0504761492093477386060519858033),
            (5, 100.0, -0.00929014893490757176634399310791),
        ];
        for (n, z, want) in cases {
            let want: f64 = want;
            let got = sph_bessel_j(n, z);
            let tol = 1e-13 * want.abs().max(1e-2);
            assert!((got - want).abs() < tol, "j_{n}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn bessel_j_domain_errors() {
        assert!(bessel_j(0.0, -1.0).is_err());
        assert!(bessel_j(-1.0, 1.0).is_err());
        assert!(bessel_j(0.7, 1.0).is_err());
        assert!(bessel_j(0.0, f64::NAN).is_err());
    }

    #[test]
    fn big_j_zero_argument_rule() {
        assert!((big_j(Dim::Two, 0, 0.0) - 2.0 * PI).abs() < 1e-15);
        assert_eq!(big_j(Dim::Three, 1, 0.0), 0.0);
        assert!((big_j(Dim::Three, 0, 0.0) - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn big_j_derived_value() {
        // 2π·J_1(1), with J_1(1) from the series oracle.
        let want = 2.0 * PI * series_oracle(1, 1.0);
        assert!((big_j(Dim::Two, 1, 1.0) - want).abs() < 1e-13);
        assert!((want - 2.76491937476833705).abs() < 1e-13);
    }

    #[test]
    fn big_j_continuity_at_zero() {
        for dim in [Dim::Two, Dim::Three] {
            for nu in 0..4u32 {
                let a = big_j(dim, nu, 1e-8);
                let b = big_j(dim, nu, 0.0);
                assert!(
                    (a - b).abs() <= 1e-6,
                    "big_j({dim:?},{nu}) jump at 0: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn bessel_derivative_identity() {
        // (1/z) J_0'(z) = -J_1(z)/z, checked by central differences.
        let h = 1e-5;
        for &z in &[0.5, 1.0, 2.0, 5.0] {
            let d = (bessel_jn(0, z + h) - bessel_jn(0, z - h)) / (2.0 * h);
            let lhs = d / z + bessel_jn(1, z) / z;
            assert!(lhs.abs() <= 1e-6, "derivative identity at z={z}: {lhs}");
        }
    }

    #[test]
    fn big_j_radial_differentiation_identity() {
        // (1/z d/dz)^ν Ĵ_{d,0}(z) = (-1)^ν Ĵ_{d,ν}(z) / z^ν, nested central
        // differences with the (1/z d/dz) factor applied recursively.
        fn radial_op(dim: Dim, order: u32, z: f64, h: f64) -> f64 {
            if order == 0 {
                return big_j(dim, 0, z);
            }
            let up = radial_op(dim, order - 1, z + h, h);
            let dn = radial_op(dim, order - 1, z - h, h);
            (up - dn) / (2.0 * h * z)
        }
        for dim in [Dim::Two, Dim::Three] {
            for nu in 1..=2u32 {
                for &z in &[0.5, 1.0, 2.0] {
                    let fd = radial_op(dim, nu, z, 1e-4);
                    let want = (-1.0f64).powi(nu as i32) * big_j(dim, nu, z) / z.powi(nu as i32);
                    let rel = (fd - want).abs() / want.abs();
                    assert!(
                        rel <= 1e-4,
                        "radial identity d={dim:?} nu={nu} z={z}: fd {fd} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn surface_area_values() {
        assert!((surface_area(2) - 2.0 * PI).abs() < 1e-15);
        assert!((surface_area(3) - 4.0 * PI).abs() < 1e-14);
        // Γ(2) = 1, so |S^3| = 2π².
        assert!((surface_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((surface_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_p(0, 0.3).unwrap(), 1.0);
        assert_eq!(legendre_p(1, -0.5).unwrap(), -0.5);
        // P_2(x) = (3x² - 1)/2
        assert!((legendre_p(2, 0.5).unwrap() + 0.125).abs() < 1e-15);
        // mpmath: legendre(3, 0.7), legendre(4, -0.3), legendre(6, 0.9)
        assert!((legendre_p(3, 0.7).unwrap() + 0.1925).abs() < 1e-14);
        assert!((legendre_p(4, -0.3).unwrap() - 0.0729375).abs() < 1e-14);
        assert!((legendre_p(6, 0.9).unwrap() + 0.2411643125).abs() < 1e-13);
        assert!(legendre_p(2, 1.5).is_err());
        assert!(legendre_p(2, -1.0000001).is_err());
    }

    #[test]
    fn legendre_endpoint_values() {
        for nu in 0..10u32 {
            assert!((legendre_p(nu, 1.0).unwrap() - 1.0).abs() < 1e-12);
            let want = if nu % 2 == 0 { 1.0 } else { -1.0 };
            assert!((legendre_p(nu, -1.0).unwrap() - want).abs() < 1e-12);
        }
    }
}
