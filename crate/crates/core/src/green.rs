//! Free-space Green functions of an oscillating electric dipole.
//!
//! With `x = k r`, `alpha = I - r r` and `beta = I - 3 r r`:
//!
//! ```text
//! G(k r)  = -(k e^{ix} / 4 pi) [alpha / x + i beta / x^2 - beta / x^3]   (electric dyadic)
//! Gm(k r) = -(k e^{ix} / 4 pi) [1 / x + i / x^2]                         (magnetic scalar)
//! ```
//!
//! The magnetic field of the same dipole is `Gm (E . r)` with the Levi-Civita
//! contraction `(E . r)_{ij} = eps_{ijl} r_l`. With that contraction the curl
//! identity `curl G = i k Gm (E . r)` holds when the curl acts on the second
//! (source) index, `(curl G)_{ij} = eps_{jkl} d_k G_{il}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{CVector3, ComplexTensor3, RealTensor3, Vector3};
use crate::constants::Constants;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this `k r` the imaginary part of the `beta` coefficient is summed
/// as a series; the closed form loses `~1/x^2` digits to cancellation.
const SERIES_SWITCH: f64 = 0.5;

/// Evaluation point checked once at every public entry.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Point {
    pub r: f64,
    pub rhat: Vector3,
}

pub(crate) fn point(rvec: Vector3) -> Result<Point> {
    if !rvec.is_finite() {
        return Err(Error::invalid("non-finite position"));
    }
    let r = rvec.norm();
    if r == 0.0 {
        return Err(Error::Singular);
    }
    Ok(Point {
        r,
        rhat: rvec.scale(1.0 / r),
    })
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "wavenumber must be positive, got {k}"
        )))
    }
}

/// `(x cos x - sin x) / x^3`, accurate down to `x -> 0`.
fn sinc_defect(x: f64) -> f64 {
    if x.abs() < SERIES_SWITCH {
        // sum_{n>=1} (-1)^n 2n x^{2n-2} / (2n+1)!
        let x2 = x * x;
        let mut term = -1.0 / 3.0;
        let mut sum = term;
        for n in 2..14 {
            let nf = n as f64;
            // ratio of consecutive terms
            term *= -x2 * nf / ((nf - 1.0) * (2.0 * nf) * (2.0 * nf + 1.0));
            sum += term;
        }
        sum
    } else {
        (x * x.cos() - x.sin()) / (x * x * x)
    }
}

/// Coefficients `(a, b)` with `G = -(k / 4 pi) [a alpha + b beta]`.
pub(crate) fn electric_coefficients(x: f64) -> (Complex64, Complex64) {
    let (s, c) = x.sin_cos();
    let a = Complex64::new(c / x, s / x);
    let b = Complex64::new(-(x * s + c) / (x * x * x), sinc_defect(x));
    (a, b)
}

/// `alpha` and `beta` projected between two vectors: `(u.alpha.v, u.beta.v)`.
pub(crate) fn projections(u: Vector3, v: Vector3, rhat: Vector3) -> (f64, f64) {
    let uv = u.dot(v);
    let ll = u.dot(rhat) * v.dot(rhat);
    (uv - ll, uv - 3.0 * ll)
}

/// Electric dyadic Green function `G(k r)`.
pub fn electric_green(k: f64, rvec: Vector3) -> Result<ComplexTensor3> {
    check_wavenumber(k)?;
    let p = point(rvec)?;
    let (a, b) = electric_coefficients(k * p.r);
    let s = Complex64::from(-k / (4.0 * PI));
    Ok(ComplexTensor3::combine(
        s * a,
        &RealTensor3::transverse_projector(p.rhat),
        s * b,
        &RealTensor3::dipolar(p.rhat),
    ))
}

/// `u . G(k r) . v` without building the tensor.
pub(crate) fn electric_bilinear(k: f64, p: &Point, u: Vector3, v: Vector3) -> Complex64 {
    let (a, b) = electric_coefficients(k * p.r);
    let (pa, pb) = projections(u, v, p.rhat);
    -(k / (4.0 * PI)) * (a * pa + b * pb)
}

/// Electric dyadic at an arbitrary complex wavenumber, straight from the
/// closed form. Used as the reference path for the imaginary-axis formula.
pub fn electric_green_complex(k: Complex64, rvec: Vector3) -> Result<ComplexTensor3> {
    if !(k.norm() > 0.0 && k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::invalid(format!(
            "wavenumber must be nonzero, got {k}"
        )));
    }
    let p = point(rvec)?;
    let x = k * p.r;
    let e = (I * x).exp();
    let s = -k * e / (4.0 * PI);
    let a = s / x;
    let b = s * (I / (x * x) - 1.0 / (x * x * x));
    Ok(ComplexTensor3::combine(
        a,
        &RealTensor3::transverse_projector(p.rhat),
        b,
        &RealTensor3::dipolar(p.rhat),
    ))
}

/// Magnetic Green scalar `Gm(k r)`.
pub fn magnetic_green(k: f64, r: f64) -> Result<Complex64> {
    check_wavenumber(k)?;
    if r == 0.0 {
        return Err(Error::Singular);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!(
            "distance must be positive, got {r}"
        )));
    }
    Ok(magnetic_scalar(k, r))
}

pub(crate) fn magnetic_scalar(k: f64, r: f64) -> Complex64 {
    let x = k * r;
    let e = Complex64::from_polar(1.0, x);
    -(k / (4.0 * PI)) * e * Complex64::new(1.0 / x, 1.0 / (x * x))
}

/// `e^{-ix} Gm(k r)`, the magnetic scalar without its propagation phase.
pub(crate) fn magnetic_envelope(k: f64, r: f64) -> Complex64 {
    let x = k * r;
    -(k / (4.0 * PI)) * Complex64::new(1.0 / x, 1.0 / (x * x))
}

/// `e^{-ix} G(k r)`, the electric dyadic without its propagation phase.
/// Products of Green functions that share the phase are formed from these so
/// that `e^{ix} e^{-ix}` cancels exactly rather than to rounding.
pub(crate) fn electric_envelope(k: f64, p: &Point) -> ComplexTensor3 {
    let x = k * p.r;
    let s = -k / (4.0 * PI);
    ComplexTensor3::combine(
        Complex64::from(s / x),
        &RealTensor3::transverse_projector(p.rhat),
        Complex64::new(-s / (x * x * x), s / (x * x)),
        &RealTensor3::dipolar(p.rhat),
    )
}

/// `G` on the imaginary axis, `k = i q`. The result is real:
/// `-(q e^{-x} / 4 pi) [alpha / x + beta (1/x^2 + 1/x^3)]` with `x = q r`.
pub fn electric_green_imag_axis(q: f64, rvec: Vector3) -> Result<RealTensor3> {
    check_wavenumber(q)?;
    let p = point(rvec)?;
    let x = q * p.r;
    let s = -q * (-x).exp() / (4.0 * PI);
    Ok(RealTensor3::transverse_projector(p.rhat).scale(s / x).axpy(
        s * (1.0 / (x * x) + 1.0 / (x * x * x)),
        &RealTensor3::dipolar(p.rhat),
    ))
}

/// `q^2 u . G(i q r) . v`, finite as `q -> 0`.
pub(crate) fn imag_axis_bilinear_q2(q: f64, r: f64, pa: f64, pb: f64) -> f64 {
    -((-q * r).exp() / (4.0 * PI)) * (q * q * pa / r + q * pb / (r * r) + pb / (r * r * r))
}

/// `curl G = i k Gm (E . r)`.
pub fn curl_electric_green(k: f64, rvec: Vector3) -> Result<ComplexTensor3> {
    check_wavenumber(k)?;
    let p = point(rvec)?;
    let s = I * k * magnetic_scalar(k, p.r);
    Ok(ComplexTensor3::from_real(
        &RealTensor3::levi_civita_dot(p.rhat),
        s,
    ))
}

/// `mu1 x (curl G) . mu2 = i k Gm [mu1_par mu2_perp - (mu1_perp . mu2_perp) rhat]`.
pub fn cross_projected_curl(mu1: Vector3, mu2: Vector3, k: f64, rvec: Vector3) -> Result<CVector3> {
    check_wavenumber(k)?;
    let p = point(rvec)?;
    let s = I * k * magnetic_scalar(k, p.r);
    Ok(CVector3::from_real(cross_bracket(mu1, mu2, p.rhat), s))
}

/// `mu1_par mu2_perp - (mu1_perp . mu2_perp) rhat`.
pub fn cross_bracket(mu1: Vector3, mu2: Vector3, rhat: Vector3) -> Vector3 {
    let p1 = mu1.dot(rhat);
    let p2 = mu2.dot(rhat);
    let t1 = mu1 - rhat.scale(p1);
    let t2 = mu2 - rhat.scale(p2);
    t2.scale(p1) - rhat.scale(t1.dot(t2))
}

/// `dG/dk = -(e^{ix} / 4 pi) [i alpha - beta / x - 2 i beta / x^2 + 2 beta / x^3]`.
pub fn electric_green_dk(k: f64, rvec: Vector3) -> Result<ComplexTensor3> {
    check_wavenumber(k)?;
    let p = point(rvec)?;
    let (a, b) = electric_dk_coefficients(k * p.r);
    Ok(ComplexTensor3::combine(
        a,
        &RealTensor3::transverse_projector(p.rhat),
        b,
        &RealTensor3::dipolar(p.rhat),
    ))
}

/// `(a, b)` with `dG/dk = a alpha + b beta`.
pub(crate) fn electric_dk_coefficients(x: f64) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, x) * (-1.0 / (4.0 * PI));
    let a = e * I;
    let b = e * Complex64::new(-1.0 / x + 2.0 / (x * x * x), -2.0 / (x * x));
    (a, b)
}

/// `dGm/dk = -(e^{ix} / 4 pi) [i - 1/x - i/x^2]`.
pub fn magnetic_green_dk(k: f64, r: f64) -> Result<Complex64> {
    magnetic_green(k, r)?;
    Ok(magnetic_scalar_dk(k, r))
}

pub(crate) fn magnetic_scalar_dk(k: f64, r: f64) -> Complex64 {
    let x = k * r;
    Complex64::from_polar(1.0, x)
        * (-1.0 / (4.0 * PI))
        * Complex64::new(-1.0 / x, 1.0 - 1.0 / (x * x))
}

/// `d/d omega [omega^n G(omega r / c)]` at `omega = c k`.
///
/// `c` is the wave speed relating frequency and wavenumber; pass the speed of
/// light for SI input or `1.0` for reduced units.
pub fn green_frequency_derivative(
    k: f64,
    rvec: Vector3,
    weight_power: u32,
    c: f64,
) -> Result<ComplexTensor3> {
    if weight_power > 3 {
        return Err(Error::invalid(format!(
            "weight power must be 0..=3, got {weight_power}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!(
            "wave speed must be positive, got {c}"
        )));
    }
    let g = electric_green(k, rvec)?;
    let dg = electric_green_dk(k, rvec)?;
    let omega = c * k;
    let n = weight_power as i32;
    let w_n = omega.powi(n);
    let lead = if n == 0 {
        ComplexTensor3::zero()
    } else {
        g.scale(Complex64::from(n as f64 * omega.powi(n - 1)))
    };
    Ok(lead.add(&dg.scale(Complex64::from(w_n / c))))
}

/// `d/d omega [omega^n u . G . v]` in units with `c = 1` (so `omega = k`).
pub(crate) fn weighted_bilinear_derivative(
    k: f64,
    p: &Point,
    u: Vector3,
    v: Vector3,
    n: i32,
) -> Complex64 {
    let (pa, pb) = projections(u, v, p.rhat);
    let (a, b) = electric_coefficients(k * p.r);
    let g = -(k / (4.0 * PI)) * (a * pa + b * pb);
    let (da, db) = electric_dk_coefficients(k * p.r);
    let dg = da * pa + db * pb;
    let lead = if n == 0 {
        Complex64::from(0.0)
    } else {
        g * (n as f64 * k.powi(n - 1))
    };
    lead + dg * k.powi(n)
}

/// Angular-integrated vacuum correlators of the field:
/// `<E- E+> = -(8 pi^2 hbar c / eps0) Im G` and
/// `<B- E+> = -(8 pi^2 i hbar / (eps0 k)) curl Im G`, where
/// `curl Im G = k Re Gm (E . r)`.
pub fn vacuum_correlators(
    k: f64,
    rvec: Vector3,
    consts: &Constants,
) -> Result<(ComplexTensor3, ComplexTensor3)> {
    let g = electric_green(k, rvec)?;
    let p = point(rvec)?;
    let ee = ComplexTensor3::from_real(
        &g.im(),
        Complex64::from(-8.0 * PI * PI * consts.hbar * consts.c / consts.eps0),
    );
    let curl_im = RealTensor3::levi_civita_dot(p.rhat).scale(k * magnetic_scalar(k, p.r).re);
    let be = ComplexTensor3::from_real(
        &curl_im,
        Complex64::new(0.0, -8.0 * PI * PI * consts.hbar / (consts.eps0 * k)),
    );
    Ok((ee, be))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn transverse_entry_at_unit_argument() {
        let k = 2.0;
        let g = electric_green(k, Vector3::Z * (1.0 / k)).unwrap();
        let want = -(k / (4.0 * PI)) * I * Complex64::from_polar(1.0, 1.0);
        assert!(rel(g.0[0][0], want) < 1e-14);
        assert!(rel(g.0[1][1], want) < 1e-14);
        assert_eq!(g.0[0][1], Complex64::from(0.0));
    }

    #[test]
    fn longitudinal_entry_at_unit_argument() {
        let k = 0.7;
        let g = electric_green(k, Vector3::Z * (1.0 / k)).unwrap();
        let want = -(k / (4.0 * PI)) * Complex64::from_polar(1.0, 1.0) * Complex64::new(2.0, -2.0);
        assert!(rel(g.0[2][2], want) < 1e-14);
    }

    #[test]
    fn small_argument_imaginary_part() {
        // Taylor oracle to order x^2:
        // Im G = -(k/4pi)[alpha (1 - x^2/6) + beta (-1/3 + x^2/30)]
        let k = 3.0;
        let x = 1e-3;
        let rhat = Vector3::new(1.0, 2.0, 2.0).scale(1.0 / 3.0);
        let g = electric_green(k, rhat.scale(x / k)).unwrap().im();
        let al = RealTensor3::transverse_projector(rhat);
        let be = RealTensor3::dipolar(rhat);
        let oracle = al
            .scale(1.0 - x * x / 6.0)
            .axpy(-1.0 / 3.0 + x * x / 30.0, &be)
            .scale(-k / (4.0 * PI));
        assert!(g.axpy(-1.0, &oracle).max_abs() < 1e-12 * k / (6.0 * PI));
        let limit = RealTensor3::identity().scale(-k / (6.0 * PI));
        assert!(g.axpy(-1.0, &limit).max_abs() < 1e-6 * k / (6.0 * PI));
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        for x in [0.49, 0.5, 0.51, 0.3] {
            let direct = (x * f64::cos(x) - f64::sin(x)) / (x * x * x);
            assert!((sinc_defect(x) - direct).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn magnetic_scalar_values() {
        let k = 1.3;
        let m = magnetic_green(k, 1.0 / k).unwrap();
        let want = -(k / (4.0 * PI)) * Complex64::from_polar(1.0, 1.0) * Complex64::new(1.0, 1.0);
        assert!(rel(m, want) < 1e-14);

        let far = magnetic_green(k, 1e6 / k).unwrap();
        assert!((far.norm() / (k / (4.0 * PI * 1e6)) - 1.0).abs() < 1e-6);

        // x = 2 through real arithmetic only
        let m = magnetic_green(k, 2.0 / k).unwrap();
        let pre = -k / (4.0 * PI);
        let (s, c) = 2f64.sin_cos();
        assert!((m.re - pre * (c / 2.0 - s / 4.0)).abs() < 1e-14 * k);
        assert!((m.im - pre * (s / 2.0 + c / 4.0)).abs() < 1e-14 * k);
    }

    #[test]
    fn envelopes_restore_green_functions_with_phase() {
        let k = 1.4;
        let rvec = Vector3::new(0.3, -1.1, 2.0);
        let p = point(rvec).unwrap();
        let phase = Complex64::from_polar(1.0, k * p.r);
        let g = electric_envelope(k, &p).scale(phase);
        assert!(g.sub(&electric_green(k, rvec).unwrap()).max_abs() < 1e-15 * g.max_abs());
        let m = magnetic_envelope(k, p.r) * phase;
        assert!(rel(m, magnetic_green(k, p.r).unwrap()) < 1e-15);
    }

    #[test]
    fn singular_at_origin() {
        assert!(matches!(
            electric_green(1.0, Vector3::ZERO),
            Err(Error::Singular)
        ));
        assert!(matches!(magnetic_green(1.0, 0.0), Err(Error::Singular)));
        assert!(matches!(
            electric_green_imag_axis(1.0, Vector3::ZERO),
            Err(Error::Singular)
        ));
        assert!(matches!(
            curl_electric_green(1.0, Vector3::ZERO),
            Err(Error::Singular)
        ));
        assert!(electric_green(0.0, Vector3::X).is_err());
    }

    #[test]
    fn imag_axis_limits() {
        let r = 2.0;
        let rvec = Vector3::Z * r;
        // q^2 (r G r) -> 2 / (4 pi r^3)
        let q = 1e-7;
        let g = electric_green_imag_axis(q, rvec).unwrap();
        let lim = 2.0 / (4.0 * PI * r.powi(3));
        assert!((q * q * g.0[2][2] / lim - 1.0).abs() < 1e-6);
        // decay envelope
        let g = electric_green_imag_axis(50.0 / r, rvec).unwrap();
        assert!(g.max_abs() < (-50f64).exp() / (4.0 * PI * r) * 10.0);
    }

    #[test]
    fn imag_axis_matches_complex_path() {
        let q = 1.7;
        let rvec = Vector3::new(0.2, -0.4, 0.5).scale(1.0 / (q * std::f64::consts::FRAC_1_SQRT_2));
        let rvec = rvec.scale(1.0 / (q * rvec.norm()));
        let real = electric_green_imag_axis(q, rvec).unwrap();
        let cplx = electric_green_complex(Complex64::new(0.0, q), rvec).unwrap();
        assert!(cplx.im().max_abs() < 1e-13 * cplx.max_abs());
        assert!(cplx.re().axpy(-1.0, &real).max_abs() < 1e-12 * real.max_abs());
    }

    #[test]
    fn curl_structure_along_z() {
        let k = 1.1;
        let c = curl_electric_green(k, Vector3::Z * 3.0).unwrap();
        let s = I * k * magnetic_green(k, 3.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = match (i, j) {
                    (0, 1) => s,
                    (1, 0) => -s,
                    _ => Complex64::from(0.0),
                };
                assert!((c.0[i][j] - want).norm() <= 1e-15 * s.norm());
            }
        }
        let r = c.mul_vec(Vector3::Z);
        assert!(r.norm() == 0.0);
    }

    #[test]
    fn cross_projected_curl_cases() {
        let k = 1.0;
        let rvec = Vector3::Z * 2.0;
        let mu = 1.3;
        let s = 1.0 / 2f64.sqrt();
        let z = cross_projected_curl(Vector3::Z * mu, Vector3::Z * mu, k, rvec).unwrap();
        assert_eq!(z.norm(), 0.0);
        let z = cross_projected_curl(Vector3::X * mu, Vector3::Y * mu, k, rvec).unwrap();
        assert_eq!(z.norm(), 0.0);
        // mu2 along the axis: both bracket terms vanish
        let tilted = Vector3::new(s, 0.0, s) * mu;
        let z = cross_projected_curl(tilted, Vector3::Z * mu, k, rvec).unwrap();
        assert_eq!(z.norm(), 0.0);
        // mu1 along the axis, tilted mu2: i k Gm mu^2/sqrt2 x
        let got = cross_projected_curl(Vector3::Z * mu, tilted, k, rvec).unwrap();
        let want = CVector3::from_real(
            Vector3::X * (mu * mu * s),
            I * k * magnetic_green(k, 2.0).unwrap(),
        );
        assert!((got - want).norm() < 1e-15 * want.norm());
        let direct = curl_electric_green(k, rvec)
            .unwrap()
            .mul_vec(tilted)
            .cross_from_left(Vector3::Z * mu);
        assert!((got - direct).norm() < 1e-15 * want.norm());
    }

    #[test]
    fn frequency_derivative_decomposition() {
        let k = 0.9;
        let rvec = Vector3::new(1.0, 0.5, -0.3);
        let c = 3.0;
        let d0 = green_frequency_derivative(k, rvec, 0, c).unwrap();
        let dk = electric_green_dk(k, rvec)
            .unwrap()
            .scale(Complex64::from(1.0 / c));
        assert!(d0.sub(&dk).max_abs() <= 1e-15 * dk.max_abs());
        let d3 = green_frequency_derivative(k, rvec, 3, c).unwrap();
        let w = c * k;
        let g = electric_green(k, rvec).unwrap();
        let want = g
            .scale(Complex64::from(3.0 * w * w))
            .add(&d0.scale(Complex64::from(w.powi(3))));
        assert!(d3.sub(&want).max_abs() <= 1e-14 * want.max_abs());
        assert!(green_frequency_derivative(k, rvec, 4, c).is_err());
    }

    #[test]
    fn frequency_derivative_against_finite_difference() {
        let c = 2.5;
        let k = 1.3;
        let rvec = Vector3::new(0.6, 0.0, 0.8).scale(2.0 / k);
        let w = c * k;
        let dw = 1e-7 * w;
        let f = |w: f64| {
            electric_green(w / c, rvec)
                .unwrap()
                .scale(Complex64::from(w.powi(3)))
        };
        let fd = f(w + dw)
            .sub(&f(w - dw))
            .scale(Complex64::from(1.0 / (2.0 * dw)));
        let an = green_frequency_derivative(k, rvec, 3, c).unwrap();
        assert!(fd.sub(&an).max_abs() < 1e-6 * an.max_abs());
    }

    #[test]
    fn correlators() {
        let consts = Constants::codata();
        let k = 2.0;
        let rvec = Vector3::new(0.3, 0.1, -0.2);
        let (ee, be) = vacuum_correlators(k, rvec, &consts).unwrap();
        assert_eq!(ee.im().max_abs(), 0.0);
        assert!(ee.max_asymmetry() <= 1e-14 * ee.max_abs());
        let rhat = rvec.scale(1.0 / rvec.norm());
        assert!(be.mul_vec(rhat).norm() <= 1e-15 * be.max_abs());

        let (ee, _) = vacuum_correlators(k, Vector3::X * (1e-4 / k), &consts).unwrap();
        let lim = 8.0 * PI * PI * consts.hbar * consts.c / consts.eps0 * k / (6.0 * PI);
        for i in 0..3 {
            assert!((ee.0[i][i].re / lim - 1.0).abs() < 1e-7);
        }
    }

    proptest! {
        #[test]
        fn green_is_symmetric_and_even(
            k in 0.01..50.0f64, x in -5.0..5.0f64, y in -5.0..5.0f64, z in -5.0..5.0f64,
        ) {
            let r = Vector3::new(x, y, z);
            prop_assume!(r.norm() > 1e-3);
            let g = electric_green(k, r).unwrap();
            prop_assert!(g.max_asymmetry() <= 1e-14 * g.max_abs());
            prop_assert_eq!(electric_green(k, -r).unwrap(), g);
            let c = curl_electric_green(k, r).unwrap();
            let cm = curl_electric_green(k, -r).unwrap();
            prop_assert!(c.add(&cm).max_abs() == 0.0);
        }

        #[test]
        fn imag_axis_is_real(q in 0.01..20.0f64, r in 0.05..5.0f64) {
            let rvec = Vector3::new(0.48, -0.6, 0.64).scale(r);
            let cplx = electric_green_complex(Complex64::new(0.0, q), rvec).unwrap();
            prop_assert!(cplx.im().max_abs() < 1e-13 * cplx.max_abs());
            let real = electric_green_imag_axis(q, rvec).unwrap();
            prop_assert!(cplx.re().axpy(-1.0, &real).max_abs() < 1e-12 * real.max_abs());
        }

        #[test]
        fn cross_curl_equals_direct_composition(
            a in proptest::array::uniform3(-2.0..2.0f64),
            b in proptest::array::uniform3(-2.0..2.0f64),
            r in proptest::array::uniform3(-2.0..2.0f64),
            k in 0.1..10.0f64,
        ) {
            let (a, b, r) = (Vector3::from_array(a), Vector3::from_array(b), Vector3::from_array(r));
            prop_assume!(r.norm() > 0.05);
            let got = cross_projected_curl(a, b, k, r).unwrap();
            let direct = curl_electric_green(k, r).unwrap().mul_vec(b).cross_from_left(a);
            let scale = a.norm() * b.norm() * k * magnetic_green(k, r.norm()).unwrap().norm();
            prop_assert!((got - direct).norm() <= 1e-12 * scale);
        }
    }
}
