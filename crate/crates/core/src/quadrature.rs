//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! Each panel is integrated with the 7-point Gauss / 15-point Kronrod pair,
//! with the error scaling of QUADPACK's `qk15`. The panel with the largest
//! error estimate is bisected until the summed estimate meets the target.
//! Everything runs on one thread in a fixed order, so results are bitwise
//! reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::algebra::Vector3;
use crate::error::{Error, Result};
use crate::green::{imag_axis_bilinear_q2, projections};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Absolute error target the estimate was held against.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    /// Panel budget; exceeding it is a non-convergence error.
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-10,
            max_panels: 2000,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureOptions {
            rel_tol,
            ..Self::default()
        }
    }
}

/// Absolute floor for integrals whose exact value is zero.
const ABS_FLOOR: f64 = 1e-300;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Panel {
    // largest error first; ties broken by position so the order is total
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::invalid(format!("integrand is not finite at {x:e}")))
        }
    };

    let fc = eval(centr)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let absc = hlgth * XGK[j];
        let f1 = eval(centr - absc)?;
        let f2 = eval(centr + absc)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let dh = hlgth.abs();
    let value = resk * hlgth;
    let resabs = resabs * dh;
    let resasc = resasc * dh;
    let mut error = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        resabs,
    })
}

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if (1e-14..=1e-2).contains(&rel_tol) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "rel_tol must lie in [1e-14, 1e-2], got {rel_tol:e}"
        )))
    }
}

/// `int_a^b f` to relative tolerance `rel_tol`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    adaptive_integrate_with(f, &[a, b], QuadratureOptions::with_rel_tol(rel_tol))
}

/// Like [`adaptive_integrate`], starting from the panels between consecutive
/// `breakpoints` (strictly increasing, at least two).
pub fn adaptive_integrate_with<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    opts: QuadratureOptions,
) -> Result<QuadratureResult> {
    check_rel_tol(opts.rel_tol)?;
    if breakpoints.len() < 2 {
        return Err(Error::invalid("need at least two breakpoints"));
    }
    if breakpoints.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("integration limits must be finite"));
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "integration limits must be strictly increasing",
        ));
    }
    if opts.max_panels < breakpoints.len() - 1 {
        return Err(Error::invalid(
            "panel budget smaller than the initial partition",
        ));
    }

    let mut heap = BinaryHeap::with_capacity(opts.max_panels + 1);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut resabs = 0.0;
    for w in breakpoints.windows(2) {
        let p = kronrod(&f, w[0], w[1])?;
        value += p.value;
        error += p.error;
        resabs += p.resabs;
        heap.push(p);
    }

    let target = |value: f64, resabs: f64| {
        (opts.rel_tol * value.abs())
            .max(ABS_FLOOR)
            .max(100.0 * f64::EPSILON * resabs)
    };

    loop {
        if error <= target(value, resabs) {
            break;
        }
        if heap.len() >= opts.max_panels {
            break;
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // panel cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let left = kronrod(&f, worst.a, mid)?;
        let right = kronrod(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
    }

    // resum in position order so running-sum drift does not leak out
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    let resabs: f64 = panels.iter().map(|p| p.resabs).sum();
    let tolerance = target(value, resabs);
    let result = QuadratureResult {
        value,
        abs_error_estimate: error,
        evaluations: 15 * (2 * panels.len() - (breakpoints.len() - 1)),
        converged: error <= tolerance,
        tolerance,
    };
    if result.converged {
        Ok(result)
    } else {
        Err(Error::NonConvergence { partial: result })
    }
}

/// `int_0^inf f` with the split point `q_c > 0`: `[0, q_c]` directly and the
/// tail through `q = q_c / t`, `t in (0, 1]`. Both pieces share one adaptive
/// run over `s in [0, 2]`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    q_c: f64,
    opts: QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(q_c > 0.0 && q_c.is_finite()) {
        return Err(Error::invalid(format!(
            "split point must be positive, got {q_c}"
        )));
    }
    let mapped = |s: f64| {
        if s <= 1.0 {
            q_c * f(q_c * s)
        } else {
            let t = 2.0 - s;
            let y = f(q_c / t);
            if y == 0.0 {
                0.0
            } else {
                y * q_c / (t * t)
            }
        }
    };
    adaptive_integrate_with(mapped, &[0.0, 1.0, 2.0], opts)
}

/// Integrand of the off-resonant imaginary-axis term,
/// `(q^2 - kA kB) q^2 muA.G(iqR).muB / ((q^2 + kA^2)(q^2 + kB^2)) / pi`.
pub fn offresonant_integrand(
    q: f64,
    ka: f64,
    kb: f64,
    r: f64,
    mu_a: Vector3,
    mu_b: Vector3,
    rhat: Vector3,
) -> f64 {
    let (pa, pb) = projections(mu_a, mu_b, rhat);
    integrand(q, ka, kb, r, pa, pb)
}

fn integrand(q: f64, ka: f64, kb: f64, r: f64, pa: f64, pb: f64) -> f64 {
    let q2 = q * q;
    (q2 - ka * kb) * imag_axis_bilinear_q2(q, r, pa, pb) / ((q2 + ka * ka) * (q2 + kb * kb)) / PI
}

/// `int_0^inf dq` of [`offresonant_integrand`] to relative tolerance 1e-10.
pub fn offresonant_integral(
    ka: f64,
    kb: f64,
    r: f64,
    mu_a: Vector3,
    mu_b: Vector3,
    rhat: Vector3,
) -> Result<f64> {
    offresonant_integral_with(ka, kb, r, mu_a, mu_b, rhat, QuadratureOptions::default())
        .map(|q| q.value)
}

/// [`offresonant_integral`] with explicit options and the full result.
pub fn offresonant_integral_with(
    ka: f64,
    kb: f64,
    r: f64,
    mu_a: Vector3,
    mu_b: Vector3,
    rhat: Vector3,
    opts: QuadratureOptions,
) -> Result<QuadratureResult> {
    for (name, x) in [("kA", ka), ("kB", kb), ("R", r)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::invalid(format!("{name} must be positive, got {x}")));
        }
    }
    if (rhat.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("rhat must be a unit vector"));
    }
    let (pa, pb) = projections(mu_a, mu_b, rhat);
    let q_c = (10.0 / r).max(5.0 * ka.max(kb));
    integrate_semi_infinite(|q| integrand(q, ka, kb, r, pa, pb), q_c, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn polynomial() {
        let r = adaptive_integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.converged && r.evaluations > 0);
    }

    #[test]
    fn exponential_tail() {
        let r =
            integrate_semi_infinite(|x| (-x).exp(), 1.0, QuadratureOptions::with_rel_tol(1e-12))
                .unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cancelling_integral_hits_floor() {
        let r = adaptive_integrate(f64::sin, 0.0, 2.0 * PI, 1e-10).unwrap();
        assert!(r.value.abs() < 1e-12);
        assert!(r.converged);
        assert!(r.abs_error_estimate <= r.tolerance);
        // relative target alone is unreachable here
        assert!(r.tolerance > 1e-10 * r.value.abs());
    }

    #[test]
    fn zero_integrand() {
        let r = adaptive_integrate(|_| 0.0, -1.0, 1.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.tolerance, ABS_FLOOR);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(adaptive_integrate(|x| x, 1.0, 0.0, 1e-8).is_err());
        assert!(adaptive_integrate(|x| x, 0.0, f64::INFINITY, 1e-8).is_err());
        assert!(adaptive_integrate(|x| x, 0.0, 1.0, 1e-16).is_err());
        assert!(adaptive_integrate(|x| x, 0.0, 1.0, 0.1).is_err());
        assert!(adaptive_integrate(|x| 1.0 / x, -1.0, 1.0, 1e-8).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let opts = QuadratureOptions {
            rel_tol: 1e-14,
            max_panels: 4,
        };
        let err = adaptive_integrate_with(|x: f64| (50.0 * x).sin().abs(), &[0.0, 10.0], opts)
            .unwrap_err();
        match err {
            Error::NonConvergence { partial } => {
                assert!(!partial.converged);
                assert!(partial.evaluations > 0);
                assert!(partial.value.is_finite());
            }
            e => panic!("unexpected error {e}"),
        }
    }

    // Reference values from a 10^6-interval trapezoid rule on [0, 200/R],
    // computed independently of this module and cross-checked in extended
    // precision. Columns: kA, kB, R, rhat, muA, muB, value.
    fn fixtures() -> Vec<(f64, f64, f64, Vector3, Vector3, Vector3, f64)> {
        let tilt = Vector3::new(S, 0.0, S);
        vec![
            (
                2.0,
                2.0,
                1.0,
                Vector3::Z,
                Vector3::X,
                Vector3::X,
                5.569_138_237_566_313_36e-3,
            ),
            (
                1.0,
                1.0,
                1.0,
                Vector3::Z,
                tilt,
                Vector3::Z,
                -1.356_060_115_712_577_79e-2,
            ),
            (
                1.5,
                1.2,
                2.0,
                Vector3::Z,
                tilt,
                Vector3::X,
                7.992_770_086_614_165_66e-4,
            ),
            (
                5.0,
                5.0,
                1.0,
                Vector3::new(0.6, 0.0, 0.8),
                Vector3::X,
                Vector3::Z,
                -2.576_159_326_049_321_40e-3,
            ),
            (
                0.5,
                0.5,
                1.0,
                Vector3::Z,
                tilt,
                tilt,
                -1.111_218_297_071_585_14e-2,
            ),
        ]
    }

    #[test]
    fn matches_trapezoid_fixtures() {
        for (ka, kb, r, rhat, a, b, want) in fixtures() {
            let got = offresonant_integral(ka, kb, r, a, b, rhat).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-8,
                "{ka} {kb} {r}: {got:e} vs {want:e}"
            );
        }
    }

    #[test]
    fn transverse_orthogonal_dipoles_vanish() {
        let v = offresonant_integral(1.0, 1.0, 2.0, Vector3::X, Vector3::Y, Vector3::Z).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn doubling_separation_reduces_magnitude() {
        for (ka, kb, r, rhat, a, b, _) in fixtures() {
            let near = offresonant_integral(ka, kb, r, a, b, rhat).unwrap();
            let far = offresonant_integral(ka, kb, 2.0 * r, a, b, rhat).unwrap();
            assert!(far.abs() < near.abs());
        }
    }

    #[test]
    fn integrand_is_regular_near_zero() {
        let r = 1.3;
        let tilt = Vector3::new(S, 0.0, S);
        let mut q = 1e-12 / r;
        while q <= 1e3 / r {
            let y = offresonant_integrand(q, 0.7, 0.9, r, tilt, Vector3::Z, Vector3::Z);
            assert!(y.is_finite(), "q = {q:e}");
            q *= 1.1;
        }
    }

    proptest! {
        #[test]
        fn symmetric_in_wavenumbers(ka in 0.1..10.0f64, kb in 0.1..10.0f64, r in 0.2..5.0f64) {
            let a = Vector3::new(S, 0.0, S);
            let x = offresonant_integral(ka, kb, r, a, Vector3::X, Vector3::Z).unwrap();
            let y = offresonant_integral(kb, ka, r, a, Vector3::X, Vector3::Z).unwrap();
            prop_assert_eq!(x, y);
        }

        #[test]
        fn tolerance_is_honest(ka in 0.1..10.0f64, kb in 0.1..10.0f64, r in 0.2..5.0f64,
                               rel in 1e-10..1e-4f64) {
            let a = Vector3::new(0.3, -0.5, 0.8);
            let b = Vector3::new(-0.2, 0.9, 0.4);
            let rhat = Vector3::new(0.48, 0.6, 0.64);
            let coarse = offresonant_integral_with(ka, kb, r, a, b, rhat,
                QuadratureOptions::with_rel_tol(rel)).unwrap();
            let fine = offresonant_integral_with(ka, kb, r, a, b, rhat,
                QuadratureOptions::with_rel_tol(rel / 2.0)).unwrap();
            prop_assert!((coarse.value - fine.value).abs() <= coarse.abs_error_estimate);
        }
    }
}
