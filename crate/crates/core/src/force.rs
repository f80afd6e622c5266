//! Nonconservative forces on the two atoms.
//!
//! Four tiers are available and the caller picks one explicitly:
//!
//! * `LeadingComposed` contracts the Green functions directly,
//!   `F_A ~ X_A Im(Gm g)` and `F_B ~ X_B Im(conj(Gm) g)` with
//!   `g = muA . G . mu_b` and the brackets `X` of [`cross_bracket`].
//! * `LeadingClosed` is the same expression expanded in `v = k0 R`.
//! * `FullIdentical` adds the corrections of relative size `Gamma/omega0`.
//! * `FullDissimilar` handles `omega_A != omega_B`; the `1/Delta` pieces are
//!   regrouped so that `Delta -> 0` is smooth and approaches `FullIdentical`.
//!
//! Internally everything is evaluated in reduced units: lengths in `1/k0`,
//! frequencies in `omega_A`, dipoles in `|mu_A|`, so `c = 1` and `k = omega`.
//! Forces come out in units of [`force_scale`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::Vector3;
use crate::error::{Error, Result};
use crate::green::{
    self, cross_bracket, electric_bilinear, magnetic_scalar, magnetic_scalar_dk, Point,
};
use crate::model::{force_scale, TwoAtomSystem};
use crate::quadrature::offresonant_integral;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Leading tiers are refused below this `k0 R`.
pub const MIN_LEADING_V: f64 = 0.1;

/// Below this `|Delta T|` the trigonometric ratios use their series.
const TRIG_SERIES_SWITCH: f64 = 1e-4;

/// Below this `|Delta| / omega_A` the frequency difference quotient is taken
/// as a midpoint derivative.
const DIFFERENCE_SWITCH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomId {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaTier {
    LeadingClosed,
    LeadingComposed,
    FullIdentical,
    FullDissimilar,
}

/// Which form of the long-time correction terms to use.
///
/// `Reconciled` (default) is the form whose identical-atom limit matches the
/// identical-atom expressions. `Printed` keeps the sign and factor placement
/// as originally typeset; it does not approach that limit and is kept only
/// for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AppendixReading {
    #[default]
    Reconciled,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermLabel {
    Leading,
    FrequencyDerivative,
    ResonantDecay,
    ResonantCos,
    ResonantSin,
    QuasiStationary,
    OffResonant,
}

impl TermLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            TermLabel::Leading => "leading",
            TermLabel::FrequencyDerivative => "frequency-derivative",
            TermLabel::ResonantDecay => "resonant-decay",
            TermLabel::ResonantCos => "resonant-cos",
            TermLabel::ResonantSin => "resonant-sin",
            TermLabel::QuasiStationary => "quasi-stationary",
            TermLabel::OffResonant => "off-resonant",
        }
    }
}

impl std::fmt::Display for TermLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceTerm {
    pub label: TermLabel,
    pub force: Vector3,
}

/// Forces on both atoms at one observation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSample {
    pub t: f64,
    pub f_a: Vector3,
    pub f_b: Vector3,
    pub f_net: Vector3,
    /// Signed component along `R`.
    pub f_a_par: f64,
    pub f_a_perp: Vector3,
    pub f_b_par: f64,
    pub f_b_perp: Vector3,
    pub tier: FormulaTier,
}

/// `(1 - tau) e^{-tau}`.
pub fn leading_envelope(tau: f64) -> f64 {
    (1.0 - tau) * (-tau).exp()
}

/// Reduced-unit view of a system.
struct Frame {
    point: Point,
    mu_a: Vector3,
    mu_b: Vec<Vector3>,
    force_scale: f64,
}

impl Frame {
    fn of(system: &TwoAtomSystem) -> Frame {
        let mu = system.atom_a().primary_dipole();
        let scale = 1.0 / mu.norm();
        Frame {
            point: Point {
                r: system.v(),
                rhat: system.rhat(),
            },
            mu_a: mu.scale(scale),
            mu_b: system
                .atom_b()
                .dipoles()
                .iter()
                .map(|d| d.scale(scale))
                .collect(),
            force_scale: force_scale(system),
        }
    }

    fn bracket(&self, which: AtomId, mu_b: Vector3) -> Vector3 {
        match which {
            AtomId::A => cross_bracket(self.mu_a, mu_b, self.point.rhat),
            AtomId::B => cross_bracket(mu_b, self.mu_a, self.point.rhat),
        }
    }

    /// `sum_b bracket_b * unit * s_b`, each sublevel scaled before summing.
    fn assemble(
        &self,
        which: AtomId,
        unit: f64,
        mut s: impl FnMut(Vector3) -> Result<f64>,
    ) -> Result<Vector3> {
        let mut total = Vector3::ZERO;
        for &mb in &self.mu_b {
            let x = self.bracket(which, mb);
            total += x.scale(unit * s(mb)?);
        }
        Ok(total)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "observation time must be finite and >= 0, got {t}"
        )))
    }
}

fn require_identical(system: &TwoAtomSystem) -> Result<()> {
    if system.is_identical() {
        Ok(())
    } else {
        Err(Error::WrongTier(
            "atoms are detuned; use force_full_dissimilar".into(),
        ))
    }
}

fn check_leading(system: &TwoAtomSystem, t: f64) -> Result<()> {
    require_identical(system)?;
    check_time(t)?;
    let v = system.v();
    if v < MIN_LEADING_V {
        return Err(Error::invalid(format!(
            "k0 R = {v:e} is below {MIN_LEADING_V}; the leading expressions do not apply"
        )));
    }
    Ok(())
}

/// Leading force by direct contraction of the Green functions.
///
/// `Gm` and `G` carry the same phase `e^{iv}`, so A sees
/// `Im(e^{2iv} Gm G)` and B sees `Im(conj(Gm) G)`; the phase is applied once
/// instead of being rounded into each factor.
pub fn force_leading_identical(system: &TwoAtomSystem, t: f64, which: AtomId) -> Result<Vector3> {
    check_leading(system, t)?;
    let fr = Frame::of(system);
    let v = fr.point.r;
    let g = green::electric_envelope(1.0, &fr.point);
    let gm = green::magnetic_envelope(1.0, v);
    let (s2, c2) = (2.0 * v).sin_cos();
    let phase = Complex64::new(c2, s2);
    let unit = -16.0 * PI * PI * fr.force_scale * leading_envelope(system.atom_a().gamma() * t);
    fr.assemble(which, unit, |mb| {
        let gb = g.bilinear(fr.mu_a, mb);
        Ok(match which {
            AtomId::A => (phase * gm * gb).im,
            AtomId::B => (gm.conj() * gb).im,
        })
    })
}

/// Closed form of the leading force on atom A:
/// `-F0 env sum_b X_A . [alpha a(v) + beta b(v)]` with
/// `a = (sin 2v + cos 2v / v) / v^2` and
/// `b = (cos 2v - 2 sin 2v / v - cos 2v / v^2) / v^3`.
pub fn force_closed_a(system: &TwoAtomSystem, t: f64) -> Result<Vector3> {
    check_leading(system, t)?;
    let fr = Frame::of(system);
    let v = fr.point.r;
    let (s2, c2) = (2.0 * v).sin_cos();
    let a = (s2 + c2 / v) / (v * v);
    let b = (c2 - 2.0 * s2 / v - c2 / (v * v)) / (v * v * v);
    let unit = -fr.force_scale * leading_envelope(system.atom_a().gamma() * t);
    fr.assemble(AtomId::A, unit, |mb| {
        let (pa, pb) = green::projections(fr.mu_a, mb, fr.point.rhat);
        Ok(pa * a + pb * b)
    })
}

/// Closed form of the leading force on atom B:
/// `-F0 env sum_b X_B . [(beta - alpha) / v^3 + beta / v^5]`.
pub fn force_closed_b(system: &TwoAtomSystem, t: f64) -> Result<Vector3> {
    check_leading(system, t)?;
    let fr = Frame::of(system);
    let v = fr.point.r;
    let v3 = v * v * v;
    let v5 = v3 * v * v;
    let unit = -fr.force_scale * leading_envelope(system.atom_a().gamma() * t);
    fr.assemble(AtomId::B, unit, |mb| {
        let (pa, pb) = green::projections(fr.mu_a, mb, fr.point.rhat);
        Ok((pb - pa) / v3 + pb / v5)
    })
}

/// Net leading force `F_A + F_B`, written as a symmetric bracket against
/// `Re Gm Im g` plus an antisymmetric bracket against `Im Gm Re g`.
pub fn net_force(system: &TwoAtomSystem, t: f64) -> Result<Vector3> {
    check_leading(system, t)?;
    let fr = Frame::of(system);
    let rhat = fr.point.rhat;
    let gm = magnetic_scalar(1.0, fr.point.r);
    let unit = -16.0 * PI * PI * fr.force_scale * leading_envelope(system.atom_a().gamma() * t);
    let mut total = Vector3::ZERO;
    for &mb in &fr.mu_b {
        let g = electric_bilinear(1.0, &fr.point, fr.mu_a, mb);
        let pa = fr.mu_a.dot(rhat);
        let pb = mb.dot(rhat);
        let ta = fr.mu_a - rhat.scale(pa);
        let tb = mb - rhat.scale(pb);
        let sym = tb.scale(pa) + ta.scale(pb) - rhat.scale(2.0 * ta.dot(tb));
        let anti = tb.scale(pa) - ta.scale(pb);
        total += (sym.scale(gm.re * g.im) + anti.scale(gm.im * g.re)).scale(unit);
    }
    Ok(total)
}

/// `((fa - fb) / 2, fa + fb)`: the action-reaction pair and the net push.
pub fn reciprocal_split(fa: Vector3, fb: Vector3) -> (Vector3, Vector3) {
    ((fa - fb).scale(0.5), fa + fb)
}

/// Full identical-atom force with the default reading.
pub fn force_full_identical(system: &TwoAtomSystem, t: f64, which: AtomId) -> Result<Vector3> {
    force_full_identical_with(system, t, which, AppendixReading::default())
}

pub fn force_full_identical_with(
    system: &TwoAtomSystem,
    t: f64,
    which: AtomId,
    reading: AppendixReading,
) -> Result<Vector3> {
    sum_terms(&identical_terms(system, t, which, reading)?)
}

/// Full dissimilar-atom force with the default reading.
pub fn force_full_dissimilar(system: &TwoAtomSystem, t: f64, which: AtomId) -> Result<Vector3> {
    force_full_dissimilar_with(system, t, which, AppendixReading::default())
}

pub fn force_full_dissimilar_with(
    system: &TwoAtomSystem,
    t: f64,
    which: AtomId,
    reading: AppendixReading,
) -> Result<Vector3> {
    let terms = dissimilar_terms(system, t, which, reading, false)?;
    sum_terms(&terms)
}

fn sum_terms(terms: &[ForceTerm]) -> Result<Vector3> {
    let f: Vector3 = terms.iter().map(|t| t.force).sum();
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::invalid("force evaluated to a non-finite value"))
    }
}

/// Dispatch on `tier`.
pub fn force(system: &TwoAtomSystem, t: f64, which: AtomId, tier: FormulaTier) -> Result<Vector3> {
    force_with(system, t, which, tier, AppendixReading::default())
}

pub fn force_with(
    system: &TwoAtomSystem,
    t: f64,
    which: AtomId,
    tier: FormulaTier,
    reading: AppendixReading,
) -> Result<Vector3> {
    match (tier, which) {
        (FormulaTier::LeadingClosed, AtomId::A) => force_closed_a(system, t),
        (FormulaTier::LeadingClosed, AtomId::B) => force_closed_b(system, t),
        (FormulaTier::LeadingComposed, _) => force_leading_identical(system, t, which),
        (FormulaTier::FullIdentical, _) => force_full_identical_with(system, t, which, reading),
        (FormulaTier::FullDissimilar, _) => force_full_dissimilar_with(system, t, which, reading),
    }
}

/// Forces on both atoms, their sum and their axial split.
pub fn force_sample(
    system: &TwoAtomSystem,
    t: f64,
    tier: FormulaTier,
    reading: AppendixReading,
) -> Result<ForceSample> {
    let f_a = force_with(system, t, AtomId::A, tier, reading)?;
    let f_b = force_with(system, t, AtomId::B, tier, reading)?;
    let rhat = system.rhat();
    let f_a_par = f_a.dot(rhat);
    let f_b_par = f_b.dot(rhat);
    Ok(ForceSample {
        t,
        f_a,
        f_b,
        f_net: f_a + f_b,
        f_a_par,
        f_a_perp: f_a - rhat.scale(f_a_par),
        f_b_par,
        f_b_perp: f_b - rhat.scale(f_b_par),
        tier,
    })
}

/// Term-by-term breakdown of a force. Terms sum to the force returned by the
/// same tier, up to rounding.
pub fn force_terms(
    system: &TwoAtomSystem,
    t: f64,
    which: AtomId,
    tier: FormulaTier,
    reading: AppendixReading,
) -> Result<Vec<ForceTerm>> {
    match tier {
        FormulaTier::LeadingClosed | FormulaTier::LeadingComposed => Ok(vec![ForceTerm {
            label: TermLabel::Leading,
            force: force_with(system, t, which, tier, reading)?,
        }]),
        FormulaTier::FullIdentical => identical_terms(system, t, which, reading),
        FormulaTier::FullDissimilar => dissimilar_terms(system, t, which, reading, true),
    }
}

/// Sum of per-sublevel term lists into labelled force vectors.
fn collect(
    fr: &Frame,
    which: AtomId,
    unit: f64,
    labels: &[TermLabel],
    mut per_b: impl FnMut(Vector3) -> Result<Vec<f64>>,
) -> Result<Vec<ForceTerm>> {
    let mut out: Vec<ForceTerm> = labels
        .iter()
        .map(|&label| ForceTerm {
            label,
            force: Vector3::ZERO,
        })
        .collect();
    for &mb in &fr.mu_b {
        let x = fr.bracket(which, mb);
        let s = per_b(mb)?;
        for (term, s) in out.iter_mut().zip(s) {
            term.force += x.scale(unit * s);
        }
    }
    Ok(out)
}

/// `h(w) = w^4 Gm(w) g(w)` and its derivative, for atom A.
fn h_a(fr: &Frame, mb: Vector3, w: f64) -> Complex64 {
    w.powi(4) * magnetic_scalar(w, fr.point.r) * electric_bilinear(w, &fr.point, fr.mu_a, mb)
}

fn h_a_prime(fr: &Frame, mb: Vector3, w: f64) -> Complex64 {
    let r = fr.point.r;
    let gm = magnetic_scalar(w, r);
    let d3 = green::weighted_bilinear_derivative(w, &fr.point, fr.mu_a, mb, 3);
    let g = electric_bilinear(w, &fr.point, fr.mu_a, mb);
    d3 * w * gm + w.powi(3) * g * (gm + w * magnetic_scalar_dk(w, r))
}

/// `w^2 g(w)` and its derivative, for atom B.
fn h_b(fr: &Frame, mb: Vector3, w: f64) -> Complex64 {
    w * w * electric_bilinear(w, &fr.point, fr.mu_a, mb)
}

fn h_b_prime(fr: &Frame, mb: Vector3, w: f64) -> Complex64 {
    green::weighted_bilinear_derivative(w, &fr.point, fr.mu_a, mb, 2)
}

fn identical_terms(
    system: &TwoAtomSystem,
    t: f64,
    which: AtomId,
    reading: AppendixReading,
) -> Result<Vec<ForceTerm>> {
    require_identical(system)?;
    check_time(t)?;
    let fr = Frame::of(system);
    let omega = system.atom_a().omega0();
    let gamma = system.atom_a().gamma();
    let gh = gamma / omega;
    let tau = gamma * t;
    let e = (-tau).exp();
    let r = fr.point.r;
    let gm = magnetic_scalar(1.0, r);
    let unit = 8.0 * PI * PI * fr.force_scale;
    let labels = [
        TermLabel::FrequencyDerivative,
        TermLabel::Leading,
        TermLabel::QuasiStationary,
        TermLabel::OffResonant,
    ];
    collect(&fr, which, unit, &labels, |mb| {
        let g = electric_bilinear(1.0, &fr.point, fr.mu_a, mb);
        let off = offresonant_integral(1.0, 1.0, r, fr.mu_a, mb, fr.point.rhat)?;
        Ok(match which {
            AtomId::A => {
                let phi = gm * g;
                vec![
                    2.0 * gh * e * h_a_prime(&fr, mb, 1.0).re,
                    -2.0 * (1.0 - tau) * e * phi.im,
                    -2.0 * gh * e * phi.re,
                    2.0 * gh * e * gm.re * off,
                ]
            }
            AtomId::B => {
                // C = i Gm
                let (c_re, c_im) = (-gm.im, gm.re);
                let d2 = h_b_prime(&fr, mb, 1.0);
                let sign = match reading {
                    AppendixReading::Reconciled => -1.0,
                    AppendixReading::Printed => 1.0,
                };
                vec![
                    -2.0 * gh * e * (c_re * d2.im + sign * c_im * d2.re),
                    -2.0 * (1.0 - tau) * e * (c_re * g.re + c_im * g.im),
                    2.0 * gh * e * (c_re * g.im - c_im * g.re),
                    2.0 * gh * e * c_im * off,
                ]
            }
        })
    })
}

/// `(1 - e^{ix}) / delta` with `x = delta t`.
fn one_minus_phase_over(delta: f64, t: f64) -> Complex64 {
    let x = delta * t;
    if x.abs() < TRIG_SERIES_SWITCH {
        let x2 = x * x;
        Complex64::new(t * (x / 2.0 - x * x2 / 24.0), -t * (1.0 - x2 / 6.0))
    } else {
        let h = (0.5 * x).sin();
        Complex64::new(2.0 * h * h, -x.sin()) / delta
    }
}

fn dissimilar_terms(
    system: &TwoAtomSystem,
    t: f64,
    which: AtomId,
    reading: AppendixReading,
    split: bool,
) -> Result<Vec<ForceTerm>> {
    check_time(t)?;
    if system.is_identical() {
        return Err(Error::WrongTier(
            "atoms are not detuned; use force_full_identical".into(),
        ));
    }
    let fr = Frame::of(system);
    let omega_a = system.atom_a().omega0();
    let ga = system.atom_a().gamma() / omega_a;
    let gb = system.atom_b().gamma() / omega_a;
    let gs = ga + gb;
    let delta = system.detuning() / omega_a;
    let wb = 1.0 - delta;
    // reduced time, so that delta * tr = Delta_AB T
    let tr = omega_a * t;
    let x = delta * tr;
    let (sx, cx) = x.sin_cos();
    let phase = Complex64::new(cx, sx);
    let e_a = (-ga * tr).exp();
    let e_s = (-0.5 * gs * tr).exp();
    let r = fr.point.r;
    let q = match reading {
        AppendixReading::Reconciled => 4.0,
        AppendixReading::Printed => 2.0,
    };
    let unit = 8.0 * PI * PI * fr.force_scale;

    let labels: &[TermLabel] = if split {
        &[
            TermLabel::ResonantDecay,
            TermLabel::ResonantCos,
            TermLabel::ResonantSin,
            TermLabel::QuasiStationary,
            TermLabel::OffResonant,
        ]
    } else {
        // resonant total, quasi-stationary, off-resonant
        &[
            TermLabel::ResonantDecay,
            TermLabel::QuasiStationary,
            TermLabel::OffResonant,
        ]
    };

    let gm_a = magnetic_scalar(1.0, r);
    let gm_b = magnetic_scalar(wb, r);
    let p = gm_a.conj();

    collect(&fr, which, unit, labels, |mb| {
        // H(w) is the frequency-dependent amplitude of the resonant pair
        let (h1, hb, diff) = match which {
            AtomId::A => {
                let h1 = h_a(&fr, mb, 1.0);
                let hb = h_a(&fr, mb, wb);
                let diff = if delta.abs() < DIFFERENCE_SWITCH {
                    h_a_prime(&fr, mb, 0.5 * (1.0 + wb))
                } else {
                    (h1 - hb) / delta
                };
                (h1, hb, diff)
            }
            AtomId::B => {
                let h1 = p * h_b(&fr, mb, 1.0);
                let hb = p * h_b(&fr, mb, wb);
                let diff = if delta.abs() < DIFFERENCE_SWITCH {
                    p * h_b_prime(&fr, mb, 0.5 * (1.0 + wb))
                } else {
                    (h1 - hb) / delta
                };
                (h1, hb, diff)
            }
        };

        let quasi = -q * ga * e_a * h1.re / (1.0 + wb);

        let off = match which {
            AtomId::A => {
                let c = I * wb * gm_b;
                let i_ab = offresonant_integral(1.0, wb, r, fr.mu_a, mb, fr.point.rhat)?;
                wb * e_s
                    * (gs * (c.im * cx + c.re * sx) + 2.0 * delta * (c.im * sx - c.re * cx))
                    * i_ab
            }
            AtomId::B => {
                let c = I * gm_a;
                let i_ab = offresonant_integral(1.0, wb, r, fr.mu_a, mb, fr.point.rhat)?;
                e_s * (gs * (c.im * cx - c.re * sx) + 2.0 * delta * (c.im * sx + c.re * cx)) * i_ab
            }
        };

        if split {
            let decay = 2.0 * ga * e_a * h1.re / delta;
            let (cos_coef, sin_coef) = match reading {
                AppendixReading::Reconciled => (
                    -(e_s / delta) * (gs * hb.re + 2.0 * delta * hb.im),
                    (e_s / delta) * (gs * hb.im - 2.0 * delta * hb.re),
                ),
                AppendixReading::Printed => (
                    (e_s / delta) * (2.0 * delta - gs) * hb.re,
                    (e_s / delta) * (2.0 * delta + gs) * hb.im,
                ),
            };
            return Ok(vec![decay, cos_coef * cx, sin_coef * sx, quasi, off]);
        }

        let mismatch = (2.0 * ga * e_a - gs * e_s) * h1.re / delta;
        let combined = diff + hb * one_minus_phase_over(delta, tr);
        let singular = gs * e_s * combined.re;
        let regular = match reading {
            AppendixReading::Reconciled => -2.0 * e_s * (hb * phase).im,
            AppendixReading::Printed => 2.0 * e_s * (hb * phase.conj()).re,
        };
        Ok(vec![mismatch + singular + regular, quasi, off])
    })
}
