//! Time integration of the leading forces.
//!
//! The leading force has the fixed time profile
//! `F(t) = F0 (1 - Gamma t) e^{-Gamma t}`, so everything is integrated in
//! `tau = Gamma t`. Separations are held fixed: the resulting displacements
//! are femtometres against separations of tens of nanometres.

use rayon::prelude::*;

use crate::algebra::Vector3;
use crate::error::{Error, Result};
use crate::force::{force_closed_a, force_closed_b, leading_envelope, AtomId};
use crate::model::{hydrogen_preset, TwoAtomSystem};
use crate::quadrature::{adaptive_integrate, integrate_semi_infinite, QuadratureOptions};

const REL_TOL: f64 = 1e-12;

/// Split point of the semi-infinite time integrals, in units of `1/Gamma`.
const TAIL_SPLIT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DisplacementConvention {
    /// Integrate up to one lifetime, `T = 1/Gamma`.
    #[default]
    TruncateAtLifetime,
    /// Integrate over the whole decay, `T -> infinity`.
    FullDecay,
}

impl DisplacementConvention {
    /// `Gamma T` at which the convention stops integrating.
    pub fn tau(self) -> f64 {
        match self {
            DisplacementConvention::TruncateAtLifetime => 1.0,
            DisplacementConvention::FullDecay => f64::INFINITY,
        }
    }

    /// `Gamma^2 m S / F0` for the leading profile: `1 - 2/e` or `1`.
    pub fn factor(self) -> f64 {
        match self {
            DisplacementConvention::TruncateAtLifetime => 1.0 - 2.0 * (-1f64).exp(),
            DisplacementConvention::FullDecay => 1.0,
        }
    }
}

/// Hydrogen displacement curves over a grid of `v = k0 R`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementCurve {
    pub v_grid: Vec<f64>,
    pub s_a: Vec<Vector3>,
    pub s_b: Vec<Vector3>,
    /// Transverse displacement of A projected on `-x`.
    pub s_a_perp: Vec<f64>,
    /// Transverse displacement of B projected on `-x`.
    pub s_b_perp: Vec<f64>,
    pub shape_a: Vec<f64>,
    pub shape_b: Vec<f64>,
    /// `s_a_perp = coefficient_a * shape_a` (m).
    pub coefficient_a: f64,
    /// `s_b_perp = coefficient_b * shape_b` (m).
    pub coefficient_b: f64,
    pub convention: DisplacementConvention,
}

/// `[(2v^2 - 1) cos 2v - (2v - v^3) sin 2v] / v^5`.
pub fn shape_a(v: f64) -> f64 {
    let (s, c) = (2.0 * v).sin_cos();
    ((2.0 * v * v - 1.0) * c - (2.0 * v - v * v * v) * s) / v.powi(5)
}

/// `-(1 + v^2) / v^5`.
pub fn shape_b(v: f64) -> f64 {
    -(1.0 + v * v) / v.powi(5)
}

fn leading_amplitude(system: &TwoAtomSystem, which: AtomId) -> Result<Vector3> {
    match which {
        AtomId::A => force_closed_a(system, 0.0),
        AtomId::B => force_closed_b(system, 0.0),
    }
}

fn check_horizon(t: f64) -> Result<()> {
    if t >= 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::invalid(format!("time must be >= 0, got {t}")))
    }
}

fn integral_to<F: Fn(f64) -> f64>(f: F, tau: f64) -> Result<f64> {
    if tau == 0.0 {
        Ok(0.0)
    } else if tau.is_infinite() {
        Ok(integrate_semi_infinite(f, TAIL_SPLIT, QuadratureOptions::with_rel_tol(REL_TOL))?.value)
    } else {
        Ok(adaptive_integrate(f, 0.0, tau, REL_TOL)?.value)
    }
}

/// Change of the longitudinal field momentum paired with atom `which`,
/// `-int_0^T F(t) dt`, for the leading force. `t` may be infinite.
pub fn longitudinal_momentum(system: &TwoAtomSystem, t: f64, which: AtomId) -> Result<Vector3> {
    check_horizon(t)?;
    let f0 = leading_amplitude(system, which)?;
    let gamma = system.atom_a().gamma();
    let tau = gamma * t;
    let integral = integral_to(leading_envelope, tau)?;
    Ok(f0.scale(-integral / gamma))
}

/// Displacement `S(T) = (1/m) int_0^T dt int_0^t F` of atom `which` under
/// the leading force, starting from rest. `t_final` may be infinite.
pub fn displacement(system: &TwoAtomSystem, t_final: f64, which: AtomId) -> Result<Vector3> {
    let f0 = leading_amplitude(system, which)?;
    let atom = match which {
        AtomId::A => system.atom_a(),
        AtomId::B => system.atom_b(),
    };
    displacement_for_profile(
        f0,
        atom.mass(),
        system.atom_a().gamma(),
        leading_envelope,
        t_final,
    )
}

/// Displacement integrated according to `convention`.
pub fn displacement_with_convention(
    system: &TwoAtomSystem,
    which: AtomId,
    convention: DisplacementConvention,
) -> Result<Vector3> {
    let t = convention.tau() / system.atom_a().gamma();
    displacement(system, t, which)
}

/// Displacement under a force `amplitude * envelope(Gamma t)`.
///
/// Uses the single-integral form `(1/m) int_0^T (T - t) F(t) dt`. For an
/// infinite horizon the envelope must integrate to zero (no residual
/// velocity); the limit is then `-(1/m) int_0^inf t F(t) dt`.
pub fn displacement_for_profile<E: Fn(f64) -> f64>(
    amplitude: Vector3,
    mass: f64,
    gamma: f64,
    envelope: E,
    t_final: f64,
) -> Result<Vector3> {
    check_horizon(t_final)?;
    if !(mass > 0.0 && mass.is_finite() && gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid("mass and rate must be positive"));
    }
    let tau = gamma * t_final;
    let scale = 1.0 / (mass * gamma * gamma);
    let reduced = if tau.is_infinite() {
        let opts = QuadratureOptions::with_rel_tol(REL_TOL);
        let net = integrate_semi_infinite(&envelope, TAIL_SPLIT, opts)?.value;
        let size = integrate_semi_infinite(|s| envelope(s).abs(), TAIL_SPLIT, opts)?.value;
        if net.abs() > 1e-9 * size {
            return Err(Error::invalid(
                "force profile leaves a residual velocity; displacement grows without bound",
            ));
        }
        -integral_to(|s| s * envelope(s), tau)?
    } else {
        integral_to(|s| (tau - s) * envelope(s), tau)?
    };
    Ok(amplitude.scale(reduced * scale))
}

/// Displacement curves of the Hydrogen preset over `v_grid`, computed in
/// parallel. `v_grid` must be strictly increasing within `[1, 100]`.
pub fn hydrogen_displacement_curve(
    v_grid: &[f64],
    convention: DisplacementConvention,
) -> Result<DisplacementCurve> {
    check_grid(v_grid)?;
    let reference = hydrogen_preset(1e-7)?;
    let k0 = reference.k0();
    let rows: Vec<(Vector3, Vector3)> = v_grid
        .par_iter()
        .map(|&v| {
            let sys = hydrogen_preset(v / k0)?;
            Ok((
                displacement_with_convention(&sys, AtomId::A, convention)?,
                displacement_with_convention(&sys, AtomId::B, convention)?,
            ))
        })
        .collect::<Result<_>>()?;

    let gamma = reference.atom_a().gamma();
    let k = crate::model::force_scale(&reference) * convention.factor()
        / (reference.atom_a().mass() * gamma * gamma);
    Ok(DisplacementCurve {
        v_grid: v_grid.to_vec(),
        s_a_perp: rows.iter().map(|r| -r.0.x).collect(),
        s_b_perp: rows.iter().map(|r| -r.1.x).collect(),
        s_a: rows.iter().map(|r| r.0).collect(),
        s_b: rows.iter().map(|r| r.1).collect(),
        shape_a: v_grid.iter().map(|&v| shape_a(v)).collect(),
        shape_b: v_grid.iter().map(|&v| shape_b(v)).collect(),
        coefficient_a: 0.5 * k,
        coefficient_b: k,
        convention,
    })
}

/// Validates a grid of `v` values for the Hydrogen curves.
pub fn check_grid(v_grid: &[f64]) -> Result<()> {
    if v_grid.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    if let Some(v) = v_grid.iter().find(|v| !(1.0..=100.0).contains(*v)) {
        return Err(Error::invalid(format!("grid value {v} outside [1, 100]")));
    }
    if v_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("grid must be strictly increasing"));
    }
    Ok(())
}

const THRESHOLD_BRACKET: (f64, f64) = (1.0, 5.0);
const THRESHOLD_CELLS: usize = 400;
const THRESHOLD_TOL: f64 = 1e-10;

/// Smallest separation above `1/k0` where the transverse forces on the two
/// atoms stop pointing the same way.
///
/// The product of the transverse leading forces is scanned over
/// `k0 R in [1, 5]` and the first sign change is bisected to `1e-10` in
/// `k0 R`. Returns the separation in metres.
pub fn same_direction_threshold(system: &TwoAtomSystem) -> Result<f64> {
    let k0 = system.k0();
    let rhat = system.rhat();
    let product = |v: f64| -> Result<f64> {
        let sys = system.with_separation(rhat.scale(v / k0))?;
        let a = force_closed_a(&sys, 0.0)?;
        let b = force_closed_b(&sys, 0.0)?;
        let a_perp = a - rhat.scale(a.dot(rhat));
        let b_perp = b - rhat.scale(b.dot(rhat));
        Ok(a_perp.dot(b_perp))
    };
    let (lo, hi) = THRESHOLD_BRACKET;
    let step = (hi - lo) / THRESHOLD_CELLS as f64;
    // last grid point with a nonzero product
    let mut a = lo;
    let mut fa = product(a)?;
    for i in 1..=THRESHOLD_CELLS {
        let b = lo + step * i as f64;
        let fb = product(b)?;
        if fb == 0.0 {
            continue;
        }
        if fa != 0.0 && fa.signum() != fb.signum() {
            let (mut x0, mut x1) = (a, b);
            while x1 - x0 > THRESHOLD_TOL {
                let m = 0.5 * (x0 + x1);
                let fm = product(m)?;
                if fm == 0.0 {
                    return Ok(m / k0);
                }
                if fm.signum() == fa.signum() {
                    x0 = m;
                } else {
                    x1 = m;
                }
            }
            return Ok(0.5 * (x0 + x1) / k0);
        }
        a = b;
        fa = fb;
    }
    Err(Error::NotFound(format!(
        "transverse forces keep their relative sign for k0 R in [{lo}, {hi}]"
    )))
}
