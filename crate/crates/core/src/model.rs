//! Atoms, the two-atom system and its dimensionless groups.

use std::f64::consts::PI;

use crate::algebra::Vector3;
use crate::constants::{Constants, CODATA, ELECTRON_MASS, PROTON_MASS};
use crate::error::{Error, Result};

/// Lyman-alpha wavelength used for the Hydrogen preset (m).
pub const HYDROGEN_WAVELENGTH: f64 = 121.6e-9;

/// 2p lifetime used for the Hydrogen preset (s).
pub const HYDROGEN_LIFETIME: f64 = 1.6e-9;

/// `|<1s| z |2p0>| / a0 = 128 sqrt(2) / 243`.
pub fn hydrogen_dipole_ratio() -> f64 {
    128.0 * 2f64.sqrt() / 243.0
}

/// Magnitude of the Hydrogen 1s-2p transition dipole (C m).
pub fn hydrogen_dipole(k: &Constants) -> f64 {
    hydrogen_dipole_ratio() * k.e_charge * k.a0
}

/// Weisskopf-Wigner decay rate of a two-level transition.
pub fn weisskopf_wigner_rate(omega0: f64, dipole: f64, k: &Constants) -> f64 {
    omega0.powi(3) * dipole * dipole / (3.0 * PI * k.eps0 * k.hbar * k.c.powi(3))
}

/// A two-level atom whose excited level may be degenerate.
///
/// `dipoles` holds one transition dipole per excited sublevel. For the
/// initially excited atom only the first entry (the prepared state) is used.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    omega0: f64,
    gamma: f64,
    mass: f64,
    dipoles: Vec<Vector3>,
}

impl Atom {
    pub fn new(omega0: f64, gamma: f64, mass: f64, dipoles: Vec<Vector3>) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::invalid(format!(
                "omega0 must be positive, got {omega0}"
            )));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if gamma >= omega0 {
            return Err(Error::invalid(format!(
                "gamma ({gamma}) must be smaller than omega0 ({omega0})"
            )));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid(format!("mass must be positive, got {mass}")));
        }
        if dipoles.is_empty() {
            return Err(Error::invalid(
                "an atom needs at least one transition dipole",
            ));
        }
        if let Some(d) = dipoles.iter().find(|d| !d.is_finite()) {
            return Err(Error::invalid(format!("non-finite dipole {d:?}")));
        }
        Ok(Atom {
            omega0,
            gamma,
            mass,
            dipoles,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dipoles(&self) -> &[Vector3] {
        &self.dipoles
    }

    /// Dipole of the prepared (initially excited) state.
    pub fn primary_dipole(&self) -> Vector3 {
        self.dipoles[0]
    }

    pub fn with_omega0(&self, omega0: f64) -> Result<Self> {
        Atom::new(omega0, self.gamma, self.mass, self.dipoles.clone())
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Atom::new(self.omega0, gamma, self.mass, self.dipoles.clone())
    }

    pub fn with_dipoles(&self, dipoles: Vec<Vector3>) -> Result<Self> {
        Atom::new(self.omega0, self.gamma, self.mass, dipoles)
    }
}

/// Atom A (initially excited) and atom B (ground state, degenerate excited
/// manifold) separated by `R = R_A - R_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAtomSystem {
    atom_a: Atom,
    atom_b: Atom,
    separation: Vector3,
}

impl TwoAtomSystem {
    pub fn new(atom_a: Atom, atom_b: Atom, separation: Vector3) -> Result<Self> {
        if !separation.is_finite() {
            return Err(Error::invalid("non-finite separation"));
        }
        if separation.norm() == 0.0 {
            return Err(Error::Singular);
        }
        Ok(TwoAtomSystem {
            atom_a,
            atom_b,
            separation,
        })
    }

    pub fn atom_a(&self) -> &Atom {
        &self.atom_a
    }

    pub fn atom_b(&self) -> &Atom {
        &self.atom_b
    }

    pub fn separation(&self) -> Vector3 {
        self.separation
    }

    pub fn distance(&self) -> f64 {
        self.separation.norm()
    }

    pub fn rhat(&self) -> Vector3 {
        self.separation.scale(1.0 / self.distance())
    }

    /// `Delta_AB = omega_A - omega_B` (rad/s).
    pub fn detuning(&self) -> f64 {
        self.atom_a.omega0 - self.atom_b.omega0
    }

    pub fn is_identical(&self) -> bool {
        self.detuning() == 0.0
    }

    /// Resonant wavenumber of atom A, `k0 = omega_A / c`.
    pub fn k0(&self) -> f64 {
        self.atom_a.omega0 / CODATA.c
    }

    /// `v = k0 R`.
    pub fn v(&self) -> f64 {
        self.k0() * self.distance()
    }

    /// Whether the separation lies in the perturbative regime `k0 R >= 1`.
    pub fn is_perturbative(&self) -> bool {
        self.v() >= 1.0
    }

    /// Same atoms, new separation vector.
    pub fn with_separation(&self, separation: Vector3) -> Result<Self> {
        TwoAtomSystem::new(self.atom_a.clone(), self.atom_b.clone(), separation)
    }

    /// Same geometry, atom B detuned so that `omega_A - omega_B = detuning`.
    pub fn with_detuning(&self, detuning: f64) -> Result<Self> {
        let b = self.atom_b.with_omega0(self.atom_a.omega0 - detuning)?;
        TwoAtomSystem::new(self.atom_a.clone(), b, self.separation)
    }
}

/// Split a dipole into its component along `rhat` and the transverse part
/// `alpha . mu`.
pub fn decompose_dipole(mu: Vector3, rhat: Vector3) -> Result<(f64, Vector3)> {
    if !((rhat.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::invalid(format!(
            "axis must be a unit vector, |rhat| = {}",
            rhat.norm()
        )));
    }
    let par = mu.dot(rhat);
    Ok((par, mu - rhat.scale(par)))
}

/// Two Hydrogen atoms a distance `r` apart along z, atom A prepared in
/// `(2p_x + 2p_z)/sqrt 2` and atom B carrying the three 2p sublevels.
pub fn hydrogen_preset(r: f64) -> Result<TwoAtomSystem> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!(
            "separation must be positive, got {r}"
        )));
    }
    let k = CODATA;
    let omega0 = 2.0 * PI * k.c / HYDROGEN_WAVELENGTH;
    let gamma = 1.0 / HYDROGEN_LIFETIME;
    let mass = PROTON_MASS + ELECTRON_MASS;
    let mu = hydrogen_dipole(&k);
    let s = mu / 2f64.sqrt();
    let a = Atom::new(omega0, gamma, mass, vec![Vector3::new(s, 0.0, s)])?;
    let b = Atom::new(
        omega0,
        gamma,
        mass,
        vec![Vector3::X * mu, Vector3::Y * mu, Vector3::Z * mu],
    )?;
    TwoAtomSystem::new(a, b, Vector3::Z * r)
}

/// `k0^6 mu^4 / (8 pi^2 eps0^2 hbar c)`, with `mu` the magnitude of atom A's
/// prepared dipole.
pub fn force_scale(system: &TwoAtomSystem) -> f64 {
    let k = CODATA;
    let k0 = system.k0();
    let mu = system.atom_a().primary_dipole().norm();
    k0.powi(6) * mu.powi(4) / (8.0 * PI * PI * k.eps0 * k.eps0 * k.hbar * k.c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessGroups {
    /// `k0 R`
    pub v: f64,
    /// `Gamma_0 T`
    pub tau: f64,
    /// Force unit (N).
    pub force_scale: f64,
    /// `Delta_AB / Gamma_0`
    pub detuning_ratio: f64,
}

pub fn dimensionless(system: &TwoAtomSystem, t: f64) -> Result<DimensionlessGroups> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!(
            "observation time must be >= 0, got {t}"
        )));
    }
    let gamma = system.atom_a().gamma();
    Ok(DimensionlessGroups {
        v: system.v(),
        tau: gamma * t,
        force_scale: force_scale(system),
        detuning_ratio: system.detuning() / gamma,
    })
}

/// Reference scales for converting between SI and reduced quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub k0: f64,
    pub gamma0: f64,
    pub force_scale: f64,
}

impl Scaling {
    pub fn of(system: &TwoAtomSystem) -> Self {
        Scaling {
            k0: system.k0(),
            gamma0: system.atom_a().gamma(),
            force_scale: force_scale(system),
        }
    }

    pub fn length_to_v(&self, r: f64) -> f64 {
        r * self.k0
    }

    pub fn v_to_length(&self, v: f64) -> f64 {
        v / self.k0
    }

    pub fn time_to_tau(&self, t: f64) -> f64 {
        t * self.gamma0
    }

    pub fn tau_to_time(&self, tau: f64) -> f64 {
        tau / self.gamma0
    }

    pub fn force_to_reduced(&self, f: f64) -> f64 {
        f / self.force_scale
    }

    pub fn reduced_to_force(&self, f: f64) -> f64 {
        f * self.force_scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decompose_longitudinal_and_transverse() {
        let mu = 2.5;
        let (p, t) = decompose_dipole(Vector3::Z * mu, Vector3::Z).unwrap();
        assert_eq!(p, mu);
        assert_eq!(t, Vector3::ZERO);
        let (p, t) = decompose_dipole(Vector3::X * mu, Vector3::Z).unwrap();
        assert_eq!(p, 0.0);
        assert_eq!(t, Vector3::X * mu);
    }

    #[test]
    fn decompose_hydrogen_state() {
        let s = 1.0 / 2f64.sqrt();
        let (p, t) = decompose_dipole(Vector3::new(s, 0.0, s), Vector3::Z).unwrap();
        assert!((p - s).abs() < 1e-16);
        assert!((t - Vector3::new(s, 0.0, 0.0)).max_abs() < 1e-16);
    }

    #[test]
    fn decompose_rejects_non_unit_axis() {
        assert!(matches!(
            decompose_dipole(Vector3::X, Vector3::Z * 1.001),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn atom_invariants() {
        let d = vec![Vector3::X];
        assert!(Atom::new(1.0, 0.1, 1.0, d.clone()).is_ok());
        assert!(Atom::new(-1.0, 0.1, 1.0, d.clone()).is_err());
        assert!(Atom::new(1.0, 0.0, 1.0, d.clone()).is_err());
        assert!(Atom::new(1.0, 2.0, 1.0, d.clone()).is_err());
        assert!(Atom::new(1.0, 0.1, 0.0, d).is_err());
        assert!(Atom::new(1.0, 0.1, 1.0, vec![]).is_err());
    }

    #[test]
    fn zero_separation_is_singular() {
        let sys = hydrogen_preset(1e-7).unwrap();
        assert!(matches!(
            sys.with_separation(Vector3::ZERO),
            Err(Error::Singular)
        ));
        assert!(hydrogen_preset(0.0).is_err());
        assert!(hydrogen_preset(-1.0).is_err());
    }

    #[test]
    fn hydrogen_frequency_and_rate() {
        let sys = hydrogen_preset(1e-7).unwrap();
        let a = sys.atom_a();
        // 2 pi c / 121.6 nm
        assert!((a.omega0() / 1.549e16 - 1.0).abs() < 1e-3);
        assert_eq!(a.gamma(), 6.25e8);
        let mu = hydrogen_dipole(&CODATA);
        assert!((mu / 6.3e-30 - 1.0).abs() < 0.01);
        let ww = weisskopf_wigner_rate(a.omega0(), mu, &CODATA);
        assert!((ww / a.gamma() - 1.0).abs() < 0.05, "WW rate {ww}");
        assert!(sys.is_identical());
        assert_eq!(sys.atom_b().dipoles().len(), 3);
    }

    #[test]
    fn groups_for_hydrogen() {
        let sys = hydrogen_preset(HYDROGEN_WAVELENGTH / (2.0 * PI)).unwrap();
        let g = dimensionless(&sys, HYDROGEN_LIFETIME).unwrap();
        assert!((g.v - 1.0).abs() < 1e-14);
        assert!((g.tau - 1.0).abs() < 1e-14);
        assert_eq!(g.detuning_ratio, 0.0);
        // 1.55e-25 N from an independent evaluation of k^6 mu^4/(8 pi^2 eps0^2 hbar c)
        assert!(
            (g.force_scale / 1.5497e-25 - 1.0).abs() < 2e-3,
            "{}",
            g.force_scale
        );
        assert!(dimensionless(&sys, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn decomposition_is_orthogonal(
            mx in -10.0..10.0f64, my in -10.0..10.0f64, mz in -10.0..10.0f64,
            th in 0.0..PI, ph in 0.0..(2.0 * PI),
        ) {
            let mu = Vector3::new(mx, my, mz);
            let rhat = Vector3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
            let (p, t) = decompose_dipole(mu, rhat).unwrap();
            let n2 = mu.norm_sqr().max(1e-300);
            prop_assert!((rhat.scale(p).dot(t)).abs() <= 1e-14 * n2);
            prop_assert!((p * p + t.norm_sqr() - mu.norm_sqr()).abs() <= 1e-14 * n2);
            prop_assert!((rhat.scale(p) + t - mu).max_abs() <= 1e-14 * n2.sqrt());
        }

        #[test]
        fn scaling_round_trips(x in 1e-12..1e3f64) {
            let s = Scaling::of(&hydrogen_preset(5e-8).unwrap());
            prop_assert!((s.v_to_length(s.length_to_v(x)) / x - 1.0).abs() <= 1e-14);
            prop_assert!((s.tau_to_time(s.time_to_tau(x)) / x - 1.0).abs() <= 1e-14);
            prop_assert!((s.reduced_to_force(s.force_to_reduced(x)) / x - 1.0).abs() <= 1e-14);
        }
    }
}
