//! Physical constants (CODATA 2018, SI).

/// The constants entering every force and Green-function prefactor.
///
/// Only the CODATA values are available; there is no way to build a
/// `Constants` with other numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Speed of light in vacuum (m/s).
    pub c: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Vacuum permittivity (C^2 N^-1 m^-2).
    pub eps0: f64,
    /// Elementary charge (C).
    pub e_charge: f64,
    /// Bohr radius (m).
    pub a0: f64,
    _private: (),
}

impl Constants {
    pub const fn codata() -> Self {
        Constants {
            c: 299_792_458.0,
            hbar: 1.054_571_817e-34,
            eps0: 8.854_187_812_8e-12,
            e_charge: 1.602_176_634e-19,
            a0: 5.291_772_109_03e-11,
            _private: (),
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::codata()
    }
}

pub const CODATA: Constants = Constants::codata();

/// Proton mass (kg).
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;

/// Electron mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
