//! CODATA 2018 physical constants in SI units.
//!
//! Every golden value in the test suite is regenerated from this table, so
//! changing an entry here changes them all. The table version is exposed
//! for run metadata.

pub const VERSION: &str = "codata2018";

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant (J s), exact.
pub const H: f64 = 6.626_070_15e-34;
/// Elementary charge (C), exact.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Bohr magneton (J/T).
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Proton magnetic moment (J/T).
pub const MU_P: f64 = 1.410_606_797_36e-26;
/// Vacuum permeability (N/A^2).
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light (m/s), exact.
pub const C_LIGHT: f64 = 299_792_458.0;
/// Electron mass (kg).
pub const M_E: f64 = 9.109_383_701_5e-31;
/// Atomic mass constant (kg).
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Free-electron g-factor magnitude.
pub const G_ELECTRON: f64 = 2.002_319_304_362_56;

/// Atomic masses (kg).
pub const M_BE9: f64 = 9.012_183_1 * AMU;
pub const M_RB87: f64 = 86.909_180_531 * AMU;
pub const M_CS133: f64 = 132.905_451_961 * AMU;
pub const M_H1: f64 = 1.007_825_032_23 * AMU;

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// Converts an ordinary frequency in Hz to an angular frequency in rad/s.
pub fn hz_to_angular(nu: f64) -> f64 {
    TWO_PI * nu
}

/// Converts an angular frequency in rad/s to an ordinary frequency in Hz.
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / TWO_PI
}

/// Energy (J) of a quantum at ordinary frequency `nu` (Hz).
pub fn energy_from_hz(nu: f64) -> f64 {
    H * nu
}

/// Bose-Einstein occupation of a mode at angular frequency `omega` and temperature `t`.
pub fn bose_occupation(omega: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * t);
    1.0 / x.exp_m1()
}

/// Looks up a constants table by name. Only one table ships today.
pub fn check_version(name: &str) -> bool {
    name == VERSION
}
