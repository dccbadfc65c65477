//! CODATA 2018 physical constants (SI). Atom- and material-specific values are
//! loaded from the bundled data file instead, see [`crate::atom::AtomicData`].

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Bohr magneton in J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Bohr magneton divided by Planck's constant, in Hz/G.
pub const BOHR_MAGNETON_HZ_PER_G: f64 = BOHR_MAGNETON / PLANCK * 1e-4;
pub const GAUSS_PER_TESLA: f64 = 1e4;
