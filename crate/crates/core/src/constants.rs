//! CODATA 2018 constants and the derived magneton frequencies.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Atomic unit of electric dipole moment `e·a₀`, C·m.
pub const E_A0: f64 = ELEMENTARY_CHARGE * BOHR_RADIUS;

/// μ_B / h in MHz per gauss.
pub const BOHR_MAGNETON_MHZ_PER_G: f64 = 1.399_624_5;
/// μ_N / h in MHz per gauss.
pub const NUCLEAR_MAGNETON_MHZ_PER_G: f64 = 7.622_59e-4;

/// Measured ⁸⁷Sr nuclear magnetic moment, in units of μ_N.
pub const SR87_NUCLEAR_MOMENT: f64 = -1.0924;
