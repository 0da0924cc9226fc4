//! Linewidth, dipole moment, field, intensity and power conversions.
//!
//! The spontaneous decay rate and reduced dipole matrix element are related by
//!
//! ```text
//! Γ = ω₀³ |d|² / (m π ε₀ ℏ c³)
//! ```
//!
//! where the multiplicity factor `m` depends on the direction in which the
//! reduced element is taken: 9 for an `¹S₀ ← ¹P₁`-style element summed over
//! the upper multiplet, 1 for the single-channel form.

use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::constants::{EPSILON_0, E_A0, HBAR, SPEED_OF_LIGHT};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Multiplicity {
    Nine,
    One,
}

impl Multiplicity {
    pub fn factor(self) -> f64 {
        match self {
            Multiplicity::Nine => 9.0,
            Multiplicity::One => 1.0,
        }
    }
}

/// Optical transition data.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransitionSpec {
    /// rad/s.
    pub omega0: f64,
    /// s⁻¹.
    pub linewidth: f64,
    pub multiplicity: Multiplicity,
}

impl TransitionSpec {
    pub fn from_wavelength_nm(lambda_nm: f64, linewidth: f64, multiplicity: Multiplicity) -> Result<Self> {
        Ok(TransitionSpec { omega0: omega_from_wavelength_nm(lambda_nm)?, linewidth, multiplicity })
    }

    pub fn from_frequency_hz(nu_hz: f64, linewidth: f64, multiplicity: Multiplicity) -> Result<Self> {
        positive("frequency", nu_hz)?;
        Ok(TransitionSpec { omega0: 2.0 * PI * nu_hz, linewidth, multiplicity })
    }

    /// Reduced dipole matrix element, e·a₀.
    pub fn reduced_dipole(&self) -> Result<f64> {
        rdme_from_linewidth(self.linewidth, self.omega0, self.multiplicity)
    }
}

/// Laser spot at the atom.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BeamSpec {
    pub spot_radius_um: f64,
}

impl BeamSpec {
    pub fn new(spot_radius_um: f64) -> Result<Self> {
        positive("spot_radius", spot_radius_um)?;
        Ok(BeamSpec { spot_radius_um })
    }

    /// m².
    pub fn area(&self) -> f64 {
        let r = self.spot_radius_um * 1e-6;
        PI * r * r
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason: "must be positive" })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason: "must be non-negative" })
    }
}

/// Angular frequency (rad/s) of light with vacuum wavelength `lambda_nm`.
pub fn omega_from_wavelength_nm(lambda_nm: f64) -> Result<f64> {
    positive("wavelength", lambda_nm)?;
    Ok(2.0 * PI * SPEED_OF_LIGHT / (lambda_nm * 1e-9))
}

/// Reduced dipole matrix element in e·a₀ from a linewidth in s⁻¹.
pub fn rdme_from_linewidth(gamma: f64, omega0: f64, mult: Multiplicity) -> Result<f64> {
    non_negative("linewidth", gamma)?;
    positive("omega0", omega0)?;
    let c3 = SPEED_OF_LIGHT.powi(3);
    let d2 = gamma * mult.factor() * PI * EPSILON_0 * HBAR * c3 / omega0.powi(3);
    Ok(d2.sqrt() / E_A0)
}

/// Linewidth in s⁻¹ from a reduced dipole matrix element in e·a₀.
pub fn linewidth_from_rdme(d: f64, omega0: f64, mult: Multiplicity) -> Result<f64> {
    non_negative("dipole", d.abs())?;
    positive("omega0", omega0)?;
    let d_si = d * E_A0;
    Ok(omega0.powi(3) * d_si * d_si / (mult.factor() * PI * EPSILON_0 * HBAR * SPEED_OF_LIGHT.powi(3)))
}

/// Electric field amplitude (V/m) giving Rabi frequency `2π × rabi_mhz` MHz
/// on a transition with dipole `d` (e·a₀).
pub fn field_for_rabi(rabi_mhz: f64, d: f64) -> Result<f64> {
    non_negative("rabi", rabi_mhz)?;
    positive("dipole", d)?;
    Ok(2.0 * PI * rabi_mhz * 1e6 * HBAR / (d * E_A0))
}

/// Intensity in W/m² of a plane wave with field amplitude `e_field` (V/m).
pub fn intensity_from_field(e_field: f64) -> Result<f64> {
    non_negative("field", e_field.abs())?;
    Ok(0.5 * EPSILON_0 * SPEED_OF_LIGHT * e_field * e_field)
}

/// Power in W delivered by intensity `intensity` (W/m²) over the beam spot.
pub fn power_from_intensity(intensity: f64, beam: BeamSpec) -> Result<f64> {
    non_negative("intensity", intensity)?;
    Ok(intensity * beam.area())
}

/// The whole chain from a Rabi frequency and dipole to laser power.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LaserRequirement {
    pub rabi_mhz: f64,
    pub dipole_ea0: f64,
    pub field_v_per_m: f64,
    pub intensity_w_per_cm2: f64,
    pub power_w: f64,
}

pub fn laser_requirement(rabi_mhz: f64, dipole_ea0: f64, beam: BeamSpec) -> Result<LaserRequirement> {
    let field = field_for_rabi(rabi_mhz, dipole_ea0)?;
    let intensity = intensity_from_field(field)?;
    Ok(LaserRequirement {
        rabi_mhz,
        dipole_ea0,
        field_v_per_m: field,
        intensity_w_per_cm2: intensity * 1e-4,
        power_w: power_from_intensity(intensity, beam)?,
    })
}
