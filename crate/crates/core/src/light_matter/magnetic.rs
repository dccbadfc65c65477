use nalgebra::Vector3;

use crate::atom::AtomicData;
use crate::error::Result;
use crate::fiber::Position;

use super::trap::{Site, TrapConfig};

/// Offset field plus the light-induced field at the two trap sites, in G.
#[derive(Debug, Clone, PartialEq)]
pub struct MagneticEnvironment {
    pub offset_field: Vector3<f64>,
    pub fictitious_upper: Vector3<f64>,
    pub fictitious_lower: Vector3<f64>,
    pub upper_position: Option<Position>,
    pub lower_position: Option<Position>,
}

impl MagneticEnvironment {
    /// Offset along +y with given fictitious fields.
    pub fn new(offset: f64, upper: Vector3<f64>, lower: Vector3<f64>) -> Self {
        Self {
            offset_field: Vector3::new(0.0, offset, 0.0),
            fictitious_upper: upper,
            fictitious_lower: lower,
            upper_position: None,
            lower_position: None,
        }
    }

    /// Antisymmetric fictitious field ±b along the offset direction.
    pub fn symmetric(offset: f64, b: f64) -> Self {
        Self::new(offset, Vector3::new(0.0, b, 0.0), Vector3::new(0.0, -b, 0.0))
    }

    pub fn fictitious(&self, site: Site) -> Vector3<f64> {
        match site {
            Site::Upper => self.fictitious_upper,
            Site::Lower => self.fictitious_lower,
        }
    }

    pub fn total(&self, site: Site) -> Vector3<f64> {
        self.offset_field + self.fictitious(site)
    }

    pub fn magnitude(&self, site: Site) -> f64 {
        self.total(site).norm()
    }
}

/// Evaluate the fictitious fields of every beam at the two mF-averaged trap
/// minima.
pub fn site_fields(config: &TrapConfig, offset: f64) -> Result<MagneticEnvironment> {
    let upper = config.find_minimum(Site::Upper, None, offset)?;
    let lower = config.find_minimum(Site::Lower, None, offset)?;
    let mut env = MagneticEnvironment::new(offset, config.fictitious_field(upper)?, config.fictitious_field(lower)?);
    env.upper_position = Some(upper);
    env.lower_position = Some(lower);
    Ok(env)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ClockSplitting {
    /// ν_upper − ν_lower from Breit–Rabi at the two total fields, Hz.
    pub exact: f64,
    /// 2α₀ B_off (b_upper − b_lower) with b the components along B_off.
    pub approximate: f64,
}

pub fn clock_splitting(atom: &AtomicData, env: &MagneticEnvironment) -> ClockSplitting {
    let exact = atom.clock_frequency(env.magnitude(Site::Upper)) - atom.clock_frequency(env.magnitude(Site::Lower));
    let b_off = env.offset_field.norm();
    let along = |v: Vector3<f64>| {
        if b_off > 0.0 {
            v.dot(&env.offset_field) / b_off
        } else {
            0.0
        }
    };
    let diff = along(env.fictitious_upper) - along(env.fictitious_lower);
    ClockSplitting { exact, approximate: 2.0 * atom.clock_coefficient() * b_off * diff }
}

/// Difference of the |3, mF⟩ → |4, mF'⟩ frequency between the two sites, Hz.
pub fn mw_splitting(atom: &AtomicData, env: &MagneticEnvironment, lower_mf: i32, upper_mf: i32) -> Result<f64> {
    Ok(atom.mw_transition_frequency(lower_mf, upper_mf, env.magnitude(Site::Upper))?
        - atom.mw_transition_frequency(lower_mf, upper_mf, env.magnitude(Site::Lower))?)
}
