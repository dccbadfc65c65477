use nalgebra::Vector3;
use serde::Serialize;

use crate::constants::GAUSS_PER_TESLA;
use crate::error::Result;
use crate::fiber::Position;

use super::magnetic::{clock_splitting, mw_splitting, site_fields, ClockSplitting};
use super::trap::TrapConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SitePosition {
    pub r_m: f64,
    pub phi_rad: f64,
    pub z_m: f64,
    pub height_above_surface_m: f64,
}

/// Summary of the upper trap site, serialized as the trap report JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapReport {
    pub minimum_position: SitePosition,
    #[serde(rename = "trap_frequencies_Hz")]
    pub trap_frequencies_hz: [f64; 3],
    #[serde(rename = "Bfict_upper_G")]
    pub bfict_upper_g: [f64; 3],
    #[serde(rename = "Bfict_lower_G")]
    pub bfict_lower_g: [f64; 3],
    #[serde(rename = "clock_splitting_Hz")]
    pub clock_splitting_hz: f64,
}

pub fn trap_report(config: &TrapConfig, offset_field: f64) -> Result<TrapReport> {
    let env = site_fields(config, offset_field)?;
    let pos = env.upper_position.expect("site_fields sets positions");
    let freqs = config.frequencies(pos, None, offset_field)?;
    let arr = |v: Vector3<f64>| [v.x, v.y, v.z];
    Ok(TrapReport {
        minimum_position: site_position(config, pos),
        trap_frequencies_hz: freqs,
        bfict_upper_g: arr(env.fictitious_upper),
        bfict_lower_g: arr(env.fictitious_lower),
        clock_splitting_hz: clock_splitting(&config.atom, &env).exact,
    })
}

/// Light-induced fields at both mF-averaged sites and the splittings they
/// cause, serialized as the `bfict` JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FictitiousReport {
    #[serde(rename = "offset_field_G")]
    pub offset_field_g: f64,
    pub upper_position: SitePosition,
    pub lower_position: SitePosition,
    #[serde(rename = "Bfict_upper_G")]
    pub bfict_upper_g: [f64; 3],
    #[serde(rename = "Bfict_lower_G")]
    pub bfict_lower_g: [f64; 3],
    /// |ΔB_fict| divided by the site separation.
    #[serde(rename = "gradient_T_per_m")]
    pub gradient_t_per_m: f64,
    #[serde(rename = "clock_splitting_Hz")]
    pub clock_splitting_hz: ClockSplitting,
    /// |3,−3⟩ → |4,−3⟩, upper minus lower site.
    #[serde(rename = "mw_splitting_minus3_Hz")]
    pub mw_splitting_minus3_hz: f64,
}

fn site_position(config: &TrapConfig, pos: Position) -> SitePosition {
    SitePosition { r_m: pos.r, phi_rad: pos.phi, z_m: pos.z, height_above_surface_m: pos.r - config.fiber.radius }
}

pub fn fictitious_report(config: &TrapConfig, offset_field: f64) -> Result<FictitiousReport> {
    let env = site_fields(config, offset_field)?;
    let (up, low) = (env.upper_position.expect("set by site_fields"), env.lower_position.expect("set by site_fields"));
    let separation = (Vector3::from(up.cartesian()) - Vector3::from(low.cartesian())).norm();
    let diff = (env.fictitious_upper - env.fictitious_lower).norm();
    let arr = |v: Vector3<f64>| [v.x, v.y, v.z];
    Ok(FictitiousReport {
        offset_field_g: offset_field,
        upper_position: site_position(config, up),
        lower_position: site_position(config, low),
        bfict_upper_g: arr(env.fictitious_upper),
        bfict_lower_g: arr(env.fictitious_lower),
        gradient_t_per_m: diff / GAUSS_PER_TESLA / separation,
        clock_splitting_hz: clock_splitting(&config.atom, &env),
        mw_splitting_minus3_hz: mw_splitting(&config.atom, &env, -3, -3)?,
    })
}
