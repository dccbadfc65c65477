//! Local polarization, light shifts, fictitious magnetic fields and the
//! two-color trap.

mod magnetic;
mod polarization;
mod report;
mod trap;

pub use magnetic::{clock_splitting, mw_splitting, site_fields, ClockSplitting, MagneticEnvironment};
pub use polarization::{ellipticity, spherical_components, spin_density};
pub use report::{fictitious_report, trap_report, FictitiousReport, SitePosition, TrapReport};
pub use trap::{Manipulation, Site, TrapConfig, TrapParameters, HESSIAN_STEP, MINIMUM_TOLERANCE};
