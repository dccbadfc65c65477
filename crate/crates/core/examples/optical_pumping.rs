//! Side-dependent optical pumping: the probe polarization seen by the atoms
//! above and below the fiber drives them to opposite stretched states.

use nalgebra::Vector3;
use nanofiber::atom::AtomicData;
use nanofiber::dynamics::{pump_evolution, pump_rates, pump_steady_state, pumping_time, PopulationVector};
use nanofiber::fiber::{Direction, FiberSpec, LightField, Position};
use nanofiber::light_matter::{spherical_components, Site};

fn main() -> nanofiber::Result<()> {
    let cs = AtomicData::cesium();
    let mode = FiberSpec::silica(250e-9)?.solve_he11(852e-9)?;
    let probe = LightField::running(mode, 4e-12, 0.0, Direction::Forward)?;
    for site in [Site::Upper, Site::Lower] {
        let e = probe.field_at(Position::new(480e-9, site.phi(), 0.0))?;
        let a = spherical_components(&e, &Vector3::y())?;
        let total: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        let fractions = a.map(|x| x.norm_sqr() / total);
        let rates = pump_rates(&cs, fractions, 0.1)?;
        let steady = pump_steady_state(&rates)?;
        let start = PopulationVector::uniform(4)?;
        let after = pump_evolution(&rates, &start, 20e-6)?;
        println!("{site:?}: σ+ {:.3}  π {:.3}  σ− {:.3}", fractions[0], fractions[1], fractions[2]);
        println!("  steady state  {:?}", steady.populations.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>());
        println!("  after 20 us   {:?}", after.populations.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>());
        println!("  1/e pumping time {:.2} us", pumping_time(&rates, &start)? * 1e6);
    }
    Ok(())
}
