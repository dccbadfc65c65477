//! Two-color trap with the experimental powers: site position and trap
//! frequencies, then the same for the stretched states with the tune-out
//! beam switched on.

use nanofiber::atom::{AtomicData, HyperfineState};
use nanofiber::light_matter::{Manipulation, Site, TrapConfig, TrapParameters};

fn main() -> nanofiber::Result<()> {
    let trap = TrapConfig::paper()?;
    let pos = trap.find_minimum(Site::Upper, None, 0.0)?;
    let [fr, fphi, fz] = trap.frequencies(pos, None, 0.0)?;
    println!("minimum {:.1} nm above the surface", (pos.r - trap.fiber.radius) * 1e9);
    println!("trap frequencies {:.1} / {:.1} / {:.1} kHz", fr / 1e3, fphi / 1e3, fz / 1e3);
    println!("depth {:.1} MHz·h", -trap.averaged_potential(pos)? / 1e6);

    let params = TrapParameters { manipulation: Some(Manipulation::tune_out(100e-6)), ..Default::default() };
    let shifted = TrapConfig::new(AtomicData::cesium(), &params)?;
    for mf in [-4, 4] {
        let state = HyperfineState::ground(4, mf)?;
        let p = shifted.find_minimum(Site::Upper, Some(state), 28.0)?;
        println!("|4,{mf:+}⟩ minimum at r − a = {:.2} nm", (p.r - trap.fiber.radius) * 1e9);
    }
    Ok(())
}
