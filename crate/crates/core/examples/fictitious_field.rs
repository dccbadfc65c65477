//! Light-induced fictitious magnetic fields at the two trap sites for the
//! three schemes: a tune-out beam, a tilted blue polarization, and an
//! imbalanced red standing wave.

use nanofiber::atom::AtomicData;
use nanofiber::light_matter::{fictitious_report, Manipulation, TrapConfig, TrapParameters};

fn show(label: &str, params: TrapParameters, offset: f64) -> nanofiber::Result<()> {
    let trap = TrapConfig::new(AtomicData::cesium(), &params)?;
    let r = fictitious_report(&trap, offset)?;
    println!(
        "{label:<18} B_up = ({:+.4}, {:+.4}, {:+.4}) G  gradient {:6.1} T/m  clock {:+8.1} Hz  mF=-3 {:+9.1} Hz",
        r.bfict_upper_g[0],
        r.bfict_upper_g[1],
        r.bfict_upper_g[2],
        r.gradient_t_per_m,
        r.clock_splitting_hz.exact,
        r.mw_splitting_minus3_hz
    );
    Ok(())
}

fn main() -> nanofiber::Result<()> {
    let base = TrapParameters::default();
    show(
        "tune-out 100 uW",
        TrapParameters { manipulation: Some(Manipulation::tune_out(100e-6)), ..base.clone() },
        28.0,
    )?;
    for deg in [0.0f64, 5.0, 8.0] {
        show(&format!("blue tilt {deg} deg"), TrapParameters { blue_tilt: deg.to_radians(), ..base.clone() }, 3.0)?;
    }
    show("red imbalance 1.1", TrapParameters { red_imbalance: 1.1, ..base }, 3.0)?;
    Ok(())
}
