//! Scalar ground-state polarizability between the D lines and its zero.

use nanofiber::atom::{AtomicData, TUNE_OUT_INTERVAL};
use nanofiber::constants::{BOHR_RADIUS, VACUUM_PERMITTIVITY};

fn main() -> nanofiber::Result<()> {
    let cs = AtomicData::cesium();
    let au = 4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * BOHR_RADIUS.powi(3);
    for nm in [783.0, 860.0, 870.0, 880.0, 885.0, 1064.0] {
        let a = cs.scalar_polarizability(nm * 1e-9)? / au;
        println!("{nm:7.1} nm  alpha = {a:10.1} a.u.  beta = {:+.3e} G/(V/m)^2", cs.fictitious_coefficient(nm * 1e-9)?);
    }
    let w = cs.tune_out(TUNE_OUT_INTERVAL)?;
    println!("tune-out at {:.3} nm", w * 1e9);
    Ok(())
}
