//! Local ellipticity of quasi-linearly polarized 852 nm light around the
//! fiber. The spin points along ±y above and below the fiber.

use std::f64::consts::PI;

use nanofiber::fiber::{Direction, FiberSpec, LightField, Position};
use nanofiber::light_matter::ellipticity;

fn main() -> nanofiber::Result<()> {
    let mode = FiberSpec::silica(250e-9)?.solve_he11(852e-9)?;
    let probe = LightField::running(mode, 1e-12, 0.0, Direction::Forward)?;
    let r = 250e-9 + 230e-9;
    println!("{:>8} {:>8} {:>8} {:>8} {:>8}", "phi/deg", "|eps|", "eps_x", "eps_y", "eps_z");
    for k in 0..12 {
        let phi = k as f64 * PI / 6.0;
        let eps = ellipticity(&probe.field_at(Position::new(r, phi, 0.0))?)?;
        println!("{:>8.0} {:>8.4} {:>8.4} {:>8.4} {:>8.4}", phi.to_degrees(), eps.norm(), eps.x, eps.y, eps.z);
    }
    Ok(())
}
