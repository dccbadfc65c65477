//! Solve the HE11 mode of a 250 nm radius silica nanofiber at the wavelengths
//! used in the experiment.

use nanofiber::fiber::FiberSpec;

fn main() -> nanofiber::Result<()> {
    let fiber = FiberSpec::silica(250e-9)?;
    println!("{:>8} {:>8} {:>10} {:>12} {:>12}", "nm", "V", "n_eff", "q (1/um)", "A (V/m/√W)");
    for nm in [783.0, 852.0, 880.25, 1064.0] {
        let m = fiber.solve_he11(nm * 1e-9)?;
        println!(
            "{nm:>8.2} {:>8.4} {:>10.6} {:>12.4} {:>12.4e}",
            m.v_number,
            m.effective_index(),
            m.exterior_parameter * 1e-6,
            m.normalization
        );
    }
    // a thicker fiber guides more than one mode at 852 nm
    let thick = FiberSpec::silica(400e-9)?.solve_he11(852e-9)?;
    println!("a = 400 nm: V = {:.3}, multimode = {}", thick.v_number, thick.multimode);
    Ok(())
}
