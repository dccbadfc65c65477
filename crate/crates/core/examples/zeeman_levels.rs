//! Ground-state Breit–Rabi levels, the clock transition and the stretched
//! D2 lines in an offset field.

use nanofiber::atom::{AtomicData, HyperfineState};

fn main() -> nanofiber::Result<()> {
    let cs = AtomicData::cesium();
    for b in [0.0, 3.0, 28.0] {
        let levels: Vec<String> = (-4..=4)
            .map(|m| cs.breit_rabi_energy(HyperfineState::ground(4, m).unwrap(), b).map(|e| format!("{:.3}", e / 1e6)))
            .collect::<Result<_, _>>()?;
        println!("B = {b:4.1} G, F=4 levels (MHz): {}", levels.join(" "));
    }
    println!("clock coefficient {:.4} kHz/G²", cs.clock_coefficient() / 1e3);
    println!("clock shift at 28 G: {:.1} kHz", (cs.clock_frequency(28.0) - cs.clock_frequency(0.0)) / 1e3);
    let up = cs.d2_zeeman_detuning(HyperfineState::ground(4, 4)?, HyperfineState::excited(5, 5)?, 28.0)?;
    let down = cs.d2_zeeman_detuning(HyperfineState::ground(4, -4)?, HyperfineState::excited(5, -5)?, 28.0)?;
    println!(
        "σ+ / σ− stretched lines at 28 G: {:+.2} / {:+.2} MHz, splitting {:.2} MHz",
        up / 1e6,
        down / 1e6,
        (up - down) / 1e6
    );
    Ok(())
}
