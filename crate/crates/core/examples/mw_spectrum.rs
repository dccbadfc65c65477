//! Fourier-limited microwave lines: π-pulse widths and a two-line fit.

use nanofiber::dynamics::pi_pulse_fwhm;
use nanofiber::spectra::{fit_mw_spectrum, simulate_mw_spectrum, MwModel};

fn main() -> nanofiber::Result<()> {
    for tau in [103e-6, 40e-6] {
        println!("τ = {:.0} us: FWHM {:.2} kHz", tau * 1e6, pi_pulse_fwhm(tau)? / 1e3);
    }
    let truth = MwModel::new(40e-6, vec![-30.35e3, 30.35e3], vec![0.7, 0.8])?;
    let grid: Vec<f64> = (0..121).map(|i| -90e3 + 1.5e3 * i as f64).collect();
    let data = simulate_mw_spectrum(&truth, &grid, 400, 8)?;
    let fit = fit_mw_spectrum(&data, 40e-6, 2)?;
    let (s, ds) = fit.splitting.expect("two components");
    println!("centers {:?} Hz", fit.model.centers.iter().map(|c| c.round()).collect::<Vec<_>>());
    println!("splitting {:.2} ± {:.2} kHz", s / 1e3, ds / 1e3);
    Ok(())
}
