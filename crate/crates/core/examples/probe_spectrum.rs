//! Simulate a two-dip probe transmission record with shot noise and fit it,
//! before and after pushing out the lower ensemble.

use nanofiber::spectra::{fit_transmission, simulate_spectrum, SpectrumModel};

fn main() -> nanofiber::Result<()> {
    let grid: Vec<f64> = (0..161).map(|i| -80e6 + 1e6 * i as f64).collect();
    for (label, od_minus) in [("pumped", 0.9), ("pushed out", 0.05)] {
        let truth = SpectrumModel::new(1.0, od_minus, 39.82e6, -38.55e6, 8.3e6)?;
        let data = simulate_spectrum(&truth, &grid, 1e4, 2024)?;
        let fit = fit_transmission(&data, None)?;
        let (s, ds) = fit.splitting();
        let (r, dr) = fit.od_ratio();
        println!("{label}:");
        for (name, (v, e)) in fit.report().names.iter().zip(fit.report().values.iter().zip(fit.report().sigmas)) {
            println!("  {name:<15} {v:>14.6e} ± {e:.2e}");
        }
        println!("  splitting {:.3} ± {:.3} MHz, OD-/OD+ = {r:.3} ± {dr:.3}", s / 1e6, ds / 1e6);
    }
    Ok(())
}
