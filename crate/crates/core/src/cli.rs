//! Command-line front end. Exit codes: 0 success, 2 configuration or I/O
//! error, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;
use serde::Serialize;

use crate::atom::{AtomicData, TUNE_OUT_INTERVAL};
use crate::config::{RunConfig, PAPER_CONFIG};
use crate::dynamics::{pump_evolution, pump_rates, pump_steady_state, pumping_time, PopulationVector, PulseSpec};
use crate::error::{Error, Result};
use crate::fiber::{Direction, FiberSpec, LightField, PolarGrid, Position, FIELD_CSV_HEADER};
use crate::light_matter::{ellipticity, fictitious_report, spherical_components, trap_report, Site, TrapConfig};
use crate::spectra::{
    fit_mw_spectrum, fit_transmission, read_mw_csv, simulate_mw_spectrum, simulate_spectrum, write_mw_csv, MwModel,
    SpectrumData, SpectrumModel,
};

#[derive(Debug, Parser)]
#[command(name = "nanofiber", version, about = "Nanofiber trap, fictitious-field and spectroscopy calculations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Configuration file; the bundled experimental set when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Random seed, overriding run.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a key, e.g. `--set blue.tilt=5deg`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the HE11 mode of every configured beam.
    Mode,
    /// Field, intensity and ellipticity on a polar grid.
    Fieldmap,
    /// Trap minimum, frequencies and site fields.
    Trap,
    /// Fictitious fields and predicted splittings.
    Bfict {
        #[arg(long, value_enum)]
        scheme: Scheme,
        /// Blue polarization tilt in degrees (tilt scheme).
        #[arg(long = "phi-b")]
        phi_b: Option<f64>,
        /// Forward/backward red power ratio (imbalance scheme).
        #[arg(long)]
        imbalance: Option<f64>,
    },
    /// Optical pumping with the probe polarization at one site.
    Pump {
        #[arg(long, value_enum, default_value = "upper")]
        site: SiteArg,
    },
    /// Probe transmission spectra.
    Spectrum {
        #[command(subcommand)]
        action: DataAction,
    },
    /// Microwave spectra.
    Mw {
        #[command(subcommand)]
        action: MwAction,
    },
    /// Tune-out wavelength of the ground-state scalar polarizability.
    Tuneout,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scheme {
    Tuneout,
    Tilt,
    Imbalance,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SiteArg {
    Upper,
    Lower,
}

#[derive(Debug, Subcommand)]
enum DataAction {
    Simulate,
    Fit {
        /// Input CSV; `<out>/spectrum.csv` when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum MwAction {
    Simulate,
    Fit {
        /// Input CSV; `<out>/mw.csv` when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        components: usize,
    },
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                2
            } else {
                3
            }
        }
    }
}

struct Context {
    cfg: RunConfig,
    atom: AtomicData,
    out: PathBuf,
    seed: u64,
}

fn execute(cli: &Cli) -> Result<()> {
    let mut cfg = match &cli.common.config {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::parse(PAPER_CONFIG)?,
    };
    for o in &cli.common.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(s) = cli.common.seed {
        cfg.set("run.seed", &s.to_string())?;
    }
    if let Command::Bfict { phi_b: Some(d), .. } = &cli.command {
        cfg.set("blue.tilt", &format!("{d} deg"))?;
    }
    if let Command::Bfict { imbalance: Some(x), .. } = &cli.command {
        cfg.set("red.imbalance", &x.to_string())?;
    }
    let atom = cfg.atom()?;
    let seed = cfg.number("run.seed")? as u64;
    std::fs::create_dir_all(&cli.common.out).map_err(|e| Error::Io { path: cli.common.out.clone(), source: e })?;
    let ctx = Context { cfg, atom, out: cli.common.out.clone(), seed };
    match &cli.command {
        Command::Mode => mode(&ctx),
        Command::Fieldmap => fieldmap(&ctx),
        Command::Trap => trap(&ctx),
        Command::Bfict { scheme, .. } => bfict(&ctx, *scheme),
        Command::Pump { site } => pump(&ctx, *site),
        Command::Spectrum { action: DataAction::Simulate } => spectrum_simulate(&ctx),
        Command::Spectrum { action: DataAction::Fit { input } } => spectrum_fit(&ctx, input.as_deref()),
        Command::Mw { action: MwAction::Simulate } => mw_simulate(&ctx),
        Command::Mw { action: MwAction::Fit { input, components } } => mw_fit(&ctx, input.as_deref(), *components),
        Command::Tuneout => tuneout(&ctx),
    }
}

/// Write via a temporary file in the same directory, then rename.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io = |e| Error::Io { path: path.to_path_buf(), source: e };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn write_json<T: Serialize>(ctx: &Context, name: &str, body: &T) -> Result<PathBuf> {
    let mut value = serde_json::to_value(body).map_err(|e| Error::domain(format!("serializing {name}: {e}")))?;
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("config".into(), ctx.cfg.to_json());
    }
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::domain(e.to_string()))?;
    text.push('\n');
    let path = ctx.out.join(name);
    write_atomic(&path, text.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn config_header(ctx: &Context) -> String {
    ctx.cfg.render().iter().map(|l| format!("# {l}\n")).collect()
}

fn write_csv(ctx: &Context, name: &str, body: &[u8]) -> Result<PathBuf> {
    let mut text = config_header(ctx).into_bytes();
    text.extend_from_slice(body);
    let path = ctx.out.join(name);
    write_atomic(&path, &text)?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn fiber(ctx: &Context) -> Result<FiberSpec> {
    FiberSpec::new(ctx.cfg.number("fiber.radius")?, ctx.atom.silica.clone())
}

fn probe(ctx: &Context) -> Result<LightField> {
    let mode = fiber(ctx)?.solve_he11(ctx.cfg.number("probe.wavelength")?)?;
    LightField::running(mode, ctx.cfg.number("probe.power")?, ctx.cfg.number("probe.polarization")?, Direction::Forward)
}

#[derive(Serialize)]
struct ModeRow {
    beam: &'static str,
    wavelength_m: f64,
    beta_per_m: f64,
    effective_index: f64,
    v_number: f64,
    multimode: bool,
    core_index: f64,
    normalization_v_per_m_sqrt_w: f64,
}

fn mode(ctx: &Context) -> Result<()> {
    let fiber = fiber(ctx)?;
    let manip = ctx.cfg.manipulation_wavelength()?.map_or_else(|| ctx.atom.tune_out(TUNE_OUT_INTERVAL), Ok)?;
    let beams = [
        ("probe", ctx.cfg.number("probe.wavelength")?),
        ("blue", ctx.cfg.number("blue.wavelength")?),
        ("red", ctx.cfg.number("red.wavelength")?),
        ("manipulation", manip),
    ];
    let mut rows = Vec::new();
    for (beam, wl) in beams {
        let m = fiber.solve_he11(wl)?;
        println!("{beam:>12}: lambda = {wl:e} m, beta = {:e} rad/m, V = {:.6}", m.beta, m.v_number);
        rows.push(ModeRow {
            beam,
            wavelength_m: wl,
            beta_per_m: m.beta,
            effective_index: m.effective_index(),
            v_number: m.v_number,
            multimode: m.multimode,
            core_index: m.core_index,
            normalization_v_per_m_sqrt_w: m.normalization,
        });
    }
    write_json(ctx, "mode.json", &serde_json::json!({ "modes": rows }))?;
    Ok(())
}

fn fieldmap(ctx: &Context) -> Result<()> {
    let beam = ctx.cfg.text("fieldmap.beam")?;
    let field = match beam {
        "probe" => probe(ctx)?,
        "blue" | "red" | "manipulation" => {
            let t = TrapConfig::new(ctx.atom.clone(), &ctx.cfg.trap_parameters(&ctx.atom, true)?)?;
            match beam {
                "blue" => t.blue,
                "red" => t.red,
                _ => t.manipulation.expect("requested"),
            }
        }
        other => return Err(Error::config("fieldmap.beam", format!("unknown beam `{other}`"))),
    };
    let grid = PolarGrid {
        r_min: field.mode.radius,
        r_max: ctx.cfg.number("fieldmap.r_max")?,
        r_points: ctx.cfg.count("fieldmap.r_points")?,
        phi_points: ctx.cfg.count("fieldmap.phi_points")?,
        z: 0.0,
    };
    if grid.r_max < grid.r_min || grid.is_empty() {
        return Err(Error::config("fieldmap.r_max", "grid must extend outward from the surface"));
    }
    let mut body = format!("{FIELD_CSV_HEADER},intensity_V2_per_m2,eps_x,eps_y,eps_z\n");
    for p in grid.positions() {
        let e = field.field_at(p)?;
        let eps = ellipticity(&e).unwrap_or_else(|_| Vector3::zeros());
        writeln!(
            body,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            p.r,
            p.phi,
            p.z,
            e.x.re,
            e.x.im,
            e.y.re,
            e.y.im,
            e.z.re,
            e.z.im,
            e.norm_squared(),
            eps.x,
            eps.y,
            eps.z
        )
        .expect("writing to a String");
    }
    write_csv(ctx, "fieldmap.csv", body.as_bytes())?;
    Ok(())
}

fn trap(ctx: &Context) -> Result<()> {
    let t = TrapConfig::new(ctx.atom.clone(), &ctx.cfg.trap_parameters(&ctx.atom, false)?)?;
    let report = trap_report(&t, ctx.cfg.number("magnetic.offset_clock")?)?;
    let p = &report.minimum_position;
    println!("minimum {:.1} nm above the surface", p.height_above_surface_m * 1e9);
    let f = report.trap_frequencies_hz;
    println!("frequencies (r, phi, z) = ({:.1}, {:.1}, {:.1}) kHz", f[0] / 1e3, f[1] / 1e3, f[2] / 1e3);
    write_json(ctx, "trap.json", &report)?;
    Ok(())
}

fn bfict(ctx: &Context, scheme: Scheme) -> Result<()> {
    let (with_manipulation, offset, name) = match scheme {
        Scheme::Tuneout => (true, ctx.cfg.number("magnetic.offset_clock")?, "tuneout"),
        Scheme::Tilt => (false, ctx.cfg.number("magnetic.offset_mw")?, "tilt"),
        Scheme::Imbalance => (false, ctx.cfg.number("magnetic.offset_mw")?, "imbalance"),
    };
    let t = TrapConfig::new(ctx.atom.clone(), &ctx.cfg.trap_parameters(&ctx.atom, with_manipulation)?)?;
    let report = fictitious_report(&t, offset)?;
    let b = |v: [f64; 3]| Vector3::from(v).norm();
    println!("|Bfict| upper {:.4} G, lower {:.4} G", b(report.bfict_upper_g), b(report.bfict_lower_g));
    println!("clock splitting {:.1} Hz", report.clock_splitting_hz.exact);
    println!("|3,-3> -> |4,-3> splitting {:.1} Hz", report.mw_splitting_minus3_hz);
    let mut value = serde_json::to_value(&report).map_err(|e| Error::domain(e.to_string()))?;
    value["scheme"] = name.into();
    write_json(ctx, "bfict.json", &value)?;
    Ok(())
}

#[derive(Serialize)]
struct PumpOutput {
    site: &'static str,
    /// |A₊|², |A₀|², |A₋|² about +y, normalized.
    polarization_fractions: [f64; 3],
    steady_state: Vec<f64>,
    pumping_time_1_e: f64,
    duration_s: f64,
    after_duration: Vec<f64>,
}

fn pump(ctx: &Context, site: SiteArg) -> Result<()> {
    let field = probe(ctx)?;
    let (s, label) = match site {
        SiteArg::Upper => (Site::Upper, "upper"),
        SiteArg::Lower => (Site::Lower, "lower"),
    };
    let pos = Position::new(field.mode.radius + ctx.cfg.number("probe.height")?, s.phi(), 0.0);
    let e = field.field_at(pos)?;
    let a = spherical_components(&e, &Vector3::y())?;
    let total: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let fractions = a.map(|x| x.norm_sqr() / total);
    let rates = pump_rates(&ctx.atom, fractions, ctx.cfg.number("pump.saturation")?)?;
    let steady = pump_steady_state(&rates)?;
    let initial = PopulationVector::uniform(4)?;
    let duration = ctx.cfg.number("pump.duration")?;
    let after = pump_evolution(&rates, &initial, duration)?;
    let time = pumping_time(&rates, &initial)?;
    println!("sigma+/pi/sigma- = {:.4}/{:.4}/{:.4}", fractions[0], fractions[1], fractions[2]);
    println!("steady state mF=+4: {:.6}, mF=-4: {:.6}; 1/e time {:e} s", steady.get(4), steady.get(-4), time);
    write_json(
        ctx,
        "pump.json",
        &PumpOutput {
            site: label,
            polarization_fractions: fractions,
            steady_state: steady.populations,
            pumping_time_1_e: time,
            duration_s: duration,
            after_duration: after.populations,
        },
    )?;
    Ok(())
}

fn spectrum_model(ctx: &Context) -> Result<SpectrumModel> {
    let c = &ctx.cfg;
    SpectrumModel::new(
        c.number("spectrum.od_plus")?,
        c.number("spectrum.od_minus")?,
        c.number("spectrum.delta_plus")?,
        c.number("spectrum.delta_minus")?,
        c.number("spectrum.gamma")?,
    )
    .map_err(|e| Error::config("spectrum", e.to_string()))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn spectrum_simulate(ctx: &Context) -> Result<()> {
    let c = &ctx.cfg;
    let grid =
        linspace(c.number("spectrum.detuning_min")?, c.number("spectrum.detuning_max")?, c.count("spectrum.points")?);
    let data = simulate_spectrum(&spectrum_model(ctx)?, &grid, c.number("spectrum.reference_counts")?, ctx.seed)?;
    let mut body = Vec::new();
    data.write_csv(&mut body)?;
    write_csv(ctx, "spectrum.csv", &body)?;
    Ok(())
}

fn open(path: &Path) -> Result<std::io::BufReader<std::fs::File>> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    Ok(std::io::BufReader::new(f))
}

fn spectrum_fit(ctx: &Context, input: Option<&Path>) -> Result<()> {
    let path = input.map_or_else(|| ctx.out.join("spectrum.csv"), Path::to_path_buf);
    let data = SpectrumData::read_csv(open(&path)?)?;
    let fit = fit_transmission(&data, None)?;
    let (s, ds) = fit.splitting();
    let (r, dr) = fit.od_ratio();
    println!("splitting {:.4} +/- {:.4} MHz, OD-/OD+ = {:.4} +/- {:.4}", s / 1e6, ds / 1e6, r, dr);
    let mut value = serde_json::to_value(fit.report()).map_err(|e| Error::domain(e.to_string()))?;
    value["splitting_Hz"] = s.into();
    value["splitting_sigma_Hz"] = ds.into();
    value["od_ratio"] = r.into();
    value["od_ratio_sigma"] = dr.into();
    value["input"] = path.display().to_string().into();
    write_json(ctx, "spectrum_fit.json", &value)?;
    Ok(())
}

fn mw_simulate(ctx: &Context) -> Result<()> {
    let c = &ctx.cfg;
    let (center, split) = (c.number("mw.center")?, c.number("mw.splitting")?);
    let model = MwModel::new(
        c.number("mw.pulse")?,
        vec![center - 0.5 * split, center + 0.5 * split],
        vec![c.number("mw.amplitude_lower")?, c.number("mw.amplitude_upper")?],
    )?;
    let span = c.number("mw.span")?;
    let grid = linspace(center - span, center + span, c.count("mw.points")?);
    let data = simulate_mw_spectrum(&model, &grid, c.count("mw.shots")? as u64, ctx.seed)?;
    let mut body = Vec::new();
    write_mw_csv(&mut body, &data)?;
    write_csv(ctx, "mw.csv", &body)?;
    Ok(())
}

fn mw_fit(ctx: &Context, input: Option<&Path>, components: usize) -> Result<()> {
    let path = input.map_or_else(|| ctx.out.join("mw.csv"), Path::to_path_buf);
    let data = read_mw_csv(open(&path)?)?;
    let tau = ctx.cfg.number("mw.pulse")?;
    PulseSpec::pi_pulse(tau).map_err(|e| Error::config("mw.pulse", e.to_string()))?;
    let fit = fit_mw_spectrum(&data, tau, components)?;
    let mut value = serde_json::to_value(fit.report()).map_err(|e| Error::domain(e.to_string()))?;
    value["fwhm_Hz"] = fit.fwhm.into();
    if let Some((s, ds)) = fit.splitting {
        println!("splitting {:.1} +/- {:.1} Hz", s, ds);
        value["splitting_Hz"] = s.into();
        value["splitting_sigma_Hz"] = ds.into();
    }
    value["input"] = path.display().to_string().into();
    write_json(ctx, "mw_fit.json", &value)?;
    Ok(())
}

fn tuneout(ctx: &Context) -> Result<()> {
    let w = ctx.atom.tune_out(TUNE_OUT_INTERVAL)?;
    println!("tune-out wavelength {:.4} nm", w * 1e9);
    write_json(
        ctx,
        "tuneout.json",
        &serde_json::json!({ "tune_out_wavelength_m": w, "search_interval_m": [TUNE_OUT_INTERVAL.0, TUNE_OUT_INTERVAL.1] }),
    )?;
    Ok(())
}
