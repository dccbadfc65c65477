use nalgebra::{Matrix3, Vector3};

use crate::atom::{AtomicData, HyperfineState, TUNE_OUT_INTERVAL};
use crate::constants::PLANCK;
use crate::error::{Error, Result};
use crate::fiber::{Direction, FiberSpec, LightField, Position};
use crate::numerics::golden_section;

use super::polarization::spin_density;

/// Default search resolution for trap minima, m.
pub const MINIMUM_TOLERANCE: f64 = 0.1e-9;
/// Step of the finite-difference Hessian, m.
pub const HESSIAN_STEP: f64 = 1e-9;

/// One of the two diametric trap sites in the plane of the atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Site {
    /// φ = 0
    Upper,
    /// φ = π
    Lower,
}

impl Site {
    pub fn phi(self) -> f64 {
        match self {
            Site::Upper => 0.0,
            Site::Lower => std::f64::consts::PI,
        }
    }
}

/// Extra guided beam used only to induce a fictitious field.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Manipulation {
    /// m; `None` selects the model tune-out wavelength.
    pub wavelength: Option<f64>,
    pub power: f64,
    /// Angle of the transverse polarization axis from the plane of the atoms.
    pub polarization_angle: f64,
    pub direction: Direction,
}

impl Manipulation {
    /// 100 µW at the tune-out wavelength, polarized in the plane of the atoms.
    pub fn tune_out(power: f64) -> Self {
        Self { wavelength: None, power, polarization_angle: 0.0, direction: Direction::Forward }
    }
}

/// Scalar inputs of a two-color trap; `Default` holds the experimental values.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrapParameters {
    pub radius: f64,
    pub blue_wavelength: f64,
    pub blue_power: f64,
    /// Tilt φ_B of the blue polarization away from perpendicular to the atom plane, rad.
    pub blue_tilt: f64,
    pub blue_direction: Direction,
    pub red_wavelength: f64,
    /// Mean power per red beam, W.
    pub red_power: f64,
    /// Ratio of forward to backward red power.
    pub red_imbalance: f64,
    pub red_phase: f64,
    /// Surface coefficient C3 in J·m³; `None` disables the surface term.
    pub c3: Option<f64>,
    pub manipulation: Option<Manipulation>,
}

impl Default for TrapParameters {
    fn default() -> Self {
        Self {
            radius: 250e-9,
            blue_wavelength: 783e-9,
            blue_power: 8.5e-3,
            blue_tilt: 0.0,
            blue_direction: Direction::Forward,
            red_wavelength: 1064e-9,
            red_power: 0.77e-3,
            red_imbalance: 1.0,
            red_phase: 0.0,
            c3: Some(AtomicData::cesium().c3_silica),
            manipulation: None,
        }
    }
}

/// Solved two-color trap: modes and beams ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapConfig {
    pub atom: AtomicData,
    pub fiber: FiberSpec,
    pub blue: LightField,
    pub red: LightField,
    pub manipulation: Option<LightField>,
    pub c3: Option<f64>,
}

impl TrapConfig {
    pub fn new(atom: AtomicData, p: &TrapParameters) -> Result<Self> {
        let fiber = FiberSpec::new(p.radius, atom.silica.clone())?;
        if !(p.red_imbalance > 0.0 && p.red_imbalance.is_finite()) {
            return Err(Error::domain(format!("red imbalance must be positive, got {}", p.red_imbalance)));
        }
        let blue = LightField::running(
            fiber.solve_he11(p.blue_wavelength)?,
            p.blue_power,
            std::f64::consts::FRAC_PI_2 + p.blue_tilt,
            p.blue_direction,
        )?;
        let rho = p.red_imbalance;
        let red = LightField::standing(
            fiber.solve_he11(p.red_wavelength)?,
            2.0 * p.red_power * rho / (1.0 + rho),
            2.0 * p.red_power / (1.0 + rho),
            0.0,
            p.red_phase,
        )?;
        let manipulation = match p.manipulation {
            None => None,
            Some(m) => {
                let wavelength = match m.wavelength {
                    Some(w) => w,
                    None => atom.tune_out(TUNE_OUT_INTERVAL)?,
                };
                Some(LightField::running(fiber.solve_he11(wavelength)?, m.power, m.polarization_angle, m.direction)?)
            }
        };
        if let Some(c3) = p.c3 {
            if !(c3 >= 0.0) {
                return Err(Error::domain(format!("C3 must be non-negative, got {c3}")));
            }
        }
        Ok(Self { atom, fiber, blue, red, manipulation, c3: p.c3 })
    }

    /// The experimental configuration with the bundled atomic data.
    pub fn paper() -> Result<Self> {
        Self::new(AtomicData::cesium(), &TrapParameters::default())
    }

    pub fn fields(&self) -> impl Iterator<Item = &LightField> {
        [&self.blue, &self.red].into_iter().chain(self.manipulation.as_ref())
    }

    fn check_outside(&self, pos: Position) -> Result<()> {
        if !(pos.r > self.fiber.radius) {
            return Err(Error::domain(format!("position r = {} m is not outside the fiber", pos.r)));
        }
        Ok(())
    }

    /// Sum of scalar light shifts and the surface term (Hz): the
    /// mF-average of the full potential in the linear-Zeeman limit.
    pub fn averaged_potential(&self, pos: Position) -> Result<f64> {
        self.check_outside(pos)?;
        let mut u = 0.0;
        for f in self.fields() {
            u += self.atom.scalar_shift(&f.field_at(pos)?, f.wavelength())?;
        }
        if let Some(c3) = self.c3 {
            u -= c3 / (pos.r - self.fiber.radius).powi(3) / PLANCK;
        }
        Ok(u)
    }

    /// Total fictitious field (G) of all beams at `pos`.
    pub fn fictitious_field(&self, pos: Position) -> Result<Vector3<f64>> {
        let mut b = Vector3::zeros();
        for f in self.fields() {
            b += spin_density(&f.field_at(pos)?) * self.atom.fictitious_coefficient(f.wavelength())?;
        }
        Ok(b)
    }

    /// Full potential of `state` (Hz): scalar shifts, surface term, and the
    /// Breit–Rabi energy in |B_off ŷ + B_fict|.
    pub fn potential(&self, pos: Position, state: HyperfineState, offset_field: f64) -> Result<f64> {
        let base = self.averaged_potential(pos)?;
        let total = Vector3::new(0.0, offset_field, 0.0) + self.fictitious_field(pos)?;
        let zeeman = self.atom.breit_rabi_energy(state, total.norm())? - self.atom.breit_rabi_energy(state, 0.0)?;
        Ok(base + zeeman)
    }

    fn evaluate(&self, pos: Position, state: Option<HyperfineState>, offset_field: f64) -> Result<f64> {
        match state {
            None => self.averaged_potential(pos),
            Some(s) => self.potential(pos, s, offset_field),
        }
    }

    /// Local minimum of the potential near `site`. `state = None` uses the
    /// mF-averaged potential.
    pub fn find_minimum(&self, site: Site, state: Option<HyperfineState>, offset_field: f64) -> Result<Position> {
        self.find_minimum_with_tolerance(site, state, offset_field, MINIMUM_TOLERANCE)
    }

    pub fn find_minimum_with_tolerance(
        &self,
        site: Site,
        state: Option<HyperfineState>,
        offset_field: f64,
        tol: f64,
    ) -> Result<Position> {
        let a = self.fiber.radius;
        let phi0 = site.phi();
        let u = |p: Position| self.evaluate(p, state, offset_field).unwrap_or(f64::INFINITY);

        // bracket a radial minimum at the red antinode
        let step = 2e-9;
        let samples: Vec<(f64, f64)> = (0..=500)
            .map(|i| {
                let r = a + 10e-9 + i as f64 * step;
                (r, u(Position::new(r, phi0, 0.0)))
            })
            .collect();
        let mut best: Option<(f64, f64)> = None;
        for w in samples.windows(3) {
            if w[1].1 < w[0].1 && w[1].1 <= w[2].1 && best.is_none_or(|b| w[1].1 < b.1) {
                best = Some(w[1]);
            }
        }
        let (mut r, _) =
            best.ok_or_else(|| Error::NoTrap(format!("no radial minimum within 1 um of the {site:?} site")))?;
        let (mut phi, mut z) = (phi0, 0.0);
        let half = 20e-9;
        for _ in 0..100 {
            let (r_new, _) = golden_section(|x| u(Position::new(x, phi, z)), r - half, r + half, tol);
            let (phi_new, _) =
                golden_section(|x| u(Position::new(r_new, x, z)), phi - half / r_new, phi + half / r_new, tol / r_new);
            let (z_new, _) = golden_section(|x| u(Position::new(r_new, phi_new, x)), z - half, z + half, tol);
            let moved = (r_new - r).abs().max(r_new * (phi_new - phi).abs()).max((z_new - z).abs());
            (r, phi, z) = (r_new, phi_new, z_new);
            if moved < tol {
                // golden section never lands exactly on a symmetry point
                if r * (phi - phi0).abs() < tol && u(Position::new(r, phi0, z)) <= u(Position::new(r, phi, z)) {
                    phi = phi0;
                }
                if z.abs() < tol && u(Position::new(r, phi, 0.0)) <= u(Position::new(r, phi, z)) {
                    z = 0.0;
                }
                let pos = Position::new(r, phi, z);
                // a minimum pinned against the surface is not a trap
                if r - a < 12e-9 {
                    return Err(Error::NoTrap("minimum collapsed onto the fiber surface".into()));
                }
                return Ok(pos);
            }
        }
        Err(Error::NoTrap("coordinate search did not settle".into()))
    }

    /// Trap frequencies (ν_r, ν_φ, ν_z) in Hz from the Hessian at `pos`.
    pub fn frequencies(&self, pos: Position, state: Option<HyperfineState>, offset_field: f64) -> Result<[f64; 3]> {
        let h = HESSIAN_STEP;
        let (sp, cp) = pos.phi.sin_cos();
        let axes = [Vector3::new(cp, sp, 0.0), Vector3::new(-sp, cp, 0.0), Vector3::new(0.0, 0.0, 1.0)];
        let c = Vector3::from(pos.cartesian());
        let at = |d: [f64; 3]| -> Result<f64> {
            let p = c + axes[0] * d[0] + axes[1] * d[1] + axes[2] * d[2];
            self.evaluate(Position::from_cartesian([p.x, p.y, p.z]), state, offset_field)
        };
        let u0 = at([0.0; 3])?;
        let mut hess = Matrix3::zeros();
        for i in 0..3 {
            let mut d = [0.0; 3];
            d[i] = h;
            let plus = at(d)?;
            d[i] = -h;
            let minus = at(d)?;
            hess[(i, i)] = (plus - 2.0 * u0 + minus) / (h * h);
            for j in 0..i {
                let corner = |si: f64, sj: f64| {
                    let mut d = [0.0; 3];
                    d[i] = si * h;
                    d[j] = sj * h;
                    at(d)
                };
                let v =
                    (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?) / (4.0 * h * h);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        let eig = (hess * PLANCK).symmetric_eigen();
        let values: [f64; 3] = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
        if values.iter().any(|&k| !(k > 0.0)) {
            return Err(Error::Saddle(values));
        }
        let mass = self.atom.mass_kg();
        let mut out = [0.0; 3];
        for (k, value) in values.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let axis = (0..3).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap();
            out[axis] = (value / mass).sqrt() / (2.0 * std::f64::consts::PI);
        }
        Ok(out)
    }
}
