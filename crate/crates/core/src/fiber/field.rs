use std::io::Write;

use nalgebra::Vector3;
use num_complex::Complex64;

use super::mode::GuidedMode;
use crate::error::{Error, Result};

pub type ComplexVector = Vector3<Complex64>;

/// Cylindrical position about the fiber axis.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Position {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl Position {
    pub fn new(r: f64, phi: f64, z: f64) -> Self {
        Self { r, phi, z }
    }

    pub fn cartesian(&self) -> [f64; 3] {
        [self.r * self.phi.cos(), self.r * self.phi.sin(), self.z]
    }

    pub fn from_cartesian(p: [f64; 3]) -> Self {
        Self { r: p[0].hypot(p[1]), phi: p[1].atan2(p[0]), z: p[2] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum Configuration {
    Running {
        power: f64,
        direction: Direction,
    },
    /// Counter-propagating pair; `phase` is applied to the backward beam.
    Standing {
        power_forward: f64,
        power_backward: f64,
        phase: f64,
    },
}

/// A quasi-linearly polarized beam (or pair of beams) in the fiber.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LightField {
    pub mode: GuidedMode,
    /// Transverse principal axis, measured from the plane of the atoms (x–z).
    pub polarization_angle: f64,
    pub configuration: Configuration,
}

impl LightField {
    pub fn running(mode: GuidedMode, power: f64, polarization_angle: f64, direction: Direction) -> Result<Self> {
        check_power(power)?;
        Ok(Self { mode, polarization_angle, configuration: Configuration::Running { power, direction } })
    }

    pub fn standing(
        mode: GuidedMode,
        power_forward: f64,
        power_backward: f64,
        polarization_angle: f64,
        phase: f64,
    ) -> Result<Self> {
        check_power(power_forward)?;
        check_power(power_backward)?;
        Ok(Self {
            mode,
            polarization_angle,
            configuration: Configuration::Standing { power_forward, power_backward, phase },
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.mode.wavelength
    }

    /// Copy with every beam power multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.configuration = match self.configuration {
            Configuration::Running { power, direction } => Configuration::Running { power: power * factor, direction },
            Configuration::Standing { power_forward, power_backward, phase } => Configuration::Standing {
                power_forward: power_forward * factor,
                power_backward: power_backward * factor,
                phase,
            },
        };
        out
    }

    /// Complex field envelope (V/m) in Cartesian components, with
    /// E(t) = Re[E e^{-iωt}].
    pub fn field_at(&self, pos: Position) -> Result<ComplexVector> {
        if !(pos.r >= 0.0) || !pos.phi.is_finite() || !pos.z.is_finite() {
            return Err(Error::domain(format!("invalid position {pos:?}")));
        }
        Ok(match self.configuration {
            Configuration::Running { power, direction } => self.beam(pos, power, direction),
            Configuration::Standing { power_forward, power_backward, phase } => {
                self.beam(pos, power_forward, Direction::Forward)
                    + self.beam(pos, power_backward, Direction::Backward) * Complex64::from_polar(1.0, phase)
            }
        })
    }

    fn beam(&self, pos: Position, power: f64, direction: Direction) -> ComplexVector {
        let zero = Complex64::new(0.0, 0.0);
        if power == 0.0 {
            return Vector3::new(zero, zero, zero);
        }
        let m = &self.mode;
        let f = direction.sign();
        let p = m.profile(pos.r);
        let amp = std::f64::consts::SQRT_2 * m.normalization * power.sqrt();
        let rel = pos.phi - self.polarization_angle;
        let (s, c) = rel.sin_cos();
        // −i·e_r is real; choose the sign making the transverse field at the
        // surface on the polarization axis real and positive
        let sign = m.phase_sign;
        let e_r = Complex64::new(sign * amp * p.g_r * c, 0.0);
        let e_phi = Complex64::new(sign * amp * p.e_phi * s, 0.0);
        let e_z = Complex64::new(0.0, -sign * amp * f * p.e_z * c);
        let (sp, cp) = pos.phi.sin_cos();
        let prop = Complex64::from_polar(1.0, f * m.beta * pos.z);
        Vector3::new((e_r * cp - e_phi * sp) * prop, (e_r * sp + e_phi * cp) * prop, e_z * prop)
    }

    /// |E|² on a polar grid, row-major with r outer and φ inner.
    pub fn intensity_map(&self, grid: &PolarGrid) -> Result<Vec<f64>> {
        grid.check()?;
        let mut out = Vec::with_capacity(grid.len());
        for pos in grid.positions() {
            out.push(self.field_at(pos)?.norm_squared());
        }
        Ok(out)
    }
}

fn check_power(p: f64) -> Result<()> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::domain(format!("beam power must be non-negative, got {p}")));
    }
    Ok(())
}

/// Uniform polar sampling grid at fixed z; φ covers [0, 2π).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PolarGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
    pub phi_points: usize,
    pub z: f64,
}

impl PolarGrid {
    fn check(&self) -> Result<()> {
        if !(self.r_min >= 0.0) || self.r_max < self.r_min || self.r_points == 0 || self.phi_points == 0 {
            return Err(Error::domain(format!("invalid polar grid {self:?}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.r_points * self.phi_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        let dr = if self.r_points > 1 { (self.r_max - self.r_min) / (self.r_points - 1) as f64 } else { 0.0 };
        let dphi = 2.0 * std::f64::consts::PI / self.phi_points as f64;
        (0..self.r_points).flat_map(move |i| {
            (0..self.phi_points).map(move |j| Position::new(self.r_min + i as f64 * dr, j as f64 * dphi, self.z))
        })
    }
}

pub const FIELD_CSV_HEADER: &str = "r_m,phi_rad,z_m,Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im";

/// Write sampled fields as CSV rows under [`FIELD_CSV_HEADER`].
pub fn write_field_csv<W: Write>(
    out: &mut W,
    field: &LightField,
    positions: impl IntoIterator<Item = Position>,
) -> Result<()> {
    let io = |e| Error::Io { path: "<field csv>".into(), source: e };
    writeln!(out, "{FIELD_CSV_HEADER}").map_err(io)?;
    for p in positions {
        let e = field.field_at(p)?;
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            p.r, p.phi, p.z, e.x.re, e.x.im, e.y.re, e.y.im, e.z.re, e.z.im
        )
        .map_err(io)?;
    }
    Ok(())
}
