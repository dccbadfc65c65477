use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::constants::{ATOMIC_MASS_UNIT, BOHR_MAGNETON_HZ_PER_G, BOHR_RADIUS, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/cesium.dat");

/// Every key the data file may (and must) contain.
pub const DATA_KEYS: &[&str] = &[
    "format_version",
    "mass_u",
    "nuclear_spin",
    "g_i",
    "g_j_ground",
    "ground_hyperfine_hz",
    "d1_frequency_hz",
    "d1_linewidth_hz",
    "d1_dipole_ea0",
    "g_j_d1",
    "d2_frequency_hz",
    "d2_linewidth_hz",
    "d2_dipole_ea0",
    "g_j_d2",
    "c3_silica",
    "sellmeier_b1",
    "sellmeier_b2",
    "sellmeier_b3",
    "sellmeier_l1_um",
    "sellmeier_l2_um",
    "sellmeier_l3_um",
    "sellmeier_min_um",
    "sellmeier_max_um",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Line {
    D1,
    D2,
}

/// One D line of the 6S1/2 ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineData {
    pub frequency_hz: f64,
    /// Natural linewidth Γ/2π in Hz.
    pub linewidth_hz: f64,
    /// Reduced dipole element ⟨J=1/2‖er‖J'⟩ in C·m.
    pub dipole: f64,
    /// Twice the excited-state J (1 for D1, 3 for D2).
    pub twice_j_excited: i32,
    pub g_j_excited: f64,
}

impl LineData {
    pub fn angular_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency_hz
    }
    pub fn gamma(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.linewidth_hz
    }
    pub fn wavelength(&self) -> f64 {
        crate::constants::SPEED_OF_LIGHT / self.frequency_hz
    }
}

/// Three-term Sellmeier model; resonance wavelengths in µm.
#[derive(Debug, Clone, PartialEq)]
pub struct Sellmeier {
    pub b: [f64; 3],
    pub l_um: [f64; 3],
    pub valid_um: (f64, f64),
}

/// Immutable Cs-133 constants plus the fused-silica material model.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicData {
    pub mass_u: f64,
    pub nuclear_spin: f64,
    pub g_i: f64,
    pub g_j_ground: f64,
    pub ground_hyperfine_hz: f64,
    pub d1: LineData,
    pub d2: LineData,
    /// Surface interaction coefficient, J·m³.
    pub c3_silica: f64,
    pub silica: Sellmeier,
}

impl AtomicData {
    /// The bundled data file.
    pub fn cesium() -> Self {
        BUNDLED.parse().expect("bundled atomic data file is valid")
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        text.parse()
    }

    pub fn line(&self, line: Line) -> &LineData {
        match line {
            Line::D1 => &self.d1,
            Line::D2 => &self.d2,
        }
    }

    pub fn lines(&self) -> [&LineData; 2] {
        [&self.d1, &self.d2]
    }

    pub fn mass_kg(&self) -> f64 {
        self.mass_u * ATOMIC_MASS_UNIT
    }

    /// Hyperfine Landé factor of a ground level, nuclear term included.
    pub fn g_f_ground(&self, f: i32) -> f64 {
        landé(f as f64, 0.5, self.nuclear_spin, self.g_j_ground, self.g_i)
    }

    /// Electronic part of the ground-level Landé factor, `g_J` times the
    /// projection of J onto F. This is the factor through which a light-induced
    /// (purely electronic) fictitious field acts on |F, mF⟩.
    pub fn g_f_electronic(&self, f: i32) -> f64 {
        landé(f as f64, 0.5, self.nuclear_spin, self.g_j_ground, 0.0)
    }

    /// Landé factor of a 6P3/2 hyperfine level F'.
    pub fn g_f_excited(&self, f: i32) -> f64 {
        landé(f as f64, 1.5, self.nuclear_spin, self.d2.g_j_excited, self.g_i)
    }

    /// Quadratic clock-shift coefficient in Hz/G², the small-field limit of the
    /// Breit–Rabi formula: (g_J − g_I)² μ_B² / (2 ΔE_hfs).
    pub fn clock_coefficient(&self) -> f64 {
        let mu = (self.g_j_ground - self.g_i) * BOHR_MAGNETON_HZ_PER_G;
        mu * mu / (2.0 * self.ground_hyperfine_hz)
    }
}

fn landé(f: f64, j: f64, i: f64, g_j: f64, g_i: f64) -> f64 {
    let ff = f * (f + 1.0);
    let jj = j * (j + 1.0);
    let ii = i * (i + 1.0);
    g_j * (ff - ii + jj) / (2.0 * ff) + g_i * (ff + ii - jj) / (2.0 * ff)
}

impl FromStr for AtomicData {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut values: HashMap<&str, (f64, usize)> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Data {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let Some(&known) = DATA_KEYS.iter().find(|k| **k == key) else {
                return Err(Error::Data { line: line_no, message: format!("unknown key `{key}`") });
            };
            let v: f64 = value.trim().parse().map_err(|_| Error::Data {
                line: line_no,
                message: format!("`{key}`: cannot parse `{}` as a number", value.trim()),
            })?;
            if values.insert(known, (v, line_no)).is_some() {
                return Err(Error::Data { line: line_no, message: format!("duplicate key `{key}`") });
            }
        }
        let get = |key: &str| -> Result<f64> {
            values.get(key).map(|v| v.0).ok_or_else(|| Error::Data { line: 0, message: format!("missing key `{key}`") })
        };
        if get("format_version")? != 1.0 {
            return Err(Error::Data { line: values["format_version"].1, message: "unsupported format_version".into() });
        }
        let ea0 = ELEMENTARY_CHARGE * BOHR_RADIUS;
        let data = AtomicData {
            mass_u: get("mass_u")?,
            nuclear_spin: get("nuclear_spin")?,
            g_i: get("g_i")?,
            g_j_ground: get("g_j_ground")?,
            ground_hyperfine_hz: get("ground_hyperfine_hz")?,
            d1: LineData {
                frequency_hz: get("d1_frequency_hz")?,
                linewidth_hz: get("d1_linewidth_hz")?,
                dipole: get("d1_dipole_ea0")? * ea0,
                twice_j_excited: 1,
                g_j_excited: get("g_j_d1")?,
            },
            d2: LineData {
                frequency_hz: get("d2_frequency_hz")?,
                linewidth_hz: get("d2_linewidth_hz")?,
                dipole: get("d2_dipole_ea0")? * ea0,
                twice_j_excited: 3,
                g_j_excited: get("g_j_d2")?,
            },
            c3_silica: get("c3_silica")?,
            silica: Sellmeier {
                b: [get("sellmeier_b1")?, get("sellmeier_b2")?, get("sellmeier_b3")?],
                l_um: [get("sellmeier_l1_um")?, get("sellmeier_l2_um")?, get("sellmeier_l3_um")?],
                valid_um: (get("sellmeier_min_um")?, get("sellmeier_max_um")?),
            },
        };
        if data.nuclear_spin != 3.5 {
            return Err(Error::Data {
                line: values["nuclear_spin"].1,
                message: "only I = 7/2 (Cs-133) is supported".into(),
            });
        }
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_loads() {
        let cs = AtomicData::cesium();
        assert_eq!(cs.ground_hyperfine_hz, 9_192_631_770.0);
        assert!((cs.d2.wavelength() - 852.347e-9).abs() < 1e-12);
    }

    #[test]
    fn clock_coefficient_matches_reference() {
        let alpha = AtomicData::cesium().clock_coefficient();
        assert!(((alpha - 427.0) / 427.0).abs() < 0.005, "{alpha}");
    }

    #[test]
    fn landé_factors() {
        let cs = AtomicData::cesium();
        assert!((cs.g_f_electronic(4) - 0.25).abs() < 1e-3);
        assert!((cs.g_f_electronic(3) + 0.25).abs() < 1e-3);
        assert!((cs.g_f_excited(5) - 0.4).abs() < 1e-3);
    }

    #[test]
    fn rejects_unknown_missing_and_duplicate_keys() {
        let extra = format!("{}\nbogus = 1\n", AtomicData::bundled_source());
        assert!(matches!(extra.parse::<AtomicData>(), Err(Error::Data { .. })));

        let missing: String =
            AtomicData::bundled_source().lines().filter(|l| !l.starts_with("g_i")).collect::<Vec<_>>().join("\n");
        let err = missing.parse::<AtomicData>().unwrap_err();
        assert!(err.to_string().contains("g_i"));

        let dup = format!("{}\ng_i = 0\n", AtomicData::bundled_source());
        assert!(dup.parse::<AtomicData>().unwrap_err().to_string().contains("duplicate"));
    }
}
