//! Line-oriented run configuration: `[section]` headers, `key = value`
//! lines with unit suffixes, `#` comments. Every key is listed in [`KEYS`];
//! anything else is rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::atom::AtomicData;
use crate::error::{Error, Result};
use crate::fiber::Direction;
use crate::light_matter::{Manipulation, TrapParameters};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Length,
    Power,
    Field,
    Time,
    Angle,
    Frequency,
    Number,
    Count,
    Text,
}

impl Unit {
    /// Suffixes and their SI (or G, Hz, rad) factors.
    fn suffixes(self) -> &'static [(&'static str, f64)] {
        match self {
            Unit::Length => &[("m", 1.0), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9)],
            Unit::Power => &[("W", 1.0), ("mW", 1e-3), ("uW", 1e-6), ("nW", 1e-9), ("pW", 1e-12)],
            Unit::Field => &[("G", 1.0), ("mG", 1e-3), ("T", 1e4)],
            Unit::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9)],
            Unit::Angle => &[("rad", 1.0), ("deg", std::f64::consts::PI / 180.0)],
            Unit::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)],
            Unit::Number | Unit::Count | Unit::Text => &[],
        }
    }
}

pub struct KeySpec {
    pub key: &'static str,
    pub unit: Unit,
    /// `None` marks a required key.
    pub default: Option<&'static str>,
}

const fn k(key: &'static str, unit: Unit, default: Option<&'static str>) -> KeySpec {
    KeySpec { key, unit, default }
}

pub const KEYS: &[KeySpec] = &[
    k("run.atom_data", Unit::Text, Some("bundled")),
    k("run.seed", Unit::Count, Some("1")),
    k("fiber.radius", Unit::Length, None),
    k("blue.wavelength", Unit::Length, None),
    k("blue.power", Unit::Power, None),
    k("blue.tilt", Unit::Angle, Some("0 deg")),
    k("blue.direction", Unit::Text, Some("forward")),
    k("red.wavelength", Unit::Length, None),
    k("red.power", Unit::Power, None),
    k("red.imbalance", Unit::Number, Some("1")),
    k("red.phase", Unit::Angle, Some("0 deg")),
    k("surface.c3", Unit::Text, Some("bundled")),
    k("manipulation.wavelength", Unit::Text, Some("tuneout")),
    k("manipulation.power", Unit::Power, Some("100 uW")),
    k("manipulation.polarization", Unit::Angle, Some("0 deg")),
    k("magnetic.offset_clock", Unit::Field, Some("28 G")),
    k("magnetic.offset_mw", Unit::Field, Some("3 G")),
    k("probe.wavelength", Unit::Length, Some("852 nm")),
    k("probe.power", Unit::Power, Some("4 pW")),
    k("probe.polarization", Unit::Angle, Some("0 deg")),
    k("probe.height", Unit::Length, Some("230 nm")),
    k("pump.saturation", Unit::Number, Some("0.1")),
    k("pump.duration", Unit::Time, Some("1 ms")),
    k("fieldmap.beam", Unit::Text, Some("probe")),
    k("fieldmap.r_max", Unit::Length, Some("1000 nm")),
    k("fieldmap.r_points", Unit::Count, Some("76")),
    k("fieldmap.phi_points", Unit::Count, Some("72")),
    k("spectrum.od_plus", Unit::Number, Some("1.0")),
    k("spectrum.od_minus", Unit::Number, Some("0.9")),
    k("spectrum.delta_plus", Unit::Frequency, Some("39.82 MHz")),
    k("spectrum.delta_minus", Unit::Frequency, Some("-38.55 MHz")),
    k("spectrum.gamma", Unit::Frequency, Some("8.3 MHz")),
    k("spectrum.reference_counts", Unit::Number, Some("10000")),
    k("spectrum.detuning_min", Unit::Frequency, Some("-80 MHz")),
    k("spectrum.detuning_max", Unit::Frequency, Some("80 MHz")),
    k("spectrum.points", Unit::Count, Some("161")),
    k("mw.clock_pulse", Unit::Time, Some("103 us")),
    k("mw.pulse", Unit::Time, Some("40 us")),
    k("mw.center", Unit::Frequency, Some("0 Hz")),
    k("mw.splitting", Unit::Frequency, Some("60.7 kHz")),
    k("mw.amplitude_upper", Unit::Number, Some("0.8")),
    k("mw.amplitude_lower", Unit::Number, Some("0.7")),
    k("mw.shots", Unit::Count, Some("400")),
    k("mw.span", Unit::Frequency, Some("90 kHz")),
    k("mw.points", Unit::Count, Some("121")),
];

fn spec(key: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|s| s.key == key)
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    Text(String),
}

/// Parsed and validated configuration. Values are stored in SI units
/// (gauss for fields, Hz for frequencies, rad for angles).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<&'static str, Value>,
    raw: BTreeMap<&'static str, String>,
    /// Directory of the config file, for relative paths.
    base: Option<PathBuf>,
}

fn parse_value(spec: &KeySpec, raw: &str) -> Result<Value> {
    let bad = |m: String| Error::config(spec.key, m);
    let raw = raw.trim();
    match spec.unit {
        Unit::Text => {
            if raw.is_empty() {
                return Err(bad("empty value".into()));
            }
            Ok(Value::Text(raw.to_string()))
        }
        Unit::Number => raw
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Value::Number)
            .ok_or_else(|| bad(format!("`{raw}` is not a number"))),
        Unit::Count => raw
            .parse::<u64>()
            .map(|v| Value::Number(v as f64))
            .map_err(|_| bad(format!("`{raw}` is not a non-negative integer"))),
        unit => {
            let split = raw
                .char_indices()
                .find(|&(i, c)| {
                    c.is_ascii_alphabetic()
                        && !(matches!(c, 'e' | 'E')
                            && raw[i + 1..].starts_with(|d: char| d.is_ascii_digit() || d == '-' || d == '+'))
                })
                .map(|(i, _)| i)
                .ok_or_else(|| bad(format!("`{raw}` needs a unit ({})", names(unit))))?;
            let (num, suffix) = raw.split_at(split);
            let num: f64 = num.trim().parse().map_err(|_| bad(format!("`{}` is not a number", num.trim())))?;
            let factor = unit
                .suffixes()
                .iter()
                .find(|(s, _)| *s == suffix.trim())
                .map(|(_, f)| *f)
                .ok_or_else(|| bad(format!("unknown unit `{}`, expected one of {}", suffix.trim(), names(unit))))?;
            if !num.is_finite() {
                return Err(bad("value must be finite".into()));
            }
            Ok(Value::Number(scale(raw[..split].trim(), num, factor)))
        }
    }
}

/// Apply a unit factor; decimal prefixes are applied in the exponent so
/// that `0.77 mW` parses to the same double as `0.77e-3`.
fn scale(text: &str, value: f64, factor: f64) -> f64 {
    let exp = factor.log10().round();
    if factor != 1.0 && 10f64.powi(exp as i32) == factor && !text.contains(['e', 'E']) {
        if let Ok(v) = format!("{text}e{exp}").parse::<f64>() {
            return v;
        }
    }
    value * factor
}

fn names(unit: Unit) -> String {
    unit.suffixes().iter().map(|(s, _)| *s).collect::<Vec<_>>().join(", ")
}

impl RunConfig {
    /// Parse config text; keys missing from `text` take their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self { values: BTreeMap::new(), raw: BTreeMap::new(), base: None };
        let mut section = String::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                section = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::config(format!("line {}", n + 1), "unterminated section header"))?
                    .trim()
                    .to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}", n + 1), "expected `key = value`"))?;
            let full = if section.is_empty() { key.trim().to_string() } else { format!("{section}.{}", key.trim()) };
            if cfg.raw.contains_key(full.as_str()) {
                return Err(Error::config(full, "duplicate key"));
            }
            cfg.set(&full, value)?;
        }
        for s in KEYS {
            if !cfg.values.contains_key(s.key) {
                match s.default {
                    Some(d) => {
                        cfg.values.insert(s.key, parse_value(s, d)?);
                        cfg.raw.insert(s.key, d.to_string());
                    }
                    None => return Err(Error::config(s.key, "required key is missing")),
                }
            }
        }
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
        let mut cfg = Self::parse(&text)?;
        cfg.base = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Set or override `section.key` from its textual form.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        let s = spec(key).ok_or_else(|| Error::config(key, "unknown key"))?;
        self.values.insert(s.key, parse_value(s, raw)?);
        self.raw.insert(s.key, raw.trim().to_string());
        Ok(())
    }

    /// `key=value` override as given on the command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(assignment, "override must look like section.key=value"))?;
        self.set(key.trim(), value)
    }

    pub fn number(&self, key: &str) -> Result<f64> {
        match self.values.get(key) {
            Some(Value::Number(v)) => Ok(*v),
            Some(Value::Text(_)) => Err(Error::config(key, "expected a number")),
            None => Err(Error::config(key, "unknown key")),
        }
    }

    pub fn count(&self, key: &str) -> Result<usize> {
        Ok(self.number(key)? as usize)
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        match self.values.get(key) {
            Some(Value::Text(v)) => Ok(v),
            Some(Value::Number(_)) => Err(Error::config(key, "expected text")),
            None => Err(Error::config(key, "unknown key")),
        }
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v = self.number(key)?;
        if !(v > 0.0) {
            return Err(Error::config(key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    fn non_negative(&self, key: &str) -> Result<f64> {
        let v = self.number(key)?;
        if !(v >= 0.0) {
            return Err(Error::config(key, format!("must be non-negative, got {v}")));
        }
        Ok(v)
    }

    fn direction(&self, key: &str) -> Result<Direction> {
        match self.text(key)? {
            "forward" => Ok(Direction::Forward),
            "backward" => Ok(Direction::Backward),
            other => Err(Error::config(key, format!("expected forward or backward, got `{other}`"))),
        }
    }

    pub fn atom(&self) -> Result<AtomicData> {
        match self.text("run.atom_data")? {
            "bundled" => Ok(AtomicData::cesium()),
            path => {
                let p = Path::new(path);
                let p = match (&self.base, p.is_relative()) {
                    (Some(b), true) => b.join(p),
                    _ => p.to_path_buf(),
                };
                AtomicData::from_path(p)
            }
        }
    }

    /// Manipulation-beam wavelength, `None` meaning the model tune-out.
    pub fn manipulation_wavelength(&self) -> Result<Option<f64>> {
        let key = "manipulation.wavelength";
        let raw = self.text(key)?;
        if raw == "tuneout" {
            return Ok(None);
        }
        match parse_value(&KeySpec { key: "manipulation.wavelength", unit: Unit::Length, default: None }, raw)? {
            Value::Number(v) if v > 0.0 => Ok(Some(v)),
            _ => Err(Error::config(key, "expected a wavelength or `tuneout`")),
        }
    }

    /// Trap inputs; the manipulation beam is included when `manipulation`.
    pub fn trap_parameters(&self, atom: &AtomicData, manipulation: bool) -> Result<TrapParameters> {
        let c3 = match self.text("surface.c3")? {
            "bundled" => Some(atom.c3_silica),
            "off" => None,
            raw => Some(
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| *v >= 0.0)
                    .ok_or_else(|| Error::config("surface.c3", "expected `bundled`, `off` or C3 in J m^3"))?,
            ),
        };
        let manipulation = if manipulation {
            Some(Manipulation {
                wavelength: self.manipulation_wavelength()?,
                power: self.non_negative("manipulation.power")?,
                polarization_angle: self.number("manipulation.polarization")?,
                direction: Direction::Forward,
            })
        } else {
            None
        };
        Ok(TrapParameters {
            radius: self.positive("fiber.radius")?,
            blue_wavelength: self.positive("blue.wavelength")?,
            blue_power: self.non_negative("blue.power")?,
            blue_tilt: self.number("blue.tilt")?,
            blue_direction: self.direction("blue.direction")?,
            red_wavelength: self.positive("red.wavelength")?,
            red_power: self.non_negative("red.power")?,
            red_imbalance: self.positive("red.imbalance")?,
            red_phase: self.number("red.phase")?,
            c3,
            manipulation,
        })
    }

    /// The effective configuration, one `key = value` line per key in
    /// schema order.
    pub fn render(&self) -> Vec<String> {
        KEYS.iter().map(|s| format!("{} = {}", s.key, self.raw[s.key])).collect()
    }

    /// Effective configuration as a JSON object of raw strings.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            KEYS.iter().map(|s| (s.key.to_string(), serde_json::Value::String(self.raw[s.key].clone()))).collect();
        serde_json::Value::Object(map)
    }
}

/// The bundled configuration reproducing the experiment.
pub const PAPER_CONFIG: &str = include_str!("../paper.cfg");
