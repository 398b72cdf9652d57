//! Numeric config fields with explicit units.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{HarnessError, Result};

/// `{"value": 2.0, "unit": "MHz"}`, or a bare number for dimensionless fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Tagged { value: f64, unit: String },
    Bare(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    /// Angular frequency or rate, resolved to rad/s.
    Frequency,
    /// Seconds.
    Time,
    /// Kelvin.
    Temperature,
    /// Radians.
    Angle,
    Dimensionless,
}

impl Dimension {
    /// Unit suffix of resolved values, as used in CSV headers.
    pub fn si_unit(&self) -> &'static str {
        match self {
            Self::Frequency => "rad/s",
            Self::Time => "s",
            Self::Temperature => "K",
            Self::Angle => "rad",
            Self::Dimensionless => "1",
        }
    }
}

/// How cyclic units (Hz, kHz, MHz, GHz) are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UnitConvention {
    /// Read cyclic units as plain rates (`1 MHz = 1e6 s⁻¹`) instead of `ω/2π`.
    pub mhz_as_rate: bool,
}

/// Scale factor taking a value in `unit` to the SI unit of `dim`.
pub fn unit_scale(unit: &str, dim: Dimension, conv: UnitConvention) -> Result<f64> {
    let cyclic = if conv.mhz_as_rate { 1.0 } else { TAU };
    let scale = match (dim, unit.trim()) {
        (Dimension::Frequency, "Hz") => Some(cyclic),
        (Dimension::Frequency, "kHz") => Some(cyclic * 1e3),
        (Dimension::Frequency, "MHz") => Some(cyclic * 1e6),
        (Dimension::Frequency, "GHz") => Some(cyclic * 1e9),
        (Dimension::Frequency, "rad/s" | "1/s") => Some(1.0),
        (Dimension::Frequency, "1/ms") => Some(1e3),
        (Dimension::Frequency, "1/us" | "1/µs") => Some(1e6),
        (Dimension::Frequency, "1/ns") => Some(1e9),
        (Dimension::Time, "s") => Some(1.0),
        (Dimension::Time, "ms") => Some(1e-3),
        (Dimension::Time, "us" | "µs") => Some(1e-6),
        (Dimension::Time, "ns") => Some(1e-9),
        (Dimension::Temperature, "K") => Some(1.0),
        (Dimension::Temperature, "mK") => Some(1e-3),
        (Dimension::Angle, "rad") => Some(1.0),
        (Dimension::Angle, "deg") => Some(PI / 180.0),
        (Dimension::Angle, "pi") => Some(PI),
        (Dimension::Dimensionless, "1" | "") => Some(1.0),
        _ => None,
    };
    scale.ok_or_else(|| {
        HarnessError::Config(format!("unit {unit:?} is not valid for a {dim:?} quantity"))
    })
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Self::Tagged { value, unit: unit.to_string() }
    }

    /// Value in the SI unit of `dim`. Bare numbers are only accepted for
    /// dimensionless quantities.
    pub fn resolve(&self, dim: Dimension, conv: UnitConvention, field: &str) -> Result<f64> {
        let v = match self {
            Self::Tagged { value, unit } => {
                let s = unit_scale(unit, dim, conv)
                    .map_err(|e| HarnessError::Config(format!("{field}: {e}")))?;
                value * s
            }
            Self::Bare(v) if dim == Dimension::Dimensionless => *v,
            Self::Bare(_) => {
                return Err(HarnessError::Config(format!(
                    "{field}: a unit is required (expected {})",
                    dim.si_unit()
                )))
            }
        };
        if !v.is_finite() {
            return Err(HarnessError::Config(format!("{field}: value is not finite")));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_units_carry_two_pi() {
        let c = UnitConvention::default();
        let w = Quantity::new(2.0, "MHz").resolve(Dimension::Frequency, c, "x").unwrap();
        assert_eq!(w, 2.0 * TAU * 1e6);
        let rate = UnitConvention { mhz_as_rate: true };
        let r = Quantity::new(2.0, "MHz").resolve(Dimension::Frequency, rate, "x").unwrap();
        assert_eq!(r, 2e6);
        let bare = Quantity::new(0.1, "1/us").resolve(Dimension::Frequency, c, "x").unwrap();
        assert_eq!(bare, 1e5);
    }

    #[test]
    fn rejects_wrong_dimension_and_missing_unit() {
        let c = UnitConvention::default();
        assert!(Quantity::new(1.0, "mK").resolve(Dimension::Frequency, c, "x").is_err());
        assert!(Quantity::Bare(1.0).resolve(Dimension::Time, c, "x").is_err());
        assert_eq!(Quantity::Bare(0.5).resolve(Dimension::Dimensionless, c, "x").unwrap(), 0.5);
        assert_eq!(Quantity::new(15.0, "mK").resolve(Dimension::Temperature, c, "x").unwrap(), 0.015);
    }

    #[test]
    fn parses_both_forms() {
        let q: Quantity = serde_json::from_str(r#"{"value": 0.5, "unit": "pi"}"#).unwrap();
        assert_eq!(q, Quantity::new(0.5, "pi"));
        let q: Quantity = serde_json::from_str("3").unwrap();
        assert_eq!(q, Quantity::Bare(3.0));
    }
}
