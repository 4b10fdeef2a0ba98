//! Operating-condition tags.
//!
//! A condition is "CY{X}-{M}/{N}": temperature X in degrees C, charge C-rate
//! M, discharge C-rate N. The tag string round-trips with the numeric
//! fields.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cycling condition of a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Condition {
    pub temperature_c: f64,
    pub charge_c_rate: f64,
    pub discharge_c_rate: f64,
}

impl Condition {
    pub fn new(temperature_c: f64, charge_c_rate: f64, discharge_c_rate: f64) -> Self {
        Self {
            temperature_c,
            charge_c_rate,
            discharge_c_rate,
        }
    }

    /// The four dataset conditions, in table order.
    pub fn table() -> [Condition; 4] {
        [
            Condition::new(25.0, 0.25, 1.0),
            Condition::new(25.0, 0.5, 1.0),
            Condition::new(25.0, 1.0, 1.0),
            Condition::new(45.0, 0.5, 1.0),
        ]
    }

    /// "CY{X}-{M}/{N}" tag for this condition.
    pub fn tag(&self) -> String {
        format!(
            "CY{}-{}/{}",
            fmt_num(self.temperature_c),
            fmt_num(self.charge_c_rate),
            fmt_num(self.discharge_c_rate)
        )
    }

    /// Parses a "CY{X}-{M}/{N}" tag.
    pub fn parse(tag: &str) -> Result<Self> {
        let bad = || Error::Config(format!("invalid condition tag {tag:?}"));
        let rest = tag.strip_prefix("CY").ok_or_else(bad)?;
        let (temp, rates) = rest.split_once('-').ok_or_else(bad)?;
        let (charge, discharge) = rates.split_once('/').ok_or_else(bad)?;
        let parse_num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let c = Condition::new(parse_num(temp)?, parse_num(charge)?, parse_num(discharge)?);
        if !c.temperature_c.is_finite() || c.charge_c_rate <= 0.0 || c.discharge_c_rate <= 0.0 {
            return Err(bad());
        }
        Ok(c)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl TryFrom<String> for Condition {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Condition::parse(&s)
    }
}

impl From<Condition> for String {
    fn from(c: Condition) -> String {
        c.tag()
    }
}

/// Integers print bare ("45", "1"), fractions keep their decimals ("0.5").
fn fmt_num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_round_trips() {
        let c = Condition::new(45.0, 0.5, 1.0);
        assert_eq!(c.tag(), "CY45-0.5/1");
        assert_eq!(Condition::parse("CY45-0.5/1").unwrap(), c);
    }

    #[test]
    fn table_conditions_round_trip() {
        let tags = ["CY25-0.25/1", "CY25-0.5/1", "CY25-1/1", "CY45-0.5/1"];
        for (cond, tag) in Condition::table().iter().zip(tags) {
            assert_eq!(cond.tag(), tag);
            assert_eq!(&Condition::parse(tag).unwrap(), cond);
        }
    }

    #[test]
    fn rejects_malformed_tags() {
        for bad in ["", "CY45", "CY45-0.5", "45-0.5/1", "CY45-0.5/x", "CYx-1/1"] {
            assert!(Condition::parse(bad).is_err(), "{bad:?}");
        }
    }
}
