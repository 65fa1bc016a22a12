//! Physical dimensions as integer exponent vectors over the SI base
//! (meter, kilogram, second, ampere).

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(pub [i8; 4]);

pub const DIMENSIONLESS: Dimension = Dimension([0, 0, 0, 0]);
pub const VOLT: Dimension = Dimension([2, 1, -3, -1]);
pub const AMPERE: Dimension = Dimension([0, 0, 0, 1]);
pub const OHM: Dimension = Dimension([2, 1, -3, -2]);
pub const FARAD: Dimension = Dimension([-2, -1, 4, 2]);
pub const HENRY: Dimension = Dimension([2, 1, -2, -2]);
pub const HERTZ: Dimension = Dimension([0, 0, -1, 0]);
pub const WATT: Dimension = Dimension([2, 1, -3, 0]);

const UNIT_TABLE: &[(&str, Dimension)] = &[
    ("V", VOLT),
    ("A", AMPERE),
    ("Ohm", OHM),
    ("F", FARAD),
    ("H", HENRY),
    ("Hz", HERTZ),
    ("W", WATT),
];

pub fn lookup_unit(name: &str) -> Option<Dimension> {
    UNIT_TABLE.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Dimension {
    pub fn mul(self, other: Dimension) -> Dimension {
        let mut out = [0i8; 4];
        for i in 0..4 {
            out[i] = self.0[i] + other.0[i];
        }
        Dimension(out)
    }

    pub fn div(self, other: Dimension) -> Dimension {
        let mut out = [0i8; 4];
        for i in 0..4 {
            out[i] = self.0[i] - other.0[i];
        }
        Dimension(out)
    }

    /// Addition and subtraction require equal dimensions; multiplication and
    /// division combine exponent vectors.
    pub fn combine(self, other: Dimension, op: DimOp) -> Result<Dimension> {
        match op {
            DimOp::Add | DimOp::Sub => {
                if self == other {
                    Ok(self)
                } else {
                    Err(Error::DimMismatch(self.to_string(), other.to_string()))
                }
            }
            DimOp::Mul => Ok(self.mul(other)),
            DimOp::Div => Ok(self.div(other)),
        }
    }

    /// Canonical unit name if this dimension matches a table entry.
    pub fn unit_name(self) -> Option<&'static str> {
        UNIT_TABLE.iter().find(|(_, d)| *d == self).map(|(n, _)| *n)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.unit_name() {
            return write!(f, "{name}");
        }
        if *self == DIMENSIONLESS {
            return Ok(());
        }
        let bases = ["m", "kg", "s", "A"];
        let mut first = true;
        for (i, e) in self.0.iter().enumerate() {
            if *e != 0 {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if *e == 1 {
                    write!(f, "{}", bases[i])?;
                } else {
                    write!(f, "{}^{}", bases[i], e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volt_over_ampere_is_ohm() {
        assert_eq!(VOLT.combine(AMPERE, DimOp::Div).unwrap(), OHM);
        assert_eq!(OHM.0, [2, 1, -3, -2]);
    }

    #[test]
    fn add_same_dimension() {
        assert_eq!(VOLT.combine(VOLT, DimOp::Add).unwrap(), VOLT);
    }

    #[test]
    fn add_mismatch_fails() {
        let err = VOLT.combine(AMPERE, DimOp::Add).unwrap_err();
        assert_eq!(err.code(), "E_DIM_MISMATCH");
    }

    #[test]
    fn unit_table_closure() {
        assert_eq!(OHM.mul(AMPERE), VOLT);
        assert_eq!(VOLT.mul(AMPERE), WATT);
        // 1/(Hz*F) == Ohm
        assert_eq!(DIMENSIONLESS.div(HERTZ.mul(FARAD)), OHM);
    }
}
