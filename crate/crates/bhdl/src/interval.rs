//! Dimensioned closed intervals, the universal value form for electrical
//! parameters. An empty interval is a distinct variant, only ever produced
//! by intersection; constructors never yield `lo > hi`.

use crate::dims::{DimOp, Dimension, DIMENSIONLESS};
use crate::error::{Error, Result};
use std::fmt;

pub const REL_TOL: f64 = 1e-9;
pub const ABS_TOL: f64 = 1e-12;

/// `a <= b` up to the documented floating-point comparison tolerance.
pub fn approx_le(a: f64, b: f64) -> bool {
    let tol = f64::max(REL_TOL * f64::max(a.abs(), b.abs()), ABS_TOL);
    a <= b + tol
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Span { lo: f64, hi: f64, dim: Dimension },
    Empty { dim: Dimension },
}

impl Interval {
    pub fn new(lo: f64, hi: f64, dim: Dimension) -> Result<Interval> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::Domain(format!("bad interval bounds [{lo}, {hi}]")));
        }
        Ok(Interval::Span { lo, hi, dim })
    }

    pub fn point(value: f64, dim: Dimension) -> Interval {
        Interval::Span {
            lo: value,
            hi: value,
            dim,
        }
    }

    pub fn scalar(value: f64) -> Interval {
        Interval::point(value, DIMENSIONLESS)
    }

    pub fn empty(dim: Dimension) -> Interval {
        Interval::Empty { dim }
    }

    pub fn dim(&self) -> Dimension {
        match self {
            Interval::Span { dim, .. } | Interval::Empty { dim } => *dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty { .. })
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self {
            Interval::Span { lo, hi, .. } => Some((*lo, *hi)),
            Interval::Empty { .. } => None,
        }
    }

    pub fn lo(&self) -> f64 {
        self.bounds().expect("empty interval has no bounds").0
    }

    pub fn hi(&self) -> f64 {
        self.bounds().expect("empty interval has no bounds").1
    }

    pub fn midpoint(&self) -> f64 {
        let (lo, hi) = self.bounds().expect("empty interval has no midpoint");
        (lo + hi) / 2.0
    }

    fn dim_for(a: &Interval, b: &Interval, op: DimOp) -> Result<Dimension> {
        a.dim().combine(b.dim(), op)
    }

    pub fn add(&self, other: &Interval) -> Result<Interval> {
        let dim = Self::dim_for(self, other, DimOp::Add)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => Interval::new(alo + blo, ahi + bhi, dim),
            _ => Ok(Interval::empty(dim)),
        }
    }

    pub fn sub(&self, other: &Interval) -> Result<Interval> {
        let dim = Self::dim_for(self, other, DimOp::Sub)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => Interval::new(alo - bhi, ahi - blo, dim),
            _ => Ok(Interval::empty(dim)),
        }
    }

    pub fn mul(&self, other: &Interval) -> Result<Interval> {
        let dim = Self::dim_for(self, other, DimOp::Mul)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => {
                let corners = [alo * blo, alo * bhi, ahi * blo, ahi * bhi];
                let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Interval::new(lo, hi, dim)
            }
            _ => Ok(Interval::empty(dim)),
        }
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        let dim = Self::dim_for(self, other, DimOp::Div)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => {
                if blo <= 0.0 && bhi >= 0.0 {
                    return Err(Error::DivZero);
                }
                let corners = [alo / blo, alo / bhi, ahi / blo, ahi / bhi];
                let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Interval::new(lo, hi, dim)
            }
            _ => Ok(Interval::empty(dim)),
        }
    }

    fn require_same_dim(&self, other: &Interval) -> Result<Dimension> {
        if self.dim() == other.dim() {
            Ok(self.dim())
        } else {
            Err(Error::DimMismatch(
                self.dim().to_string(),
                other.dim().to_string(),
            ))
        }
    }

    /// `self` contains `other` (both bounds, inclusive, with tolerance).
    pub fn contains(&self, other: &Interval) -> Result<bool> {
        self.require_same_dim(other)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => Ok(approx_le(alo, blo) && approx_le(bhi, ahi)),
            // An empty interval is contained in anything; nothing non-empty
            // fits inside an empty one.
            (_, None) => Ok(true),
            (None, Some(_)) => Ok(false),
        }
    }

    pub fn subset_of(&self, other: &Interval) -> Result<bool> {
        other.contains(self)
    }

    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        let dim = self.require_same_dim(other)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => {
                let lo = alo.max(blo);
                let hi = ahi.min(bhi);
                if lo > hi {
                    Ok(Interval::empty(dim))
                } else {
                    Interval::new(lo, hi, dim)
                }
            }
            _ => Ok(Interval::empty(dim)),
        }
    }

    pub fn hull(&self, other: &Interval) -> Result<Interval> {
        let dim = self.require_same_dim(other)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => Interval::new(alo.min(blo), ahi.max(bhi), dim),
            (Some((lo, hi)), None) | (None, Some((lo, hi))) => Interval::new(lo, hi, dim),
            (None, None) => Ok(Interval::empty(dim)),
        }
    }

    /// Elementwise interval extension of min.
    pub fn min(&self, other: &Interval) -> Result<Interval> {
        let dim = self.require_same_dim(other)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => Interval::new(alo.min(blo), ahi.min(bhi), dim),
            _ => Ok(Interval::empty(dim)),
        }
    }

    pub fn max(&self, other: &Interval) -> Result<Interval> {
        let dim = self.require_same_dim(other)?;
        match (self.bounds(), other.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => Interval::new(alo.max(blo), ahi.max(bhi), dim),
            _ => Ok(Interval::empty(dim)),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.dim().to_string();
        match self.bounds() {
            Some((lo, hi)) => {
                if unit.is_empty() {
                    write!(f, "[{lo}, {hi}]")
                } else {
                    write!(f, "[{lo}, {hi}] {unit}")
                }
            }
            None => {
                if unit.is_empty() {
                    write!(f, "[empty]")
                } else {
                    write!(f, "[empty] {unit}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::{AMPERE, VOLT};
    use proptest::prelude::*;

    fn volts(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi, VOLT).unwrap()
    }

    #[test]
    fn constructor_rejects_inverted_bounds() {
        assert!(Interval::new(2.0, 1.0, VOLT).is_err());
        assert!(Interval::new(f64::NAN, 1.0, VOLT).is_err());
    }

    #[test]
    fn addition() {
        let r = volts(1.0, 2.0).add(&volts(3.0, 4.0)).unwrap();
        assert_eq!(r.bounds(), Some((4.0, 6.0)));
        assert_eq!(r.dim(), VOLT);
    }

    #[test]
    fn multiplication_corner_products() {
        let r = volts(1.0, 2.0)
            .mul(&Interval::new(-1.0, 1.0, DIMENSIONLESS).unwrap())
            .unwrap();
        assert_eq!(r.bounds(), Some((-2.0, 2.0)));
        assert_eq!(r.dim(), VOLT);
    }

    #[test]
    fn division_by_zero_spanning_interval() {
        let err = volts(1.0, 2.0)
            .div(&Interval::new(-1.0, 1.0, AMPERE).unwrap())
            .unwrap_err();
        assert_eq!(err.code(), "E_DIV_ZERO");
    }

    #[test]
    fn subset_and_intersect() {
        assert!(volts(3.3, 3.3).subset_of(&volts(2.0, 5.5)).unwrap());
        assert!(volts(1.0, 2.0)
            .intersect(&volts(3.0, 4.0))
            .unwrap()
            .is_empty());
        let h = volts(1.0, 2.0).hull(&volts(3.0, 4.0)).unwrap();
        assert_eq!(h.bounds(), Some((1.0, 4.0)));
    }

    #[test]
    fn mul_with_empty_is_empty() {
        let e = Interval::empty(VOLT);
        assert!(e.mul(&Interval::scalar(2.0)).unwrap().is_empty());
    }

    fn arb_interval() -> impl Strategy<Value = Interval> {
        (-1e3f64..1e3, -1e3f64..1e3)
            .prop_map(|(a, b)| Interval::new(a.min(b), a.max(b), DIMENSIONLESS).unwrap())
    }

    proptest! {
        #[test]
        fn contains_subset_duality(a in arb_interval(), b in arb_interval()) {
            prop_assert_eq!(a.subset_of(&b).unwrap(), b.contains(&a).unwrap());
        }

        #[test]
        fn arith_soundness(a in arb_interval(), b in arb_interval(), t in 0.0f64..1.0, u in 0.0f64..1.0) {
            let x = a.lo() + t * (a.hi() - a.lo());
            let y = b.lo() + u * (b.hi() - b.lo());
            let sum = a.add(&b).unwrap();
            prop_assert!(approx_le(sum.lo(), x + y) && approx_le(x + y, sum.hi()));
            let prod = a.mul(&b).unwrap();
            prop_assert!(approx_le(prod.lo(), x * y) && approx_le(x * y, prod.hi()));
        }
    }
}
