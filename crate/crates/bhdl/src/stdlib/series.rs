//! Standard preferred-value series (E12/E24) and value snapping.

use crate::error::{Error, Result};
use crate::interval::REL_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardSeries {
    E12,
    E24,
}

pub const E12_VALUES: [f64; 12] = [1.0, 1.2, 1.5, 1.8, 2.2, 2.7, 3.3, 3.9, 4.7, 5.6, 6.8, 8.2];

pub const E24_VALUES: [f64; 24] = [
    1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.4, 2.7, 3.0, 3.3, 3.6, 3.9, 4.3, 4.7, 5.1, 5.6,
    6.2, 6.8, 7.5, 8.2, 9.1,
];

impl StandardSeries {
    pub fn decade_values(self) -> &'static [f64] {
        match self {
            StandardSeries::E12 => &E12_VALUES,
            StandardSeries::E24 => &E24_VALUES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundMode {
    RoundUp,
    RoundDown,
    Nearest,
}

/// Snap `target` to a series value `s * 10^k`. `RoundUp` picks the least
/// such value >= target, `RoundDown` the greatest <= target, `Nearest` by
/// relative distance with ties toward the smaller value. Equality is judged
/// at the documented relative tolerance.
pub fn nearest_standard_value(target: f64, series: StandardSeries, mode: RoundMode) -> Result<f64> {
    if !target.is_finite() || target <= 0.0 {
        return Err(Error::Domain(format!(
            "series target must be > 0, got {target}"
        )));
    }
    let decade = target.log10().floor() as i32;
    let mut candidates = Vec::new();
    for k in decade - 1..=decade + 1 {
        let scale = 10f64.powi(k);
        for s in series.decade_values() {
            candidates.push(s * scale);
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ge = |v: f64| v >= target * (1.0 - REL_TOL);
    let le = |v: f64| v <= target * (1.0 + REL_TOL);
    match mode {
        RoundMode::RoundUp => candidates
            .iter()
            .cloned()
            .find(|v| ge(*v))
            .ok_or_else(|| Error::Domain(format!("no series value above {target}"))),
        RoundMode::RoundDown => candidates
            .iter()
            .cloned()
            .rev()
            .find(|v| le(*v))
            .ok_or_else(|| Error::Domain(format!("no series value below {target}"))),
        RoundMode::Nearest => {
            let mut best = candidates[0];
            let mut best_dist = f64::INFINITY;
            for v in candidates {
                let dist = (v - target).abs() / target;
                // strict < keeps the smaller value on a tie
                if dist < best_dist * (1.0 - REL_TOL) {
                    best = v;
                    best_dist = dist;
                }
            }
            Ok(best)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn e24_round_up_example() {
        let v = nearest_standard_value(260.0, StandardSeries::E24, RoundMode::RoundUp).unwrap();
        assert!((v - 270.0).abs() < 1e-9);
    }

    #[test]
    fn exact_member_nearest() {
        let v = nearest_standard_value(100.0, StandardSeries::E24, RoundMode::Nearest).unwrap();
        assert!((v - 100.0).abs() < 1e-9);
    }

    #[test]
    fn e12_round_up_micro() {
        let v = nearest_standard_value(15.95e-6, StandardSeries::E12, RoundMode::RoundUp).unwrap();
        assert!((v - 18e-6).abs() / 18e-6 < 1e-9);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(nearest_standard_value(0.0, StandardSeries::E24, RoundMode::RoundUp).is_err());
        assert!(nearest_standard_value(-1.0, StandardSeries::E24, RoundMode::RoundUp).is_err());
        assert!(nearest_standard_value(f64::NAN, StandardSeries::E24, RoundMode::RoundUp).is_err());
    }

    proptest! {
        #[test]
        fn bracketing(target in 1e-9f64..1e9, e24 in proptest::bool::ANY) {
            let series = if e24 { StandardSeries::E24 } else { StandardSeries::E12 };
            let up = nearest_standard_value(target, series, RoundMode::RoundUp).unwrap();
            let down = nearest_standard_value(target, series, RoundMode::RoundDown).unwrap();
            prop_assert!(down <= target * (1.0 + 1e-9));
            prop_assert!(up >= target * (1.0 - 1e-9));
            let nearest = nearest_standard_value(target, series, RoundMode::Nearest).unwrap();
            let du = (up - target).abs() / target;
            let dd = (down - target).abs() / target;
            let expected = if dd <= du + 1e-12 { down } else { up };
            prop_assert!((nearest - expected).abs() / expected < 1e-9);
        }
    }
}
