//! Quantity literals: `<number><si-prefix?><unit>` with an optional
//! `+- <number><si-prefix?><unit>` or `+- <number>%` tolerance.
//! `5mA +- 1mA` expands to `[0.004, 0.006] A`.

use crate::dims::{lookup_unit, Dimension, DIMENSIONLESS};
use crate::error::{Error, Result};
use crate::interval::Interval;

const PREFIXES: &[(char, f64)] = &[
    ('p', 1e-12),
    ('n', 1e-9),
    ('u', 1e-6),
    ('m', 1e-3),
    ('k', 1e3),
    ('M', 1e6),
    ('G', 1e9),
];

/// Resolve a unit suffix like `mA`, `kOhm` or `V` to a scale factor and
/// dimension. An empty suffix is dimensionless.
pub fn resolve_suffix(suffix: &str) -> Result<(f64, Dimension)> {
    if suffix.is_empty() {
        return Ok((1.0, DIMENSIONLESS));
    }
    if let Some(dim) = lookup_unit(suffix) {
        return Ok((1.0, dim));
    }
    let mut chars = suffix.chars();
    let first = chars.next().unwrap();
    let rest = chars.as_str();
    if let Some((_, scale)) = PREFIXES.iter().find(|(p, _)| *p == first) {
        if let Some(dim) = lookup_unit(rest) {
            return Ok((*scale, dim));
        }
    }
    Err(Error::UnitUnknown(suffix.to_string()))
}

/// One magnitude with suffix applied: value in base units plus dimension.
#[derive(Debug, Clone, Copy)]
pub struct Magnitude {
    pub value: f64,
    pub dim: Dimension,
}

pub fn apply_suffix(number: f64, suffix: &str) -> Result<Magnitude> {
    let (scale, dim) = resolve_suffix(suffix)?;
    Ok(Magnitude {
        value: number * scale,
        dim,
    })
}

#[derive(Debug, Clone, Copy)]
pub enum Tolerance {
    Absolute(Magnitude),
    Percent(f64),
}

/// Build an interval from a center magnitude and optional tolerance.
pub fn build_quantity(center: Magnitude, tol: Option<Tolerance>) -> Result<Interval> {
    match tol {
        None => Ok(Interval::point(center.value, center.dim)),
        Some(Tolerance::Absolute(t)) => {
            if t.dim != center.dim {
                return Err(Error::UnitMismatch(format!("{} vs {}", center.dim, t.dim)));
            }
            let delta = t.value.abs();
            Interval::new(center.value - delta, center.value + delta, center.dim)
        }
        Some(Tolerance::Percent(pct)) => {
            let delta = center.value.abs() * pct / 100.0;
            Interval::new(center.value - delta, center.value + delta, center.dim)
        }
    }
}

fn split_number(text: &str) -> Result<(f64, &str)> {
    let end = text
        .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-' || c == '+'))
        .unwrap_or(text.len());
    // allow exponents like 1.5e-6
    let mut end = end;
    if text[end..].starts_with('e') || text[end..].starts_with('E') {
        let tail = &text[end + 1..];
        let exp_len = tail
            .find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '+'))
            .unwrap_or(tail.len());
        if exp_len > 0 {
            end += 1 + exp_len;
        }
    }
    let num: f64 = text[..end]
        .parse()
        .map_err(|_| Error::QtySyntax(text.to_string()))?;
    Ok((num, &text[end..]))
}

/// Parse a standalone quantity literal like `3.3V` or `10kOhm +- 5%`.
pub fn quantity_parse(text: &str) -> Result<Interval> {
    let text = text.trim();
    let (num, rest) = split_number(text)?;
    let (suffix, rest) = split_suffix(rest);
    let center = apply_suffix(num, suffix)?;
    let rest = rest.trim_start();
    if rest.is_empty() {
        return build_quantity(center, None);
    }
    let rest = rest
        .strip_prefix("+-")
        .ok_or_else(|| Error::QtySyntax(text.to_string()))?
        .trim_start();
    let (tnum, trest) = split_number(rest)?;
    let trest = trest.trim();
    let tol = if trest == "%" {
        Tolerance::Percent(tnum)
    } else {
        let (tsuffix, tail) = split_suffix(trest);
        if !tail.trim().is_empty() {
            return Err(Error::QtySyntax(text.to_string()));
        }
        Tolerance::Absolute(apply_suffix(tnum, tsuffix)?)
    };
    build_quantity(center, Some(tol))
}

fn split_suffix(text: &str) -> (&str, &str) {
    let end = text
        .find(|c: char| !c.is_ascii_alphabetic())
        .unwrap_or(text.len());
    (&text[..end], &text[end..])
}
