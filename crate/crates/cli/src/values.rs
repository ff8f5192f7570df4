//! Parsing of numeric flag values: plain floats, multiples of π, state
//! aliases, comma lists and `start:stop:step` ranges.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use qfb_core::campaign::linspace;

#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// `1.5`, `pi`, `-pi/2`, `3pi/4`, `2*pi`, `1.5pi`.
pub fn parse_number(raw: &str) -> Result<f64, UsageError> {
    let s = raw.trim().to_ascii_lowercase();
    let value = match s.find("pi") {
        None => s.parse::<f64>().map_err(|_| usage(format!("not a number: {raw:?}")))?,
        Some(at) => {
            let head = s[..at].trim_end_matches('*').trim();
            let tail = s[at + 2..].trim();
            let coef = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().map_err(|_| usage(format!("bad multiple of pi: {raw:?}")))?,
            };
            let den = if tail.is_empty() {
                1.0
            } else {
                let d = tail
                    .strip_prefix('/')
                    .ok_or_else(|| usage(format!("bad multiple of pi: {raw:?}")))?;
                d.trim().parse::<f64>().map_err(|_| usage(format!("bad divisor: {raw:?}")))?
            };
            coef * PI / den
        }
    };
    if !value.is_finite() {
        return Err(usage(format!("value must be finite: {raw:?}")));
    }
    Ok(value)
}

/// Initial-state angle, with the three named states.
pub fn parse_alpha(raw: &str) -> Result<f64, UsageError> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "ground" | "g" => Ok(0.0),
        "superposition" | "sup" => Ok(FRAC_PI_4),
        "excited" | "e" => Ok(FRAC_PI_2),
        _ => parse_number(raw),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, UsageError> {
        let r = Range { start, stop, step };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(usage("range bounds must be finite"));
        }
        if self.step <= 0.0 {
            return Err(usage(format!("step must be positive, got {}", self.step)));
        }
        if self.start >= self.stop {
            return Err(usage(format!("start {} must be below stop {}", self.start, self.stop)));
        }
        Ok(())
    }

    /// Intervals on the grid: the step is rounded so both ends are hit exactly.
    pub fn intervals(&self) -> usize {
        (((self.stop - self.start) / self.step).round() as usize).max(1)
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.intervals())
    }
}

pub fn parse_range(raw: &str, item: fn(&str) -> Result<f64, UsageError>) -> Result<Range, UsageError> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("range must be start:stop:step, got {raw:?}")));
    }
    Range::new(item(parts[0])?, item(parts[1])?, parse_number(parts[2])?)
}

/// Comma separated items, each either a single value or a `start:stop:step` range.
pub fn parse_list(raw: &str, item: fn(&str) -> Result<f64, UsageError>) -> Result<Vec<f64>, UsageError> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(usage(format!("empty entry in list {raw:?}")));
        }
        if part.contains(':') {
            out.extend(parse_range(part, item)?.values());
        } else {
            out.push(item(part)?);
        }
    }
    Ok(out)
}

pub fn parse_number_list(raw: &str) -> Result<Vec<f64>, UsageError> {
    parse_list(raw, parse_number)
}

pub fn parse_alpha_list(raw: &str) -> Result<Vec<f64>, UsageError> {
    parse_list(raw, parse_alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_pi_multiples() {
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert_eq!(parse_number("-1").unwrap(), -1.0);
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert_eq!(parse_number("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_number("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_number("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_number(" PI/40 ").unwrap(), PI / 40.0);
        assert!(parse_number("pie").is_err());
        assert!(parse_number("x").is_err());
        assert!(parse_number("inf").is_err());
        assert!(parse_number("pi/0").is_err());
    }

    #[test]
    fn alpha_aliases() {
        assert_eq!(parse_alpha("ground").unwrap(), 0.0);
        assert_eq!(parse_alpha("superposition").unwrap(), FRAC_PI_4);
        assert_eq!(parse_alpha("Excited").unwrap(), FRAC_PI_2);
        assert_eq!(parse_alpha("0.3").unwrap(), 0.3);
    }

    #[test]
    fn range_hits_both_ends() {
        let v = Range::new(0.0, 6.0, 0.01).unwrap().values();
        assert_eq!(v.len(), 601);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[600], 6.0);
        let v = Range::new(-1.0, 1.0, 0.01).unwrap().values();
        assert_eq!(v.len(), 201);
        assert_eq!(v[100], 0.0);
        let v = parse_range("0:2pi:0.02", parse_number).unwrap().values();
        assert_eq!(v.len(), 315);
        assert_eq!(*v.last().unwrap(), 2.0 * PI);
    }

    #[test]
    fn bad_ranges_rejected() {
        assert!(Range::new(1.0, 0.0, 0.1).is_err());
        assert!(Range::new(0.0, 1.0, 0.0).is_err());
        assert!(Range::new(0.0, 1.0, -0.1).is_err());
        assert!(parse_range("0:1", parse_number).is_err());
    }

    #[test]
    fn lists_mix_items_and_ranges() {
        let v = parse_alpha_list("ground,0:1:0.5,excited").unwrap();
        assert_eq!(v, vec![0.0, 0.0, 0.5, 1.0, FRAC_PI_2]);
        assert!(parse_alpha_list("ground,,excited").is_err());
    }
}
