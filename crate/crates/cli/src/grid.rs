//! Parsing of numeric lists and ranges given on the command line.

use sgad_core::{Error, Result};

/// Values are snapped to this many decimals so that `0:1:0.1` yields `0.3`
/// and not `0.30000000000000004`.
const SNAP: f64 = 1e12;

fn snap(x: f64) -> f64 {
    (x * SNAP).round() / SNAP
}

/// Inclusive range `start..=stop` in steps of `step`.
pub fn range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
    }
    if !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidInput(format!("empty grid {start}:{stop}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| snap(start + i as f64 * step)).collect())
}

fn number(s: &str) -> Result<f64> {
    let s = s.trim();
    match s {
        "inf" | "∞" => Ok(f64::INFINITY),
        _ => s
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("'{s}' is not a number"))),
    }
}

/// Comma-separated items, each a number or a `start:stop:step` range.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(number(x)?),
            [a, b, c] => out.extend(range(number(a)?, number(b)?, number(c)?)?),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "'{item}' is neither a number nor start:stop:step"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput(format!("no values in '{text}'")));
    }
    Ok(out)
}

/// `lo:hi` with `lo < hi`.
pub fn parse_bracket(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if let [a, b] = parts.as_slice() {
        let (lo, hi) = (number(a)?, number(b)?);
        if lo < hi {
            return Ok((lo, hi));
        }
    }
    Err(Error::InvalidInput(format!("bracket '{text}' must be lo:hi with lo < hi")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive_and_snapped() {
        let g = range(0.0, 1.0, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(range(0.0, 1.0, 0.01).unwrap().len(), 101);
        assert!(range(0.0, 1.0, 0.0).is_err());
        assert!(range(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn lists_mix_numbers_and_ranges() {
        assert_eq!(parse_values("1, 0.95,0.9").unwrap(), vec![1.0, 0.95, 0.9]);
        assert_eq!(parse_values("0:0.2:0.1,5").unwrap(), vec![0.0, 0.1, 0.2, 5.0]);
        assert_eq!(parse_values("inf").unwrap(), vec![f64::INFINITY]);
        assert!(parse_values("a").is_err());
        assert!(parse_values("").is_err());
        assert!(parse_values("1:2").is_err());
    }

    #[test]
    fn brackets() {
        assert_eq!(parse_bracket("0.3:0.5").unwrap(), (0.3, 0.5));
        assert!(parse_bracket("0.5:0.3").is_err());
        assert!(parse_bracket("0.5").is_err());
    }
}
