//! Deterministic text output: fixed-precision floats, CSV files, and the
//! parameter sidecar. Same flags in, identical bytes out.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::AppError;

/// A float with `sig` significant digits in scientific notation. NaN prints
/// as `NaN` (the singularity marker survives the round trip to CSV).
pub fn fmt_float(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    format!("{:.*e}", sig.saturating_sub(1), x)
}

pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

pub fn write_csv(
    path: &Path,
    header: &[String],
    rows: &[Vec<Cell>],
    sig: usize,
) -> Result<(), AppError> {
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => fmt_float(*v, sig),
            })
            .collect();
        buf.push_str(&line.join(","));
        buf.push('\n');
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(buf.as_bytes())?;
    Ok(())
}

/// Sidecar of resolved parameters, one `key = value` per line, sorted. No
/// timestamps anywhere: data files and metadata are both reproducible.
pub fn write_sidecar(
    path: &Path,
    command: &str,
    resolved: &BTreeMap<String, String>,
) -> Result<(), AppError> {
    let mut buf = format!("command = {command}\n");
    for (k, v) in resolved {
        buf.push_str(&format!("{k} = {v}\n"));
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(buf.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_stable() {
        assert_eq!(fmt_float(7.0 / 6.0, 12), "1.16666666667e0");
        assert_eq!(fmt_float(-0.125, 12), "-1.25000000000e-1");
        assert_eq!(fmt_float(f64::NAN, 12), "NaN");
        assert_eq!(fmt_float(0.0, 6), "0.00000e0");
        assert_eq!(fmt_float(1.5e300, 3), "1.50e300");
    }
}
