//! Fixed-schema CSV and JSON output.

use std::io::Write;

use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::moebius2d::FrequencyResult;

pub const SIGNIFICANT_DIGITS: usize = 6;

/// `%g`-style formatting with six significant digits.
pub fn format_sig(x: f64) -> String {
    format_sig_digits(x, SIGNIFICANT_DIGITS)
}

pub fn format_sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let p = digits.max(1);
    // Round first so the exponent reflects carries such as 9.999995 -> 10.
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One output row; empty strings are blank cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub id: String,
    pub ls: String,
    pub ld: String,
    pub method: String,
    pub value: String,
    pub error: String,
    pub samples: String,
    pub seed: String,
    pub runtime_ms: String,
}

pub const HEADER: [&str; 9] = [
    "id",
    "ls",
    "ld",
    "method",
    "value",
    "error",
    "samples",
    "seed",
    "runtime_ms",
];

impl Row {
    pub fn frequency(
        entry: &CatalogEntry,
        result: &FrequencyResult,
        seed: Option<u64>,
        runtime_ms: Option<u128>,
    ) -> Row {
        Row {
            id: entry.id.clone(),
            ls: entry.ls.to_string(),
            ld: entry.ld.to_string(),
            method: result.method.as_str().to_string(),
            value: format_sig(result.value),
            error: format_sig(result.error),
            samples: result.samples.to_string(),
            seed: seed.map(|s| s.to_string()).unwrap_or_default(),
            runtime_ms: runtime_ms.map(|t| t.to_string()).unwrap_or_default(),
        }
    }

    /// Summary row without face-specific columns.
    pub fn summary(id: &str, method: &str, value: f64, error: f64) -> Row {
        Row {
            id: id.to_string(),
            ls: String::new(),
            ld: String::new(),
            method: method.to_string(),
            value: format_sig(value),
            error: format_sig(error),
            samples: String::new(),
            seed: String::new(),
            runtime_ms: String::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_rows<W: Write>(out: W, rows: &[Row], format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            if rows.is_empty() {
                w.write_record(HEADER)?;
            }
            w.flush()
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)
        }
    }
}

/// Writes an arbitrary table with the given header as CSV.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.287_682_072_451_781), "0.287682");
        assert_eq!(format_sig(0.415_037_499_278_844), "0.415037");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1234567.0), "1.23457e+06");
        assert_eq!(format_sig(0.000_012_345_67), "1.23457e-05");
        assert_eq!(format_sig(0.000_123_456_7), "0.000123457");
        assert_eq!(format_sig(9.999_999_9), "10");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(100.0), "100");
    }

    #[test]
    fn csv_has_fixed_header() {
        let mut buf = Vec::new();
        write_rows(
            &mut buf,
            &[Row::summary("x", "ratio", 1.5, 0.25)],
            Format::Csv,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "id,ls,ld,method,value,error,samples,seed,runtime_ms\nx,,,ratio,1.5,0.25,,,\n"
        );
        let mut empty = Vec::new();
        write_rows(&mut empty, &[], Format::Csv).unwrap();
        assert!(String::from_utf8(empty).unwrap().starts_with("id,ls"));
    }
}
