//! CSV formatting and output files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;

/// Significant digits of every number written to CSV.
pub const CSV_SIGNIFICANT_DIGITS: usize = 12;

/// Plain decimal with [`CSV_SIGNIFICANT_DIGITS`] significant digits.
///
/// ```
/// use tsteer::cli::format_decimal;
/// assert_eq!(format_decimal(0.7), "0.700000000000");
/// assert_eq!(format_decimal(1.0), "1.00000000000");
/// assert_eq!(format_decimal(-0.0), "0");
/// ```
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // round first so 9.9999999999995 moves to the next decade before counting decimals
    let rounded: f64 = format!("{:.*e}", CSV_SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float");
    let exponent = rounded.abs().log10().floor() as i64;
    let decimals = (CSV_SIGNIFICANT_DIGITS as i64 - 1 - exponent).max(0) as usize;
    format!("{rounded:.decimals$}")
}

/// Rows of already formatted fields under a header.
pub fn csv_text<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.into_iter().collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `out.csv` becomes `out.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}
