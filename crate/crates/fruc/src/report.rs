//! CSV reports and published reference numbers.

use std::fmt::Write as _;
use std::io::Write;

use fruc_core::{InterpolationMode, PsnrReport};

use crate::Result;

fn fmt_db(db: f64) -> String {
    if db.is_infinite() && db > 0.0 {
        "inf".to_string()
    } else {
        format!("{db:.2}")
    }
}

/// The report as CSV text: a `frame,psnr_db` header, one row per frame and a
/// closing `average` row. Every line ends with `\n`.
pub fn to_csv(report: &PsnrReport) -> String {
    let mut out = String::from("frame,psnr_db\n");
    for &(k, db) in &report.per_frame {
        let _ = writeln!(out, "{k},{}", fmt_db(db));
    }
    let _ = writeln!(out, "average,{}", fmt_db(report.average_db));
    out
}

pub fn write_csv<W: Write>(report: &PsnrReport, mut sink: W) -> Result<()> {
    sink.write_all(to_csv(report).as_bytes())?;
    sink.flush()?;
    Ok(())
}

/// Published average PSNR (dB) per standard CIF test sequence, as
/// `(name, unilateral, bilateral, proposed)`. The last row is the average.
pub const PUBLISHED_AVERAGES: [(&str, f64, f64, f64); 13] = [
    ("foreman", 33.30, 33.47, 34.17),
    ("football", 21.92, 22.00, 22.39),
    ("mobile", 24.94, 28.82, 26.79),
    ("flower", 29.52, 29.79, 30.40),
    ("stefan", 27.14, 27.46, 28.03),
    ("coastguard", 30.02, 32.16, 32.02),
    ("paris", 32.32, 32.16, 33.13),
    ("soccer", 28.71, 29.14, 29.72),
    ("tennis", 28.78, 28.67, 29.32),
    ("akiyo", 44.00, 45.14, 45.02),
    ("news", 35.36, 36.15, 36.38),
    ("silent", 36.00, 36.04, 36.64),
    ("average", 31.00, 31.75, 32.00),
];

/// Published value for a sequence, matched by the file stem of `name`
/// (case-insensitive, ignoring suffixes like `_cif`).
pub fn published_average(name: &str, mode: InterpolationMode) -> Option<f64> {
    let stem = std::path::Path::new(name).file_stem()?.to_str()?.to_ascii_lowercase();
    let key = stem.split(['_', '-', '.']).next()?;
    let row = PUBLISHED_AVERAGES.iter().find(|r| r.0 == key && r.0 != "average")?;
    Some(match mode {
        InterpolationMode::Unilateral => row.1,
        InterpolationMode::Bilateral => row.2,
        InterpolationMode::Proposed => row.3,
    })
}

/// One-line human summary, with the delta to the published number when the
/// sequence is a known one. Informational only.
pub fn summary_line(report: &PsnrReport) -> String {
    let mut line = format!(
        "{} [{}]: {} frames, average {} dB",
        report.sequence_name,
        report.mode,
        report.per_frame.len(),
        fmt_db(report.average_db)
    );
    if let Some(reference) = published_average(&report.sequence_name, report.mode) {
        let _ = write!(line, " (published {reference:.2}, delta {:+.2})", report.average_db - reference);
    }
    line
}
