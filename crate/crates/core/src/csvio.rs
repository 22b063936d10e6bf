//! CSV emission with full-precision numbers.
//!
//! All output files use `\n` line endings and print floating-point values
//! with 17 significant digits so they round-trip bit-exactly; identical run
//! configurations therefore produce bitwise-identical files.

use std::io::Write;
use std::path::Path;

use crate::{Error, Result};

/// Format with 17 significant digits (round-trip safe for f64).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `rows` under `header`; an empty record set produces a header-only
/// file.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    write_csv_with_comment(path, None, header, rows)
}

/// Like [`write_csv`] with an optional leading `# ...` comment line.
pub fn write_csv_with_comment(
    path: &Path,
    comment: Option<&str>,
    header: &str,
    rows: &[Vec<f64>],
) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_owned(), source };
    let mut out = String::new();
    if let Some(c) = comment {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for x in row {
            if !first {
                out.push(',');
            }
            out.push_str(&fmt_f64(*x));
            first = false;
        }
        out.push('\n');
    }
    let mut file = std::fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)?;
    Ok(())
}
