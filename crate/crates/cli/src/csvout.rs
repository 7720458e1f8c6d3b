//! CSV emission: 12 significant digits, '.' decimal separator, LF endings,
//! atomic file replacement.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// Format with 12 significant digits, fixed notation for moderate exponents
/// and scientific otherwise (the %g convention, locale-free).
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.11e}", x);
    // Rust renders e.g. "1.23456789012e-3"; split off the exponent.
    let (mantissa, exp) = sci.split_once('e').expect("exponent in sci format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        let trimmed = if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        };
        trimmed
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

/// Header line plus numeric rows, with optional `# key=value` metadata lines
/// in front.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDocument {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvDocument {
    pub fn new(header: Vec<String>) -> Self {
        CsvDocument {
            metadata: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn push_metadata(&mut self, key: &str, value: String) {
        self.metadata.push((key.into(), value));
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.header.len());
        self.rows.push(row.to_vec());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_g12(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Write via a temporary sibling and rename, so readers never observe a
    /// partial file.
    pub fn write_atomic(&self, path: &Path) -> Result<(), CliError> {
        let rendered = self.render();
        let tmp = path.with_extension(format!(
            "{}.tmp{}",
            path.extension().and_then(|e| e.to_str()).unwrap_or("csv"),
            std::process::id()
        ));
        {
            let mut f = std::fs::File::create(&tmp)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", tmp.display())))?;
            f.write_all(rendered.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", tmp.display())))?;
            f.sync_all().ok();
        }
        std::fs::rename(&tmp, path).map_err(|e| {
            CliError::Config(format!("cannot move output into {}: {e}", path.display()))
        })?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_formats() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(1.0), "1");
        assert_eq!(format_g12(0.5), "0.5");
        assert_eq!(format_g12(-2.25), "-2.25");
        assert_eq!(format_g12(0.835), "0.835");
        assert_eq!(format_g12(1.0e15), "1e15");
        assert_eq!(format_g12(1.23e-7), "1.23e-7");
        // 12 significant digits, not more.
        assert_eq!(format_g12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_g12(1234.56789012345), "1234.56789012");
    }

    #[test]
    fn render_is_lf_terminated() {
        let mut doc = CsvDocument::new(vec!["a".into(), "b".into()]);
        doc.push_metadata("seed", "42".into());
        doc.push_row(&[1.0, 2.5]);
        let s = doc.render();
        assert_eq!(s, "# seed=42\na,b\n1,2.5\n");
        assert!(!s.contains('\r'));
    }
}
