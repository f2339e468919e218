//! Deterministic artifact emission: fixed-precision CSV floats, JSON values
//! rounded to the same precision, and staged writes so a failed run leaves
//! no partial outputs behind.

use std::fs;
use std::path::{Path, PathBuf};

use crate::AppError;

/// CSV float format: nine significant digits, exponent notation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.8e}")
}

/// Round through the nine-significant-digit text form, so JSON numbers carry
/// exactly the precision the CSVs do.
pub fn round_sig(v: f64) -> f64 {
    fmt_float(v).parse().unwrap_or(v)
}

/// Column-name-safe version of a config label.
pub fn sanitize_label(label: &str) -> String {
    let mut out: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    if out.is_empty() {
        out.push('_');
    }
    out
}

/// Artifacts accumulate in a temporary directory inside the output directory
/// and move into place together on [`OutputStage::commit`].
pub struct OutputStage {
    staging: tempfile::TempDir,
    out_dir: PathBuf,
    files: Vec<String>,
}

impl OutputStage {
    pub fn new(out_dir: &Path) -> Result<Self, AppError> {
        fs::create_dir_all(out_dir)
            .map_err(|e| AppError::invalid(format!("{}: {e}", out_dir.display())))?;
        let staging = tempfile::Builder::new()
            .prefix(".stage-")
            .tempdir_in(out_dir)
            .map_err(|e| AppError::invalid(format!("{}: {e}", out_dir.display())))?;
        Ok(Self { staging, out_dir: out_dir.to_path_buf(), files: Vec::new() })
    }

    /// Queue one named artifact.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), AppError> {
        let path = self.staging.path().join(name);
        fs::write(&path, contents)
            .map_err(|e| AppError::invalid(format!("{}: {e}", path.display())))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Rename every staged file into the output directory.
    pub fn commit(self) -> Result<(), AppError> {
        for name in &self.files {
            let from = self.staging.path().join(name);
            let to = self.out_dir.join(name);
            fs::rename(&from, &to)
                .map_err(|e| AppError::invalid(format!("{}: {e}", to.display())))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_fmt_float_is_nine_significant_digits() {
        assert_eq!(fmt_float(856.4), "8.56400000e2");
        assert_eq!(fmt_float(0.997661), "9.97661000e-1");
        assert_eq!(fmt_float(-5.0e9), "-5.00000000e9");
        assert_eq!(fmt_float(0.0), "0.00000000e0");
    }

    #[test]
    fn test_round_sig_matches_csv_precision() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333);
        assert_eq!(round_sig(856.4), 856.4);
        assert_eq!(round_sig(0.123456789123), 0.123456789);
    }

    #[test]
    fn test_sanitize_label() {
        assert_eq!(sanitize_label("Cold Att #1"), "cold_att__1");
        assert_eq!(sanitize_label("lna"), "lna");
        assert_eq!(sanitize_label(""), "_");
    }

    #[test]
    fn test_stage_commits_all_or_nothing() {
        let out = tempfile::tempdir().unwrap();
        let target = out.path().join("run");
        let mut stage = OutputStage::new(&target).unwrap();
        stage.write("a.csv", "x\n").unwrap();
        stage.write("b.json", "{}\n").unwrap();
        assert!(!target.join("a.csv").exists());
        stage.commit().unwrap();
        assert!(target.join("a.csv").exists());
        assert!(target.join("b.json").exists());

        let mut stage = OutputStage::new(&target).unwrap();
        stage.write("c.csv", "y\n").unwrap();
        drop(stage);
        assert!(!target.join("c.csv").exists());
        let leftovers: Vec<_> = fs::read_dir(&target)
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().starts_with(".stage-"))
            .collect();
        assert!(leftovers.is_empty());
    }
}
