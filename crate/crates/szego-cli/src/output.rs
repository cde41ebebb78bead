use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::manifest::ExperimentManifest;

/// Output directory whose files are each written once, atomically.
pub struct OutputDir {
    root: PathBuf,
    header: Vec<String>,
    stamp: Value,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(manifest: &ExperimentManifest) -> Result<Self> {
        let root = manifest.out_dir.clone();
        fs::create_dir_all(&root).map_err(|e| CliError::io(&root, e))?;
        Ok(Self { root, header: manifest.header(), stamp: manifest.stamp(), written: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    /// Write-then-rename inside the target directory.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let target = self.root.join(name);
        let dir = target.parent().unwrap_or(&self.root).to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let file_name = target.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let tmp = dir.join(format!(".{file_name}.tmp"));
        {
            let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
            f.write_all(contents.as_bytes()).map_err(|e| CliError::io(&tmp, e))?;
            f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
        }
        fs::rename(&tmp, &target).map_err(|e| CliError::io(&target, e))?;
        self.written.push(target.clone());
        Ok(target)
    }

    /// JSON object with the manifest stamp under `manifest`.
    pub fn write_json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<PathBuf> {
        let mut v = serde_json::to_value(body).map_err(|e| CliError::Config(e.to_string()))?;
        match &mut v {
            Value::Object(m) => {
                m.insert("manifest".into(), self.stamp.clone());
            }
            other => {
                v = serde_json::json!({ "manifest": self.stamp.clone(), "data": other.clone() });
            }
        }
        let mut text = serde_json::to_string_pretty(&v).map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    /// `#` comment header, a column line, then rows.
    pub fn write_table(&mut self, name: &str, columns: &[&str], rows: &[Vec<String>], sep: &str) -> Result<PathBuf> {
        let mut s = String::new();
        for h in &self.header {
            s.push_str("# ");
            s.push_str(h);
            s.push('\n');
        }
        if sep == "," {
            s.push_str(&columns.join(","));
        } else {
            s.push_str("# ");
            s.push_str(&columns.join(" "));
        }
        s.push('\n');
        for r in rows {
            s.push_str(&r.join(sep));
            s.push('\n');
        }
        self.write(name, &s)
    }

    pub fn write_csv(&mut self, name: &str, columns: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
        self.write_table(name, columns, rows, ",")
    }

    /// Two-column plot data.
    pub fn write_dat(&mut self, name: &str, columns: [&str; 2], points: &[(f64, f64)]) -> Result<PathBuf> {
        let rows: Vec<Vec<String>> = points.iter().map(|(x, y)| vec![num(*x), num(*y)]).collect();
        self.write_table(name, &columns, &rows, " ")
    }
}

/// Shortest round-trip formatting, scientific outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(1e-12), "1e-12");
        assert_eq!(num(-2.5e20), "-2.5e20");
        assert_eq!(num(f64::NAN), "NaN");
        for x in [1e-12, 0.3, 123456.789, -7.25e-9] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
