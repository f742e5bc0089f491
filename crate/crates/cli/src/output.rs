//! Artifact writers. Every file starts with the configuration hash; floats
//! are written with 17 significant digits.

use crate::error::CliError;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Round-trip formatting of a double.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // Keeps −0 and +0 byte-identical across runs.
        return "0.0000000000000000e0".into();
    }
    format!("{x:.16e}")
}

pub struct CsvArtifact {
    pub path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvArtifact {
    /// Creates `path`, writes `# config_hash=...`, any extra comment lines,
    /// then the header row.
    pub fn create(path: &Path, hash: &str, comments: &[String], header: &[&str]) -> Result<Self, CliError> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut raw = BufWriter::new(File::create(path)?);
        writeln!(raw, "# config_hash={hash}")?;
        for c in comments {
            writeln!(raw, "# {c}")?;
        }
        let mut writer = csv::Writer::from_writer(raw);
        writer.write_record(header)?;
        Ok(Self {
            path: path.to_path_buf(),
            writer,
        })
    }

    pub fn row(&mut self, values: &[f64]) -> Result<(), CliError> {
        self.writer.write_record(values.iter().map(|v| fmt_f64(*v)))?;
        Ok(())
    }

    /// Row whose leading fields are text.
    pub fn mixed_row(&mut self, text: &[String], values: &[f64]) -> Result<(), CliError> {
        let fields: Vec<String> = text.iter().cloned().chain(values.iter().map(|v| fmt_f64(*v))).collect();
        self.writer.write_record(&fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

/// Writes `{"config_hash": .., ..body}` as pretty JSON.
pub fn write_json<T: Serialize>(path: &Path, hash: &str, body: &T) -> Result<PathBuf, CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut value = serde_json::to_value(body).map_err(|e| CliError::Failed(e.to_string()))?;
    let wrapped = match value.as_object_mut() {
        Some(map) => {
            let mut out = serde_json::Map::new();
            out.insert("config_hash".into(), hash.into());
            out.append(map);
            serde_json::Value::Object(out)
        }
        None => serde_json::json!({ "config_hash": hash, "value": value }),
    };
    let text = serde_json::to_string_pretty(&wrapped).map_err(|e| CliError::Failed(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(path.to_path_buf())
}
