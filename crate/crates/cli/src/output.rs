use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Shortest decimal that parses back to the same binary64.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// CSV table assembled in memory so its hash is known before writing.
pub struct Table {
    header: Vec<String>,
    writer: csv::Writer<Vec<u8>>,
    rows: usize,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Result<Self, CliError> {
        let header: Vec<String> = header.iter().map(|h| h.as_ref().to_string()).collect();
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&header)?;
        Ok(Self {
            header,
            writer,
            rows: 0,
        })
    }

    pub fn push<I, S>(&mut self, record: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(record)?;
        self.rows += 1;
        Ok(())
    }

    pub fn push_numbers(&mut self, values: &[f64]) -> Result<(), CliError> {
        self.push(values.iter().map(|v| num(*v)))
    }

    fn finish(self) -> Result<(Vec<String>, usize, Vec<u8>), CliError> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Io(e.into_error()))?;
        Ok((self.header, self.rows, bytes))
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    file: &'a str,
    sha256: &'a str,
    rows: usize,
    columns: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    light_label: Option<&'a str>,
    derived: &'a serde_json::Value,
    config_sha256: &'a str,
    config: &'a RunConfig,
}

/// Where outputs go plus the run's resolved configuration.
pub struct OutputSink<'a> {
    pub dir: PathBuf,
    pub subcommand: &'a str,
    pub config: &'a RunConfig,
    config_sha256: String,
}

impl<'a> OutputSink<'a> {
    pub fn new(dir: PathBuf, subcommand: &'a str, config: &'a RunConfig) -> Result<Self, CliError> {
        let canonical = serde_json::to_vec(config).map_err(qpinem::Error::from)?;
        Ok(Self {
            dir,
            subcommand,
            config,
            config_sha256: sha256_hex(&canonical),
        })
    }

    /// Write `<stem>.csv` and its `<stem>.json` sidecar; returns the CSV path.
    pub fn write(
        &self,
        stem: &str,
        table: Table,
        light_label: Option<&str>,
        derived: serde_json::Value,
    ) -> Result<PathBuf, CliError> {
        let (columns, rows, bytes) = table.finish()?;
        fs::create_dir_all(&self.dir)?;
        let csv_name = format!("{stem}.csv");
        let csv_path = self.dir.join(&csv_name);
        fs::write(&csv_path, &bytes)?;
        let digest = sha256_hex(&bytes);
        let sidecar = Sidecar {
            tool: "qpinem",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: self.subcommand,
            file: &csv_name,
            sha256: &digest,
            rows,
            columns: &columns,
            light_label,
            derived: &derived,
            config_sha256: &self.config_sha256,
            config: self.config,
        };
        let mut json = serde_json::to_vec_pretty(&sidecar).map_err(qpinem::Error::from)?;
        json.push(b'\n');
        fs::write(self.dir.join(format!("{stem}.json")), json)?;
        eprintln!(
            "wrote {} ({rows} rows, sha256 {})",
            display(&csv_path),
            &digest[..12]
        );
        Ok(csv_path)
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
