use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::args::{Common, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] ghostdim::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Lib(e) if e.is_budget() => ExitCode::from(3),
            CliError::Lib(_) | CliError::Usage(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(1),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn open(common: &Common) -> CliResult<Box<dyn Write>> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// The configuration echo attached to every output.
pub struct Meta {
    fields: Map<String, Value>,
    enabled: bool,
}

impl Meta {
    pub fn new(command: &str, common: &Common) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        fields.insert("q".into(), json!(common.q));
        fields.insert("digits".into(), json!(common.digits));
        fields.insert("budget".into(), json!(common.budget));
        Meta {
            fields,
            enabled: !common.no_meta,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    fn stamped(&self) -> Map<String, Value> {
        let mut fields = self.fields.clone();
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        fields.insert("generated_at".into(), json!(now));
        fields
    }

    /// `# key=value` lines ahead of a CSV header.
    pub fn write_csv_comments(&self, out: &mut dyn Write) -> io::Result<()> {
        if !self.enabled {
            return Ok(());
        }
        for (k, v) in self.stamped() {
            writeln!(out, "# {k}={v}")?;
        }
        Ok(())
    }

    /// Writes `{"meta": …, <body fields>}`.
    pub fn write_json(&self, out: &mut dyn Write, body: Map<String, Value>) -> io::Result<()> {
        let mut doc = Map::new();
        if self.enabled {
            doc.insert("meta".into(), Value::Object(self.stamped()));
        }
        doc.extend(body);
        serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
        writeln!(out)
    }
}

/// Writes either a CSV body (after the meta comments) or a JSON document.
pub fn emit(
    common: &Common,
    meta: &Meta,
    csv: impl FnOnce(&mut dyn Write) -> io::Result<()>,
    json: impl FnOnce() -> Map<String, Value>,
) -> CliResult<()> {
    let mut out = open(common)?;
    match common.format {
        Format::Csv => {
            meta.write_csv_comments(&mut out)?;
            csv(&mut out)?;
        }
        Format::Json => meta.write_json(&mut out, json())?,
    }
    out.flush()?;
    Ok(())
}
