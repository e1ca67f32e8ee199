//! Report sinks: JSON lines, CSV with fixed columns, or plain text.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Sink {
    format: Format,
    out: Box<dyn Write + Send>,
    columns: &'static [&'static str],
}

impl Sink {
    /// Writes the header line that echoes the resolved configuration.
    pub fn new(format: Format, mut out: Box<dyn Write + Send>, header: &Value) -> io::Result<Sink> {
        match format {
            Format::Json => writeln!(out, "{header}")?,
            Format::Csv | Format::Text => writeln!(out, "# {header}")?,
        }
        Ok(Sink {
            format,
            out,
            columns: &[],
        })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// Fixes the CSV columns for the following rows.
    pub fn table(&mut self, columns: &'static [&'static str]) -> io::Result<()> {
        self.columns = columns;
        if self.format == Format::Csv {
            self.csv_record(columns)?;
        }
        Ok(())
    }

    /// One record. JSON writes the whole object, CSV and text only the
    /// table columns.
    pub fn row(&mut self, record: &Value) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{record}"),
            Format::Csv => {
                let fields: Vec<String> =
                    self.columns.iter().map(|c| cell(record.get(*c))).collect();
                self.csv_record(&fields)
            }
            Format::Text => {
                let fields: Vec<String> = self
                    .columns
                    .iter()
                    .map(|c| format!("{c}={}", cell(record.get(*c))))
                    .collect();
                writeln!(self.out, "{}", fields.join(" "))
            }
        }
    }

    /// Raw text, written only in text mode.
    pub fn text(&mut self, s: &str) -> io::Result<()> {
        if self.format == Format::Text {
            self.out.write_all(s.as_bytes())?;
            if !s.ends_with('\n') {
                writeln!(self.out)?;
            }
        }
        Ok(())
    }

    fn csv_record<I: IntoIterator<Item = T>, T: AsRef<[u8]>>(
        &mut self,
        fields: I,
    ) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(fields)?;
        let buf = w.into_inner().map_err(|e| e.into_error())?;
        self.out.write_all(&buf)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(items)) if items.iter().all(Value::is_string) => items
            .iter()
            .filter_map(Value::as_str)
            .collect::<Vec<_>>()
            .join(";"),
        Some(other) => other.to_string(),
    }
}
