use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use crate::Cli;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// What a command produced, in every format, plus its exit status.
pub struct Outcome {
    pub command: &'static str,
    pub json: serde_json::Value,
    pub csv: Table,
    pub text: String,
    pub code: u8,
}

/// Rows for the CSV format, with a fixed header.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// Settings echoed into every report. The worker count is left out because it
/// must not change the output.
#[derive(Serialize)]
struct ConfigEcho<'a> {
    q_max: u64,
    precision_start_bits: u32,
    prefilter_tolerance: &'a str,
    format: Format,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    tool_version: &'static str,
    command: &'static str,
    config: ConfigEcho<'a>,
    result: &'a serde_json::Value,
}

pub fn render(cli: &Cli, outcome: &Outcome) -> Result<Vec<u8>, Box<dyn std::error::Error>> {
    Ok(match cli.format {
        Format::Json => {
            let env = Envelope {
                schema: 1,
                tool_version: env!("CARGO_PKG_VERSION"),
                command: outcome.command,
                config: ConfigEcho {
                    q_max: cli.q_max,
                    precision_start_bits: cli.prec_bits,
                    prefilter_tolerance: &cli.tolerance,
                    format: cli.format,
                },
                result: &outcome.json,
            };
            let mut v = serde_json::to_vec_pretty(&env)?;
            v.push(b'\n');
            v
        }
        Format::Csv => outcome.csv.render()?,
        Format::Text => {
            let mut t = outcome.text.clone().into_bytes();
            if !t.ends_with(b"\n") {
                t.push(b'\n');
            }
            t
        }
    })
}

pub fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), Box<dyn std::error::Error>> {
    let bytes = render(cli, outcome)?;
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}
