//! Output sinks. Every JSON or CSV artifact starts with one header line naming
//! the tool version, the subcommand and the seed.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub flipmix: &'static str,
    pub subcommand: &'static str,
    pub seed: Option<u64>,
}

impl Header {
    pub fn new(subcommand: &'static str, seed: Option<u64>) -> Self {
        Self { flipmix: env!("CARGO_PKG_VERSION"), subcommand, seed }
    }

    fn csv_line(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!("# flipmix {} subcommand={} seed={}", self.flipmix, self.subcommand, seed)
    }
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Header line, then the body as one compact JSON line.
pub fn write_json<T: Serialize>(mut out: Box<dyn Write>, header: &Header, body: &T) -> Result<()> {
    serde_json::to_writer(&mut out, header)?;
    out.write_all(b"\n")?;
    serde_json::to_writer(&mut out, body)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Header comment line, a column row, then the records.
pub fn write_csv<R, I>(mut out: Box<dyn Write>, header: &Header, columns: &[&str], rows: I) -> Result<()>
where
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
    I: IntoIterator<Item = R>,
{
    writeln!(out, "{}", header.csv_line())?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(columns)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Summaries go to their own file when asked for, else to stderr so the main
/// artifact on stdout stays parseable.
pub fn write_summary<T: Serialize>(path: Option<&Path>, header: &Header, body: &T) -> Result<()> {
    match path {
        Some(_) => write_json(open(path)?, header, body),
        None => write_json(Box::new(io::stderr().lock()), header, body),
    }
}
