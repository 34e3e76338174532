//! Output staging: files are rendered in memory and only written once the
//! whole run has succeeded, each through a temporary file and a rename.

use std::io::Write;
use std::path::Path;

use rydpol_core::io::fmt_sig;
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
    /// Lines for stdout, printed after the files are written.
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

impl Outputs {
    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        self.add(name, to_json(value)?);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: Table) -> Result<()> {
        self.add(name, table.into_bytes()?);
        Ok(())
    }

    pub fn commit(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        for (name, bytes) in &self.files {
            write_atomic(&dir.join(name), bytes)?;
        }
        Ok(())
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// A CSV table whose numeric cells are formatted to nine significant digits.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
}

pub enum Cell<'a> {
    Num(f64),
    Int(usize),
    Text(&'a str),
}

impl Table {
    pub fn new(header: &[&str]) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(Table { writer, width: header.len() })
    }

    pub fn row(&mut self, cells: &[Cell<'_>]) -> Result<()> {
        debug_assert_eq!(cells.len(), self.width);
        let fields: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Num(x) => fmt_sig(*x),
                Cell::Int(n) => n.to_string(),
                Cell::Text(s) => s.to_string(),
            })
            .collect();
        self.writer.write_record(&fields).map_err(|e| CliError::Io(e.to_string()))
    }

    fn into_bytes(self) -> Result<Vec<u8>> {
        self.writer.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}
