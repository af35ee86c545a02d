//! Row tables and their CSV / JSON encodings.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::args::Format;
use crate::error::CliResult;
use crate::settings::Settings;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Self::Text(s.into())
    }

    /// CSV form: reals with 17 significant digits.
    fn csv(&self) -> String {
        match self {
            Self::Int(v) => v.to_string(),
            Self::Real(v) => format!("{v:.16e}"),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
            Self::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Self::Int(v) => v.to_string(),
            Self::Real(v) => serde_json::to_string(v).expect("f64 encodes"),
            Self::Text(s) => serde_json::to_string(s).expect("str encodes"),
            Self::Bool(b) => b.to_string(),
            Self::Null => "null".to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::csv))?;
        }
        out.flush()?;
        Ok(())
    }

    /// A JSON array holding one object per row, keys in column order.
    pub fn write_json<W: Write>(&self, mut w: W) -> CliResult<()> {
        let keys: Vec<String> = self
            .columns
            .iter()
            .map(|c| serde_json::to_string(c).expect("str encodes"))
            .collect();
        writeln!(w, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            write!(w, "{{")?;
            for (j, (k, cell)) in keys.iter().zip(row).enumerate() {
                if j > 0 {
                    write!(w, ",")?;
                }
                write!(w, "{k}:{}", cell.json())?;
            }
            let sep = if i + 1 < self.rows.len() { "," } else { "" };
            writeln!(w, "}}{sep}")?;
        }
        writeln!(w, "]")?;
        w.flush()?;
        Ok(())
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}

/// `dir/stem.tag.ext` beside `output`.
pub fn companion_path(output: &Path, tag: &str, format: Format) -> PathBuf {
    let stem = output.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = output
        .extension()
        .and_then(|s| s.to_str())
        .unwrap_or(format.extension());
    output.with_file_name(format!("{stem}.{tag}.{ext}"))
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(".config.toml");
    output.with_file_name(name)
}

fn write_file(path: &Path, table: &Table, format: Format) -> CliResult<()> {
    let f = File::create(path)
        .map_err(|e| crate::error::CliError::Io(format!("{}: {e}", path.display())))?;
    table.write(BufWriter::new(f), format)
}

/// Write the main table to the configured output (or stdout), any companion
/// tables beside it, and the effective-config sidecar.
pub fn emit(
    settings: &Settings,
    command: &str,
    main: &Table,
    companions: &[(&str, Table)],
) -> CliResult<()> {
    match &settings.output {
        Some(path) => {
            write_file(path, main, settings.format)?;
            for (tag, t) in companions {
                write_file(
                    &companion_path(path, tag, settings.format),
                    t,
                    settings.format,
                )?;
            }
            std::fs::write(sidecar_path(path), settings.to_toml(command))?;
        }
        None => {
            let stdout = io::stdout();
            main.write(stdout.lock(), settings.format)?;
        }
    }
    Ok(())
}
