//! Output files are written to a temporary file in the target directory and
//! renamed into place.

use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use tempfile::NamedTempFile;

fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes to `path`, or stdout when there is none.
pub fn emit_text(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn csv_bytes(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn emit_table(path: Option<&Path>, header: &[String], rows: &[(Vec<String>, f64)]) -> anyhow::Result<()> {
    let bytes = csv_bytes(
        header,
        rows.iter()
            .map(|(k, p)| k.iter().cloned().chain([p.to_string()]).collect()),
    )?;
    emit_text(path, std::str::from_utf8(&bytes)?)
}

pub fn emit_trace(path: &Path, column: &str, rows: &[(u64, f64)]) -> anyhow::Result<()> {
    let header = ["t".to_string(), column.to_string()];
    let bytes = csv_bytes(&header, rows.iter().map(|(t, v)| vec![t.to_string(), v.to_string()]))?;
    write_atomic(path, &bytes)
}
