//! Atomic file output and the small text formats shared by reports.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with a leading `schema_version` field.
pub fn to_versioned_json<T: Serialize>(body: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    })?;
    s.push('\n');
    Ok(s)
}

/// CSV text from a header and numeric rows.
pub fn csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.15e}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// A gnuplot script plotting columns `ycols` against column `xcol` of a
/// comma-separated file with a header row.
pub fn gnuplot_script(csv_name: &str, title: &str, xcol: usize, ycols: &[usize]) -> String {
    let mut s = format!(
        "set datafile separator ','\nset key autotitle columnhead\nset title '{title}'\nplot "
    );
    let parts: Vec<String> = ycols
        .iter()
        .map(|y| format!("'{csv_name}' using {xcol}:{y} with points pt 7 ps 0.4"))
        .collect();
    s.push_str(&parts.join(", \\\n     "));
    s.push('\n');
    s
}
