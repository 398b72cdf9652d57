//! CSV tables and JSON sidecars.

use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};
use crate::run::Cell;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Comma-separated table with a header line.
pub fn render_csv(header: &[String], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `results.csv` → `results.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn write(path: &Path, text: &str) -> Result<()> {
    let io = |source| HarnessError::Io { path: path.display().to_string(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut f = std::fs::File::create(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)
}

/// Writes the CSV and its sidecar, or prints the CSV when `out` is `None`.
pub fn emit(out: Option<&Path>, header: &[String], rows: &[Vec<Cell>], sidecar: Value) -> Result<()> {
    let csv = render_csv(header, rows);
    match out {
        Some(path) => {
            write(path, &csv)?;
            let text = serde_json::to_string_pretty(&sidecar).expect("serializable");
            write(&sidecar_path(path), &(text + "\n"))
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

/// Common sidecar fields.
pub fn sidecar(command: &str, resolved: Value, seed: Option<u64>, extra: Value) -> Value {
    let mut v = json!({
        "command": command,
        "version": VERSION,
        "seed": seed,
        "parameters": resolved,
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
        dst.extend(src);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let header = vec!["kappa[rad/s]".to_string(), "fidelity[1]".to_string()];
        let rows = vec![vec![Cell::Number(1.5), Cell::Number(0.25)], vec![Cell::Number(2.0), Cell::Label("x")]];
        assert_eq!(render_csv(&header, &rows), "kappa[rad/s],fidelity[1]\n1.5e0,2.5e-1\n2e0,x\n");
    }

    #[test]
    fn sidecar_next_to_csv() {
        assert_eq!(sidecar_path(Path::new("out/run.csv")), PathBuf::from("out/run.json"));
    }
}
