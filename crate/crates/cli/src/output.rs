use std::fs;
use std::io::{self, Write};

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const VERSION: &str = concat!("dwork ", env!("CARGO_PKG_VERSION"));

#[derive(Serialize)]
struct Report<'a, R: Serialize> {
    version: &'static str,
    config: &'a RunConfig,
    rows: &'a [R],
    summary: &'a [String],
}

/// A row that can be rendered as a table or CSV record.
pub trait Tabular: Serialize {
    fn header() -> Vec<&'static str>;
    fn cells(&self) -> Vec<String>;
}

pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect());
    for r in rows {
        out += &line(r.iter().map(|s| s.as_str()).collect());
    }
    out
}

/// Write rows in the configured format; the summary goes with the table,
/// into the JSON document, and to stderr for CSV.
pub fn emit<R: Tabular>(cfg: &RunConfig, rows: &[R], summary: &[String], extra_table: Option<(&str, Vec<Vec<String>>)>) -> Result<(), CliError> {
    let body = match cfg.format {
        Format::Table => {
            let mut header = R::header();
            let cells = match extra_table {
                Some((extra, cells)) => {
                    header.push(extra);
                    cells
                }
                None => rows.iter().map(|r| r.cells()).collect(),
            };
            let mut s = render_table(&header, &cells);
            if !summary.is_empty() {
                s.push('\n');
                for l in summary {
                    s += l;
                    s.push('\n');
                }
            }
            s
        }
        Format::Json => {
            let report = Report { version: VERSION, config: cfg, rows, summary };
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Failed(e.to_string()))? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(R::header()).map_err(io_err)?;
            for r in rows {
                w.write_record(r.cells()).map_err(io_err)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is UTF-8")
        }
    };
    match &cfg.output {
        Some(path) => {
            fs::write(path, body).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
            if cfg.format != Format::Table {
                summary.iter().for_each(|l| println!("{l}"));
            }
        }
        None => {
            io::stdout().write_all(body.as_bytes()).map_err(|e| CliError::Failed(e.to_string()))?;
            if cfg.format == Format::Csv {
                summary.iter().for_each(|l| eprintln!("{l}"));
            }
        }
    }
    Ok(())
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Failed(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let t = render_table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\n---  --\nxyz  1\n");
    }
}
