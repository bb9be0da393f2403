use std::fmt::Write;

use anyhow::Result;
use symwalk_core::verify::{CheckOutcome, CHECKS};
use symwalk_core::CharTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// A small header-plus-rows table rendered as CSV or tab-separated text.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<const N: usize>(&mut self, row: [String; N]) {
        self.rows.push(row.to_vec());
    }

    pub fn render(&self, format: Format, quiet: bool) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                for row in std::iter::once(&self.header).chain(&self.rows) {
                    let line: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
            }
            _ => {
                if !quiet {
                    out.push_str(&self.header.join("\t"));
                    out.push('\n');
                }
                for row in &self.rows {
                    out.push_str(&row.join("\t"));
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn plain_char_table(table: &CharTable) -> String {
    let labels: Vec<String> = table.order.iter().map(|p| p.to_string()).collect();
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    let label_w = labels.iter().map(|s| s.len()).max().unwrap_or(0);
    let col_w: Vec<usize> = (0..labels.len())
        .map(|c| {
            cells
                .iter()
                .map(|r| r[c].len())
                .chain(std::iter::once(labels[c].len()))
                .max()
                .unwrap_or(1)
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:label_w$}", "");
    for (c, l) in labels.iter().enumerate() {
        let _ = write!(out, "  {:>w$}", l, w = col_w[c]);
    }
    out.push('\n');
    for (r, row) in cells.iter().enumerate() {
        let _ = write!(out, "{:label_w$}", labels[r]);
        for (c, v) in row.iter().enumerate() {
            let _ = write!(out, "  {:>w$}", v, w = col_w[c]);
        }
        out.push('\n');
    }
    out
}

pub fn verify_report(
    outcomes: &[CheckOutcome],
    nmax: usize,
    format: Format,
    quiet: bool,
) -> Result<String> {
    match format {
        Format::Json => {
            let entries: Vec<_> = outcomes
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "check": o.name,
                        "n": o.n,
                        "passed": o.passed(),
                        "detail": o.result.as_ref().err(),
                        "ms": o.elapsed.as_millis() as u64,
                    })
                })
                .collect();
            Ok(format!("{}\n", serde_json::to_string(&entries)?))
        }
        Format::Csv => {
            let mut t = Table::new(["check", "n", "passed", "detail"]);
            for o in outcomes {
                t.push([
                    o.name.to_string(),
                    o.n.to_string(),
                    o.passed().to_string(),
                    o.result.as_ref().err().cloned().unwrap_or_default(),
                ]);
            }
            Ok(t.render(Format::Csv, quiet))
        }
        Format::Plain => {
            let mut out = String::new();
            let name_w = CHECKS.iter().map(|c| c.0.len()).max().unwrap_or(0);
            if !quiet {
                let _ = write!(out, "{:name_w$}", "check");
                for n in 2..=nmax {
                    let _ = write!(out, " {:>4}", format!("n={n}"));
                }
                out.push('\n');
                for &(name, ..) in CHECKS {
                    let _ = write!(out, "{name:name_w$}");
                    for n in 2..=nmax {
                        let cell = match outcomes.iter().find(|o| o.name == name && o.n == n) {
                            Some(o) if o.passed() => "pass",
                            Some(_) => "FAIL",
                            None => "-",
                        };
                        let _ = write!(out, " {cell:>4}");
                    }
                    out.push('\n');
                }
            }
            for o in outcomes.iter().filter(|o| !o.passed()) {
                let _ = writeln!(
                    out,
                    "FAIL {} n={}: {}",
                    o.name,
                    o.n,
                    o.result.as_ref().err().map(String::as_str).unwrap_or("")
                );
            }
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            if !quiet || failed > 0 {
                let _ = writeln!(out, "{} checks, {} failed", outcomes.len(), failed);
            }
            Ok(out)
        }
    }
}
