use std::io::Write;

use serde_json::{json, Value};

use crate::args::Format;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything a command produces, renderable in each output format.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub text: Vec<String>,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &'static str, params: Value) -> Self {
        Self {
            command,
            params,
            results: Value::Null,
            checks: Vec::new(),
            text: Vec::new(),
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let checks: Vec<Value> = self
                    .checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect();
                let doc = json!({
                    "command": self.command,
                    "params": self.params,
                    "results": self.results,
                    "checks": checks,
                    "tool_version": env!("CARGO_PKG_VERSION"),
                });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.csv_header)?;
                for row in &self.csv_rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Text => {
                for line in &self.text {
                    writeln!(out, "{line}")?;
                }
                for c in &self.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(out, "check {}: {status} {}", c.name, c.detail)?;
                }
                Ok(())
            }
        }
    }
}
