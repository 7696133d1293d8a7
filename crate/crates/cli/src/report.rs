//! Uniform report envelope: one row per check, emitted as JSON, CSV or text.
//! Big numbers travel as decimal strings so JSON output round-trips exactly.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub type Row = Map<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub prec: u32,
    pub pass: bool,
    pub rows: Vec<Row>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, prec: u32) -> Self {
        Report { command: command.into(), prec, pass: true, rows: Vec::new(), summary: Map::new() }
    }

    /// Appends a row; its `pass` field (if any) feeds the overall verdict.
    pub fn push(&mut self, row: Value) {
        let Value::Object(row) = row else { panic!("rows are JSON objects") };
        if let Some(Value::Bool(false)) = row.get("pass") {
            self.pass = false;
        }
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.into(), v.into());
    }

    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| r.get("pass") == Some(&Value::Bool(false))).count()
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.rows.first() {
            w.write_record(first.keys()).unwrap();
            for r in &self.rows {
                w.write_record(r.values().map(cell)).unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    fn text(&self) -> String {
        let mut out = format!("{} (prec {})\n", self.command, self.prec);
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
            out.push_str(&line.join("  "));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}: {}\n", cell(v)));
        }
        let n = self.rows.len();
        if self.pass {
            out.push_str(&format!("PASS: {n}/{n}\n"));
        } else {
            out.push_str(&format!("FAIL: {} of {n} failed\n", self.failed()));
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
