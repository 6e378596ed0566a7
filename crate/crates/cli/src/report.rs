//! Report assembly and rendering in text, JSON and CSV.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub kind: &'static str,
    pub format: Format,
    pub status: i32,
    pub rows: Vec<Value>,
    pub summary: Map<String, Value>,
    pub errors: Vec<String>,
    #[serde(skip)]
    pub text_columns: &'static [&'static str],
}

impl Report {
    pub fn new(kind: &'static str, text_columns: &'static [&'static str]) -> Self {
        Report {
            command: std::iter::once("k3n".to_string()).chain(std::env::args().skip(1)).collect(),
            kind,
            format: Format::Text,
            status: 0,
            rows: Vec::new(),
            summary: Map::new(),
            errors: Vec::new(),
            text_columns,
        }
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.status = self.status.max(1);
        self.errors.push(message.into());
    }

    pub fn render(&self) -> String {
        match self.format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize") + "\n",
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        if !self.rows.is_empty() {
            let header: Vec<&str> = self.text_columns.to_vec();
            let table: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|r| header.iter().map(|c| cell(r.get(*c).unwrap_or(&Value::Null))).collect())
                .collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|i| table.iter().map(|r| r[i].chars().count()).chain([header[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out += &line(header.clone());
            for r in &table {
                out += &line(r.iter().map(|s| s.as_str()).collect());
            }
        }
        for (k, v) in &self.summary {
            out += &format!("{k}: {}\n", cell(v));
        }
        for e in &self.errors {
            out += &format!("error: {e}\n");
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut columns: Vec<String> = Vec::new();
        for r in &self.rows {
            if let Value::Object(m) = r {
                for k in m.keys() {
                    if !columns.contains(k) {
                        columns.push(k.clone());
                    }
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&columns).expect("in-memory csv");
        for r in &self.rows {
            let record: Vec<String> = columns.iter().map(|c| cell(r.get(c).unwrap_or(&Value::Null))).collect();
            w.write_record(&record).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}

/// Flat rendering of a value for text and CSV cells.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join("; "),
        Value::Object(m) => match (m.get("signature"), m.get("form")) {
            (Some(Value::Object(s)), Some(Value::String(f))) => {
                format!("({},{}) {f}", s.get("plus").map(cell).unwrap_or_default(), s.get("minus").map(cell).unwrap_or_default())
            }
            _ => match (m.get("plus"), m.get("minus")) {
                (Some(p), Some(q)) if m.len() == 2 => format!("({},{})", cell(p), cell(q)),
                _ => m.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect::<Vec<_>>().join(", "),
            },
        },
    }
}
