//! CSV and JSON rendering of run payloads. Both formats carry the tool
//! version, the canonical config and the seed.

use serde_json::{Map, Value};

use super::config::{ExperimentConfig, OutputFormat};

pub const TOOL_NAME: &str = "collatz-lab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    /// Integers that may not fit `u64`; JSON keeps them as strings.
    BigInt(String),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::BigInt(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::BigInt(s) | Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(u64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Result of one subcommand, independent of output format.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Payload {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// JSON-only fields, such as full lists that CSV reduces to counts.
    pub extras: Vec<(&'static str, Value)>,
    /// Summary lines, emitted as CSV comments and as a JSON array.
    pub notes: Vec<String>,
}

impl Payload {
    pub fn new(columns: &[&'static str]) -> Self {
        Payload {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn extra(&mut self, key: &'static str, value: Value) {
        self.extras.push((key, value));
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }
}

pub fn render(payload: &Payload, config: &ExperimentConfig) -> String {
    match config.format_or_default() {
        OutputFormat::Csv => render_csv(payload, config),
        OutputFormat::Json => render_json(payload, config),
    }
}

fn render_csv(payload: &Payload, config: &ExperimentConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {TOOL_NAME} {TOOL_VERSION}\n"));
    out.push_str(&format!("# config: {}\n", config.canonical()));
    out.push_str(&format!("# seed: {}\n", config.seed_or_default()));
    for note in &payload.notes {
        out.push_str(&format!("# {note}\n"));
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(&payload.columns)
        .expect("writing to memory");
    for row in &payload.rows {
        writer
            .write_record(row.iter().map(Cell::csv_text))
            .expect("writing to memory");
    }
    let bytes = writer.into_inner().expect("flushing to memory");
    out.push_str(&String::from_utf8(bytes).expect("csv of utf-8 cells"));
    out
}

fn render_json(payload: &Payload, config: &ExperimentConfig) -> String {
    let mut cfg = Map::new();
    cfg.insert("command".into(), Value::from(config.command.as_str()));
    for (key, value) in config.entries() {
        if !super::config::EXECUTION_KEYS.contains(&key) {
            cfg.insert(key.into(), Value::from(value));
        }
    }
    let rows: Vec<Value> = payload
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = payload
                .columns
                .iter()
                .zip(row)
                .map(|(c, cell)| (c.to_string(), cell.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("tool".into(), Value::from(TOOL_NAME));
    doc.insert("version".into(), Value::from(TOOL_VERSION));
    doc.insert("config".into(), Value::Object(cfg));
    doc.insert("seed".into(), Value::from(config.seed_or_default()));
    doc.insert(
        "columns".into(),
        Value::from(payload.columns.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    );
    doc.insert("rows".into(), Value::Array(rows));
    doc.insert("notes".into(), Value::from(payload.notes.clone()));
    for (key, value) in &payload.extras {
        doc.insert(key.to_string(), value.clone());
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json of plain values");
    text.push('\n');
    text
}
