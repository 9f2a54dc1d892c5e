use codekit_core::Error;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
}

impl Status {
    pub fn of(holds: bool) -> Self {
        if holds {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

/// Exit codes of the command-line contract.
pub mod exit {
    pub const HOLDS: i32 = 0;
    pub const FAILS: i32 = 1;
    pub const UNSUPPORTED: i32 = 2;
    pub const USAGE: i32 = 3;
    pub const RESOURCE: i32 = 4;
    /// A witness or construction failed its own re-check.
    pub const INTERNAL: i32 = 5;
}

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsupported(_) => exit::UNSUPPORTED,
        Error::Resource { .. } => exit::RESOURCE,
        Error::Precondition(_) => exit::FAILS,
        Error::Internal(_) => exit::INTERNAL,
        _ => exit::USAGE,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Ordered key/value report of one subcommand.
pub struct Report {
    command: &'static str,
    status: Status,
    fields: Vec<(String, Value, bool)>,
}

impl Report {
    pub fn new(command: &'static str, status: Status) -> Self {
        Report { command, status, fields: Vec::new() }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into(), false));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into(), false));
    }

    /// A list shown one numbered item per line in text output.
    pub fn list(mut self, key: &str, items: Vec<Value>) -> Self {
        self.fields.push((key.to_string(), Value::Array(items), true));
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Holds => exit::HOLDS,
            Status::Fails => exit::FAILS,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut map = Map::new();
                map.insert("command".into(), self.command.into());
                map.insert("holds".into(), (self.status == Status::Holds).into());
                for (k, v, _) in &self.fields {
                    map.insert(k.clone(), v.clone());
                }
                serde_json::to_string_pretty(&Value::Object(map)).expect("json values serialize") + "\n"
            }
        }
    }

    fn text(&self) -> String {
        let verdict = match self.status {
            Status::Holds => "holds",
            Status::Fails => "fails",
        };
        let mut out = format!("{}: {verdict}\n", self.command);
        let width = self.fields.iter().map(|(k, ..)| k.len()).max().unwrap_or(0);
        for (k, v, multiline) in &self.fields {
            match v {
                Value::Array(items) if *multiline => {
                    out += &format!("  {k}:\n");
                    for (i, item) in items.iter().enumerate() {
                        out += &format!("    {i}: {}\n", text_value(item));
                    }
                }
                _ => out += &format!("  {k:<width$}  {}\n", text_value(v)),
            }
        }
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => format!("{{{}}}", items.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}={}", text_value(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

pub fn error_report(e: &Error, format: Format) -> String {
    match format {
        Format::Text => format!("error: {e}\n"),
        Format::Json => {
            let kind = match error_exit_code(e) {
                exit::UNSUPPORTED => "unsupported",
                exit::RESOURCE => "resource",
                exit::FAILS => "precondition",
                exit::INTERNAL => "internal",
                _ => "usage",
            };
            let v = serde_json::json!({ "error": kind, "message": e.to_string() });
            serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
        }
    }
}
