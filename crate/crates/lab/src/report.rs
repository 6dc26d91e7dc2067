//! Structured reports with a JSON machine block and a rendered human block.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL_NAME: &str = "subentity-lab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// One line for the human block.
    pub summary: String,
    pub detail: Value,
}

impl Verdict {
    pub fn new(name: impl Into<String>, passed: bool, summary: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            passed,
            summary: summary.into(),
            detail: Value::Null,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    /// Hex SHA-256 over every input file, in argument order.
    pub input_digest: String,
    /// Reading conventions the verdicts depend on.
    pub conventions: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub data: Value,
    pub human: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, input_digest: String) -> Self {
        Report {
            command: command.into(),
            input_digest,
            conventions: Vec::new(),
            verdicts: Vec::new(),
            data: Value::Object(Map::new()),
            human: Vec::new(),
        }
    }

    pub fn convention(&mut self, text: impl Into<String>) {
        self.conventions.push(text.into());
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.human.push(text.into());
    }

    /// Inserts `key` into the data object.
    pub fn set(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.data {
            map.insert(key.to_string(), value);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn machine_block(&self) -> Value {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| json!({ "name": v.name, "passed": v.passed, "summary": v.summary, "detail": v.detail }))
            .collect();
        json!({
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "command": self.command,
            "input_digest": self.input_digest,
            "conventions": self.conventions,
            "verdicts": verdicts,
            "data": self.data,
        })
    }

    /// Pretty JSON with sorted keys, newline-terminated.
    pub fn render_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.machine_block())
            .expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn render_human(&self) -> String {
        let mut out = format!(
            "{TOOL_NAME} {TOOL_VERSION} {}\ninput sha256 {}\n",
            self.command, self.input_digest
        );
        for c in &self.conventions {
            out.push_str(&format!("convention: {c}\n"));
        }
        if !self.verdicts.is_empty() {
            out.push('\n');
        }
        let width = self
            .verdicts
            .iter()
            .map(|v| v.name.len())
            .max()
            .unwrap_or(0);
        for v in &self.verdicts {
            let mark = if v.passed { "PASS" } else { "FAIL" };
            if v.summary.is_empty() {
                out.push_str(&format!("{mark} {}\n", v.name));
            } else {
                out.push_str(&format!("{mark} {:width$}  {}\n", v.name, v.summary));
            }
        }
        if !self.human.is_empty() {
            out.push('\n');
            for l in &self.human {
                out.push_str(l);
                out.push('\n');
            }
        }
        out
    }
}

pub fn parse_machine(text: &str) -> Result<Value, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
