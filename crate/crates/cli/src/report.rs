//! Report envelope shared by every command.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// SHA-256 over the command line and the bytes of every input file.
    pub inputs_digest: String,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub wall_time_ms: f64,
    pub result: Value,
    #[serde(skip)]
    pub table: String,
    #[serde(skip)]
    pub exit_code: i32,
}

pub fn digest(command: &str, inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    for bytes in inputs {
        h.update(b"\n");
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: String, inputs: &[&[u8]], result: Value) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            inputs_digest: digest(&command, inputs),
            command,
            seed: None,
            tolerances: BTreeMap::new(),
            wall_time_ms: 0.0,
            result,
            table: String::new(),
            exit_code: 0,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn tolerance(mut self, name: &'static str, value: f64) -> Self {
        self.tolerances.insert(name, value);
        self
    }

    pub fn table(mut self, table: String) -> Self {
        self.table = table;
        self
    }

    pub fn exit_code(mut self, code: i32) -> Self {
        self.exit_code = code;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Header lines followed by the command's own table.
    pub fn to_table(&self) -> String {
        let mut out = format!("{} {}  {}\n", self.tool, self.version, self.command);
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed          {seed}\n"));
        }
        for (name, value) in &self.tolerances {
            out.push_str(&format!("{name:<13} {value:e}\n"));
        }
        out.push_str(&format!("digest        {}\n", &self.inputs_digest[..16]));
        out.push_str(&format!("wall time     {:.1} ms\n\n", self.wall_time_ms));
        out.push_str(&self.table);
        out
    }
}
