//! The JSON wrapper shared by every command.

use std::time::Duration;

use serde_json::{json, Value};

/// Output of one command, in JSON and human-readable form.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub precision_bits: Option<usize>,
    pub timing: Option<Duration>,
    pub human: String,
    /// Set when a check inside the command did not pass.
    pub failed: bool,
}

impl Envelope {
    pub fn new(command: &str, inputs: Value, outputs: Value, human: String) -> Self {
        Envelope { command: command.into(), inputs, outputs, precision_bits: None, timing: None, human, failed: false }
    }

    pub fn with_precision(mut self, bits: usize) -> Self {
        self.precision_bits = Some(bits);
        self
    }

    pub fn with_timing(mut self, elapsed: Duration) -> Self {
        self.timing = Some(elapsed);
        self
    }

    pub fn failing(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": serrehom::VERSION,
            "precision_bits": self.precision_bits,
            "timing": self.timing.map(|t| json!({ "wall_seconds": t.as_secs_f64() })),
        })
    }

    /// Pretty-printed and newline-terminated.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("envelope serializes");
        s.push('\n');
        s
    }
}
