use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct CommandReport {
    pub command: String,
    pub config_hash: String,
    pub results: Value,
    pub wall_time: f64,
}

impl CommandReport {
    pub fn new<C: Serialize>(command: &C, results: Value, wall_time: f64) -> Self {
        let args = serde_json::to_vec(command).expect("arguments serialize");
        let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
        Self { command: echo, config_hash: format!("{:x}", Sha256::digest(&args)), results, wall_time }
    }
}

/// What a command produced: the JSON payload, the table for humans and any
/// failed checks.
pub struct Outcome {
    pub results: Value,
    pub text: String,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new(results: impl Serialize) -> Self {
        Self { results: serde_json::to_value(results).expect("results serialize"), text: String::new(), failures: Vec::new() }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}
