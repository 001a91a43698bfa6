use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, inputs: &[&PathBuf], config: serde_json::Value, seed: Option<u64>, started: Instant) -> Self {
        RunManifest {
            command: command.into(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}
