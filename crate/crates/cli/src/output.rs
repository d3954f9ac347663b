use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use graphsa::{Certificate, Verdict};

pub const CLI_SCHEMA: &str = "graphsa/cli-report/1";

/// What every subcommand prints: the echoed configuration, its certificates
/// and command-specific data fields at the top level.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub banner: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    #[serde(flatten)]
    pub data: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Report {
    pub fn new(command: &str, config: Value, seed: u64) -> Self {
        Report {
            schema: CLI_SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            config,
            seed,
            verdict: Verdict::Pass,
            banner: None,
            certificates: Vec::new(),
            data: Map::new(),
            timestamp: None,
        }
    }

    pub fn certify(&mut self, c: Certificate) {
        self.verdict = self.verdict.and(c.verdict);
        self.certificates.push(c);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.data.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn emit(&self, file: Option<&Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        println!("{text}");
        if let Some(path) = file {
            std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
