//! Verification reports and their text and JSON renderings.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use soliton_core::certify::CheckRecord;
use soliton_core::symbolic::ZeroConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct Report {
    pub version: String,
    pub input_sha256: String,
    pub config: ZeroConfig,
    /// Sorted by id; ties keep emission order.
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn digest(inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

impl Report {
    pub fn new(inputs: &[Vec<u8>], config: ZeroConfig, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report {
            version: VERSION.to_string(),
            input_sha256: digest(inputs),
            config,
            checks,
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.outcome.is_failed())
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_value(&self) -> Value {
        let checks: Vec<Value> = self.checks.iter().map(record_value).collect();
        json!({
            "version": self.version,
            "input_sha256": self.input_sha256,
            "config": {
                "samples": self.config.samples.to_string(),
                "tol": num(self.config.tol),
                "seed": self.config.seed.to_string(),
            },
            "checks": checks,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "soliton-forge {}\ninput sha256 {}\nsamples {}  tol {}  seed {:#x}\n\n",
            self.version,
            self.input_sha256,
            self.config.samples,
            num(self.config.tol),
            self.config.seed
        );
        if self.checks.is_empty() {
            out.push_str("no checks\n");
            return out;
        }
        let wid = self.checks.iter().map(|c| c.id.chars().count()).max().unwrap_or(0).max(2);
        let wv = self.checks.iter().map(|c| c.outcome.as_str().len()).max().unwrap_or(0).max(7);
        out.push_str(&format!("{:wid$}  {:wv$}  WITNESSES\n", "ID", "VERDICT"));
        let indent = " ".repeat(wid + wv + 4);
        for c in &self.checks {
            let w: Vec<String> = c.witnesses.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            out.push_str(format!("{:wid$}  {:wv$}  {}", c.id, c.outcome.as_str(), w.join("; ")).trim_end());
            out.push('\n');
            if c.outcome.is_failed() {
                if let Some(r) = &c.residual {
                    if let Some((comp, e)) = &r.worst {
                        out.push_str(&format!("{indent}residual {comp}: {e}  (max |r| = {})\n", num(r.max_abs)));
                    }
                }
            }
        }
        let failed = self.checks.iter().filter(|c| c.outcome.is_failed()).count();
        out.push_str(&format!("\n{} checks, {failed} failed\n", self.checks.len()));
        out
    }
}

fn record_value(c: &CheckRecord) -> Value {
    let witnesses: Map<String, Value> = c.witnesses.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let failed = c.outcome.is_failed();
    let residual = match &c.residual {
        None => Value::Null,
        Some(r) => {
            let worst = r.worst.as_ref().filter(|_| failed);
            json!({
                "max_abs": num(r.max_abs),
                "samples": r.samples.to_string(),
                "component": worst.map(|w| w.0.clone()),
                "expression": worst.map(|w| w.1.to_string()),
            })
        }
    };
    json!({
        "id": c.id,
        "anchor": c.anchor,
        "verdict": c.outcome.as_str(),
        "witnesses": witnesses,
        "residual": residual,
    })
}
