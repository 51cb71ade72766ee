//! JSON reports. Maps are `serde_json` objects with sorted keys and histograms serialize
//! as sorted `(value, count)` pairs, so identical runs give identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use fgver_core::polar::PolarSpace;
use serde::Serialize;
use serde_json::Value;

/// `Err` means a usage or parse error (exit status 2).
pub type Outcome = anyhow::Result<Report>;

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub params: Value,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, params: Value) -> Self {
        Verdict {
            name: name.into(),
            pass,
            params,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Geometry {
    pub q: usize,
    pub r: usize,
    pub kind: String,
    pub base_modulus: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_modulus: Option<String>,
    /// Gram matrices by role, as rows of field-element codes.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub grams: BTreeMap<String, Vec<Vec<u8>>>,
}

pub fn gram_rows(ps: &PolarSpace) -> Vec<Vec<u8>> {
    let n = ps.ctx().n();
    ps.gram().chunks(n).map(<[u8]>::to_vec).collect()
}

#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, pass: bool, params: impl Serialize) {
        let params = serde_json::to_value(params).expect("report parameters serialize");
        self.verdicts.push(Verdict::new(name, pass, params));
    }

    pub fn finish(&mut self, command: Vec<String>, elapsed_ms: Option<u64>) {
        self.command = command;
        self.elapsed_ms = elapsed_ms;
        self.pass = !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.pass);
    }

    /// Writes the full report to `out` (with a summary on stdout), or to stdout.
    pub fn emit(&self, out: Option<&Path>) -> anyhow::Result<()> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        match out {
            Some(path) => {
                std::fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
                for v in &self.verdicts {
                    println!("{:<5} {}", if v.pass { "PASS" } else { "FAIL" }, v.name);
                }
            }
            None => print!("{json}"),
        }
        Ok(())
    }
}
