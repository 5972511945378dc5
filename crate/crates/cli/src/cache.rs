//! Content-addressed result records, one JSON file each under `<out>/cache`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const ARTIFACT_VERSION: &str = concat!("sl2amen ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub key: String,
    pub command: String,
    pub config_hash: String,
    pub config: BTreeMap<String, String>,
    pub inputs: Value,
    pub outputs: Value,
    /// Human-readable rendering of `outputs`.
    pub text: String,
    pub exit_code: i32,
    pub created_unix: u64,
    pub elapsed_seconds: f64,
    pub artifact_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn config_hash(cfg: &RunConfig) -> String {
    sha256_hex(cfg.canonical_text().as_bytes())
}

/// Hash of the command, its canonical inputs and the resolved config.
pub fn record_key(command: &str, inputs: &Value, cfg: &RunConfig) -> String {
    let body = serde_json::json!({
        "command": command,
        "inputs": inputs,
        "config": cfg.entries(),
    });
    sha256_hex(serde_json::to_string(&body).expect("json value").as_bytes())
}

pub fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(out: &Path) -> Self {
        Cache { dir: out.join("cache") }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The stored bytes and the parsed record, if present.
    pub fn get(&self, key: &str) -> Result<Option<(String, ResultRecord)>> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
        };
        let rec: ResultRecord =
            serde_json::from_str(&text).with_context(|| format!("corrupt cache record {}", path.display()))?;
        Ok(Some((text, rec)))
    }

    /// Writes to a temporary file and renames it into place, so readers
    /// never see a partial record. Returns the stored bytes.
    pub fn put(&self, rec: &ResultRecord) -> Result<String> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let mut text = serde_json::to_string_pretty(rec)?;
        text.push('\n');
        let tmp = self.dir.join(format!(".{}.{}.tmp", rec.key, std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(&rec.key))?;
        Ok(text)
    }

    /// Keys of all stored records, sorted.
    pub fn keys(&self) -> Result<Vec<String>> {
        let mut out = vec![];
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in entries {
            let name = entry?.file_name().to_string_lossy().into_owned();
            if let Some(key) = name.strip_suffix(".json") {
                if !name.starts_with('.') {
                    out.push(key.to_string());
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Resolves a unique key prefix.
    pub fn resolve(&self, prefix: &str) -> Result<String> {
        let hits: Vec<String> = self.keys()?.into_iter().filter(|k| k.starts_with(prefix)).collect();
        match hits.len() {
            1 => Ok(hits.into_iter().next().expect("one hit")),
            0 => anyhow::bail!("no cached record matches {prefix:?}"),
            n => anyhow::bail!("{n} cached records match {prefix:?}; use a longer prefix"),
        }
    }

    pub fn remove_all(&self) -> Result<usize> {
        let keys = self.keys()?;
        for k in &keys {
            fs::remove_file(self.path(k))?;
        }
        Ok(keys.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_abc() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn any_config_delta_changes_the_key() {
        let inputs = serde_json::json!({"group": "sym:3"});
        let a = RunConfig::default();
        let mut b = a.clone();
        b.seed = 1;
        let mut c = a.clone();
        c.out = PathBuf::from("elsewhere");
        assert_ne!(record_key("ct", &inputs, &a), record_key("ct", &inputs, &b));
        assert_eq!(record_key("ct", &inputs, &a), record_key("ct", &inputs, &c));
        assert_ne!(record_key("ct", &inputs, &a), record_key("classes", &inputs, &a));
    }

    #[test]
    fn put_then_get_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let rec = ResultRecord {
            key: "k1".into(),
            command: "ct".into(),
            config_hash: "h".into(),
            config: BTreeMap::new(),
            inputs: serde_json::json!({}),
            outputs: serde_json::json!({"holds": true}),
            text: "ok\n".into(),
            exit_code: 0,
            created_unix: 1,
            elapsed_seconds: 0.5,
            artifact_version: ARTIFACT_VERSION.into(),
        };
        let stored = cache.put(&rec).unwrap();
        let (text, back) = cache.get("k1").unwrap().unwrap();
        assert_eq!(text, stored);
        assert_eq!(back, rec);
        assert_eq!(cache.keys().unwrap(), vec!["k1".to_string()]);
        assert_eq!(cache.resolve("k").unwrap(), "k1");
        assert_eq!(cache.remove_all().unwrap(), 1);
        assert!(cache.get("k1").unwrap().is_none());
    }
}
