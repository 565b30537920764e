//! Flat `section.key=value` configuration files, experiment presets, and the
//! run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Parsed configuration: flat map from `section.key` to raw string value.
/// CLI flags always override config keys.
#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    /// FNV-1a hash of the raw file contents, recorded in the manifest.
    pub content_hash: u64,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got `{raw}`", lineno + 1))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values, content_hash: fnv1a(text.as_bytes()) })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("key {key}: cannot parse `{raw}`"))),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Directory holding experiment presets: `$BOXANNEAL_EXPERIMENTS_DIR`, or
/// `./experiments` when unset.
pub fn experiments_dir() -> PathBuf {
    std::env::var_os("BOXANNEAL_EXPERIMENTS_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("experiments"))
}

/// Loads the preset `name` (a `.conf` file in the experiments directory).
pub fn load_preset(name: &str) -> Result<Config> {
    let path = experiments_dir().join(format!("{name}.conf"));
    if !path.exists() {
        return Err(Error::Config(format!(
            "preset `{name}` not found at {}",
            path.display()
        )));
    }
    Config::load(&path)
}

/// Per-run provenance record, written next to every output file.
#[derive(Debug, serde::Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub subcommand: String,
    pub version: &'static str,
    /// Seconds since the Unix epoch; the only non-reproducible field.
    pub timestamp: u64,
    pub config_hash: String,
    pub parameters: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config_hash: u64) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            schema: "boxanneal.manifest/1",
            subcommand: subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            timestamp,
            config_hash: format!("{config_hash:016x}"),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Writes `<out>.manifest.json`.
    pub fn write_next_to(&self, out: &Path) -> Result<()> {
        let mut path = out.as_os_str().to_owned();
        path.push(".manifest.json");
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("manifest serialization: {e}")))?;
        std::fs::write(PathBuf::from(path), text)?;
        Ok(())
    }
}
