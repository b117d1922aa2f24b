use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Error in how the tool was invoked; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Contents of a `--config` file. Each subcommand section uses the same
/// keys as that subcommand's long flags, with `-` written as `_`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub characterize: Option<Value>,
    pub infer: Option<Value>,
    pub sweep: Option<Value>,
    pub compare: Option<Value>,
    pub flowgen: Option<Value>,
    pub booleanize: Option<Value>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?
        };
        Ok(parsed)
    }
}

/// Overlays every flag that was given onto the matching config-file section.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, section: Option<&Value>, name: &str) -> Result<T> {
    let mut base = match section {
        Some(Value::Object(m)) => m.clone(),
        Some(_) => return Err(usage(format!("config section [{name}] must be a table"))),
        None => serde_json::Map::new(),
    };
    if let Value::Object(m) = serde_json::to_value(flags)? {
        for (k, v) in m {
            let given = match &v {
                Value::Null => false,
                Value::Bool(b) => *b,
                Value::Array(a) => !a.is_empty(),
                _ => true,
            };
            if given {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| usage(format!("config section [{name}]: {e}")))
}

/// Output files of one run; refuses to clobber unless forced.
pub struct Outputs {
    dir: PathBuf,
    force: bool,
}

impl Outputs {
    pub fn new(dir: PathBuf, force: bool) -> Self {
        Outputs { dir, force }
    }

    /// Checks every target before anything is written.
    pub fn check(&self, names: &[&str]) -> Result<()> {
        if self.force {
            return Ok(());
        }
        for name in names {
            let path = self.dir.join(name);
            if path.exists() {
                anyhow::bail!("{} exists; pass --force to overwrite", path.display());
            }
        }
        Ok(())
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
