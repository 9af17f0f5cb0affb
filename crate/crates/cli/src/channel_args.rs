use std::path::PathBuf;

use clap::Args;
use qdoeblin::channel::{ChannelDescription, FAMILY_NAMES};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// A channel given by family name and parameters, or by a JSON file.
#[derive(Args, Clone, Debug)]
pub struct ChannelArgs {
    /// Built-in channel family.
    #[arg(long, conflicts_with = "file")]
    pub channel: Option<String>,
    /// JSON channel description (Kraus operators or a named family).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Dimension.
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, alias = "epsilon")]
    pub eps: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// State parameter as JSON: a real diagonal such as `[0.3,0.7]` or rows
    /// of `[re,im]` pairs.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Further parameters as `key=value` with a JSON value.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl ChannelArgs {
    /// Parameters keyed by name; `--set` overrides the named flags.
    pub fn params(&self) -> CliResult<Map<String, Value>> {
        let mut m = Map::new();
        if let Some(d) = self.d {
            m.insert("d".into(), d.into());
        }
        for (k, v) in [("p", self.p), ("eta", self.eta), ("q", self.q), ("eps", self.eps), ("b", self.b)] {
            if let Some(v) = v {
                m.insert(k.into(), v.into());
            }
        }
        if let Some(s) = &self.sigma {
            let v: Value = serde_json::from_str(s).map_err(|e| CliError::Usage(format!("--sigma: {e}")))?;
            m.insert("sigma".into(), v);
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            let v: Value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
            m.insert(k.to_string(), v);
        }
        Ok(m)
    }

    /// Numeric parameters for report columns: the named flags in flag order,
    /// then numeric `--set` values in the order given.
    pub fn numeric_params(&self) -> CliResult<Vec<(String, f64)>> {
        let params = self.params()?;
        let mut keys: Vec<String> = ["d", "p", "eta", "q", "eps", "b"].map(String::from).to_vec();
        for kv in &self.set {
            if let Some((k, _)) = kv.split_once('=') {
                if !keys.iter().any(|x| x == k) {
                    keys.push(k.to_string());
                }
            }
        }
        Ok(keys
            .into_iter()
            .filter_map(|k| {
                let v = params.get(&k)?.as_f64()?;
                Some((k, v))
            })
            .collect())
    }

    pub fn family(&self) -> CliResult<&str> {
        let name = self
            .channel
            .as_deref()
            .ok_or_else(|| CliError::Usage("either --channel or --file is required".into()))?;
        if !FAMILY_NAMES.contains(&name) {
            return Err(CliError::Usage(format!(
                "unknown channel {name:?}; expected one of: {}",
                FAMILY_NAMES.join(", ")
            )));
        }
        Ok(name)
    }

    pub fn description(&self) -> CliResult<ChannelDescription> {
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            return ChannelDescription::from_json(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())));
        }
        Ok(ChannelDescription::Named {
            name: self.family()?.to_string(),
            params: self.params()?,
        })
    }
}

/// Description with one parameter overridden.
pub fn with_param(base: &ChannelDescription, key: &str, value: f64) -> ChannelDescription {
    match base {
        ChannelDescription::Named { name, params } => {
            let mut params = params.clone();
            params.insert(key.to_string(), value.into());
            ChannelDescription::Named {
                name: name.clone(),
                params,
            }
        }
        other => other.clone(),
    }
}
