use std::path::Path;
use std::{env, fs};

use kolmo::compress::ExternalSpec;
use kolmo::randomness::MAX_CENSUS_LEN;
use kolmo::toyk::DEFAULT_EXACT_LIMIT;
use serde::Deserialize;

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "KOLMO_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToolkitConfig {
    pub codecs: Vec<ExternalSpec>,
    pub workers: usize,
    pub census_max_n: usize,
    pub toyk_max_len: usize,
    pub format: Format,
}

impl Default for ToolkitConfig {
    fn default() -> Self {
        Self {
            codecs: Vec::new(),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            census_max_n: MAX_CENSUS_LEN,
            toyk_max_len: DEFAULT_EXACT_LIMIT,
            format: Format::Text,
        }
    }
}

impl ToolkitConfig {
    /// Reads `path`, or the file named by `KOLMO_CONFIG`, or falls back to
    /// defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None => match env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => p.into(),
                _ => return Ok(Self::default()),
            },
        };
        let text = fs::read_to_string(&path).map_err(|e| format!("config {}: {e}", path.display()))?;
        let config: Self = serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.workers == 0 {
            return Err("workers must be at least 1".into());
        }
        if self.census_max_n > MAX_CENSUS_LEN {
            return Err(format!("census_max_n may not exceed {MAX_CENSUS_LEN}"));
        }
        if self.toyk_max_len > DEFAULT_EXACT_LIMIT {
            return Err(format!("toyk_max_len may not exceed {DEFAULT_EXACT_LIMIT}"));
        }
        for c in &self.codecs {
            if c.argv.is_empty() {
                return Err(format!("codec {:?} has an empty argv", c.name));
            }
            if kolmo::compress::BUILTIN_CODECS.contains(&c.name.as_str()) {
                return Err(format!("codec name {:?} shadows a built-in codec", c.name));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: ToolkitConfig = serde_json::from_str(r#"{"workers": 2, "format": "csv"}"#).unwrap();
        assert_eq!(c.workers, 2);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.census_max_n, 16);
    }

    #[test]
    fn rejects_bad_limits() {
        let c = ToolkitConfig { workers: 0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = ToolkitConfig { census_max_n: 17, ..Default::default() };
        assert!(c.validate().is_err());
    }
}
