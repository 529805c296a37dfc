//! Settings resolved from flags, an optional `key = value` file, `CHYP_TOL`
//! and defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chyp::isometry::DEFAULT_EPS;

use crate::CliError;

const KEYS: &[&str] = &[
    "n",
    "alpha",
    "maxlen",
    "depth",
    "resolution",
    "out_dir",
    "format",
    "tol",
    "convention",
    "p",
    "q",
    "r",
    "genus",
    "beta",
];

#[derive(Debug, Default)]
pub struct ConfigFile(BTreeMap<String, String>);

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let k = k.trim().replace('-', "_");
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key {k}", lineno + 1)));
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Self(map))
    }

    /// The flag if given, else the file's value for `key`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.0
            .get(key)
            .map(|v| v.parse().map_err(|_| CliError::Usage(format!("config value for {key} is malformed: {v}"))))
            .transpose()
    }

    pub fn pick_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub tol: f64,
}

impl RunConfig {
    pub fn resolve(file: &ConfigFile, out_dir: Option<PathBuf>, tol: Option<f64>) -> Result<Self, CliError> {
        let env_tol = match std::env::var("CHYP_TOL") {
            Ok(v) => Some(v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("CHYP_TOL is malformed: {v}")))?),
            Err(_) => None,
        };
        let tol = file.pick(tol, "tol")?.or(env_tol).unwrap_or(DEFAULT_EPS);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
        }
        let out_dir = file.pick(out_dir, "out_dir")?.unwrap_or_else(|| PathBuf::from("."));
        Ok(Self { out_dir, tol })
    }
}
