//! Key-value configuration with environment overrides for paths.
//!
//! ```text
//! # comment
//! roles = resources/roles.txt
//! light_verbs = resources/light_verbs.txt
//! normalization = frame        # raw | text | frame
//! entropy_base = nats          # nats | bits
//! window_before = 2
//! window_after = 1
//! seed = 13
//! fractions = 0.8, 0.1, 0.1
//! strict = true
//! ```
//!
//! Relative paths are resolved against the config file's directory.
//! `SUPERSEM_ROLES` and `SUPERSEM_LIGHT_VERBS` override the two paths.

use std::path::{Path, PathBuf};

use supersem_core::analysis::EntropyBase;
use supersem_core::corpus::LoadOptions;
use supersem_core::eval::MatchPolicy;
use supersem_core::{LightVerbs, RoleInventory};

use crate::CliError;

pub const ENV_ROLES: &str = "SUPERSEM_ROLES";
pub const ENV_LIGHT_VERBS: &str = "SUPERSEM_LIGHT_VERBS";

const KEYS: [&str; 9] = [
    "roles",
    "light_verbs",
    "normalization",
    "entropy_base",
    "window_before",
    "window_after",
    "seed",
    "fractions",
    "strict",
];

#[derive(Debug, Clone)]
pub struct Config {
    pub roles_path: Option<PathBuf>,
    pub light_verbs_path: Option<PathBuf>,
    pub roles: RoleInventory,
    pub light_verbs: LightVerbs,
    pub normalization: MatchPolicy,
    pub entropy_base: EntropyBase,
    pub window_before: usize,
    pub window_after: usize,
    pub seed: u64,
    pub fractions: (f64, f64, f64),
    pub strict: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            roles_path: None,
            light_verbs_path: None,
            roles: RoleInventory::default(),
            light_verbs: LightVerbs::default(),
            normalization: MatchPolicy::Frame,
            entropy_base: EntropyBase::Nats,
            window_before: 2,
            window_after: 1,
            seed: 13,
            fractions: (0.8, 0.1, 0.1),
            strict: true,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| usage(format!("config line {line}: invalid value {value:?} for {key}")))
}

pub fn parse_fractions(value: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<f64> = value
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("invalid fraction {p:?}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected three fractions, got {}", parts.len())),
    }
}

fn existing(path: PathBuf, what: &str) -> Result<PathBuf, CliError> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(usage(format!("{what} file {} does not exist", path.display())))
    }
}

impl Config {
    /// Loads `path` (if any), then applies environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Config, CliError> {
        let mut cfg = Config::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            let base = path.parent().unwrap_or(Path::new("."));
            cfg.apply(&text, base)?;
        }
        if let Ok(p) = std::env::var(ENV_ROLES) {
            cfg.roles_path = Some(existing(PathBuf::from(p), ENV_ROLES)?);
        }
        if let Ok(p) = std::env::var(ENV_LIGHT_VERBS) {
            cfg.light_verbs_path = Some(existing(PathBuf::from(p), ENV_LIGHT_VERBS)?);
        }
        if let Some(p) = &cfg.roles_path {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            cfg.roles = RoleInventory::parse(&text)
                .map_err(|bad| usage(format!("{}: invalid role label {bad:?}", p.display())))?;
        }
        if let Some(p) = &cfg.light_verbs_path {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            cfg.light_verbs = LightVerbs::parse(&text);
        }
        Ok(cfg)
    }

    fn apply(&mut self, text: &str, base: &Path) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| usage(format!("config line {line}: expected key = value")))?;
            if !KEYS.contains(&key) {
                return Err(usage(format!("config line {line}: unknown key {key:?}")));
            }
            match key {
                "roles" => self.roles_path = Some(existing(base.join(value), "roles")?),
                "light_verbs" => self.light_verbs_path = Some(existing(base.join(value), "light_verbs")?),
                "normalization" => {
                    self.normalization = value
                        .parse()
                        .map_err(|e: String| usage(format!("config line {line}: {e}")))?
                }
                "entropy_base" => {
                    self.entropy_base = value
                        .parse()
                        .map_err(|e: String| usage(format!("config line {line}: {e}")))?
                }
                "window_before" => self.window_before = parse_num(key, value, line)?,
                "window_after" => self.window_after = parse_num(key, value, line)?,
                "seed" => self.seed = parse_num(key, value, line)?,
                "strict" => self.strict = parse_num(key, value, line)?,
                "fractions" => {
                    self.fractions = parse_fractions(value).map_err(|e| usage(format!("config line {line}: {e}")))?
                }
                _ => unreachable!("key list checked above"),
            }
        }
        Ok(())
    }

    pub fn load_options(&self) -> LoadOptions {
        LoadOptions {
            roles: self.roles.clone(),
            strict: self.strict,
        }
    }
}
